"""Right-tail hypothesis test on the largest cluster size.

Under the null hypothesis (pure noise) every site is active with the same
probability, and the null law of the maximum cluster size M comes from the
simulated cdf. The test rejects when the observed largest cluster reaches
the critical value t = min{k : P(M >= k) <= alpha}; equivalently, when the
p-value 1 - F(m - 1) is at most alpha. The rule is conservative at the
discreteness boundary (no randomization), so the achieved size can be
below alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import label_components
from .image import BinaryImage
from .inhomogeneous import Subgrid, estimate_cdf_inhomogeneous
from .lattice import Lattice
from .newman_ziff import CdfEstimate, estimate_cdf


@dataclass(frozen=True)
class NullDistribution:
    """Null law of the maximum cluster size, from simulation or enumeration."""

    cdf: CdfEstimate

    @property
    def site_count(self) -> int:
        return self.cdf.site_count


@dataclass(frozen=True)
class DetectionResult:
    observed_max: int
    critical_value: int  # site_count + 1 when the test can never reject
    p_value: float
    alpha: float
    detected: bool

    def as_dict(self) -> dict:
        return {
            "observed_max": self.observed_max,
            "critical_value": self.critical_value,
            "p_value": self.p_value,
            "alpha": self.alpha,
            "detected": self.detected,
        }


@dataclass(frozen=True)
class PowerEstimate:
    """Type II error of the test against a two-region alternative.

    ``never_rejects`` flags the degenerate case where no cluster size can
    reach the critical value at the requested level (beta is then 1).
    """

    beta: float
    critical_value: int
    alpha: float
    never_rejects: bool = False

    @property
    def power(self) -> float:
        return 1.0 - self.beta


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha


def _tails(cdf_values: np.ndarray) -> np.ndarray:
    # tails[k] = P(M >= k) = 1 - F(k - 1), with F(-1) = 0
    tails = np.empty_like(cdf_values)
    tails[0] = 1.0
    tails[1:] = 1.0 - cdf_values[:-1]
    return tails


def critical_value(null: NullDistribution, alpha: float) -> int:
    """Smallest cluster size whose null tail probability is at most alpha.

    Returns site_count + 1 as a sentinel when even the full lattice is not
    rare enough, i.e. the test can never reject at this level.
    """
    alpha = _check_alpha(alpha)
    tails = _tails(null.cdf.values)
    hits = np.nonzero(tails <= alpha)[0]
    return int(hits[0]) if hits.size else null.site_count + 1


def detect(
    image: BinaryImage, lattice: Lattice, null: NullDistribution, alpha: float
) -> DetectionResult:
    """Run the test: label the image, compare the largest cluster to the null."""
    alpha = _check_alpha(alpha)
    meta = null.cdf
    if meta.rows is None or meta.cols is None:
        raise ValueError("null distribution lacks lattice provenance metadata")
    if (meta.rows, meta.cols) != (lattice.rows, lattice.cols) or (
        meta.topology is not None and meta.topology != lattice.topology
    ):
        raise ValueError(
            f"null distribution was simulated for {meta.rows}x{meta.cols} "
            f"({meta.topology}), not {lattice.rows}x{lattice.cols} ({lattice.topology})"
        )
    if (image.rows, image.cols) != (lattice.rows, lattice.cols):
        raise ValueError(
            f"image is {image.rows}x{image.cols} but the null distribution covers "
            f"{meta.rows}x{meta.cols}"
        )

    observed = label_components(image, lattice).largest
    tails = _tails(meta.values)
    p_value = float(tails[observed])
    t = critical_value(null, alpha)
    return DetectionResult(
        observed_max=observed,
        critical_value=t,
        p_value=p_value,
        alpha=alpha,
        detected=observed >= t,
    )


def power_estimate(
    lattice: Lattice,
    subgrid: Subgrid,
    p_in: float,
    p_out: float,
    alpha: float,
    runs: int,
    seed: int,
    threads: int = 1,
) -> PowerEstimate:
    """Estimate the type II error beta against a two-region alternative.

    Simulates the homogeneous null at p_out, takes its critical value t,
    then evaluates the inhomogeneous alternative cdf at t - 1. The null
    and alternative ensembles use sub-seeds derived from ``seed`` via
    SeedSequence, so the result is deterministic given (seed, runs).
    """
    alpha = _check_alpha(alpha)
    if p_in < p_out:
        raise ValueError(f"p_in must be at least p_out, got {p_in} < {p_out}")
    null_seed, alt_seed = (
        int(s) for s in np.random.SeedSequence(seed).generate_state(2, dtype=np.uint64)
    )
    null = NullDistribution(estimate_cdf(lattice, p_out, runs, null_seed, threads))
    t = critical_value(null, alpha)
    if t > lattice.site_count:
        return PowerEstimate(beta=1.0, critical_value=t, alpha=alpha, never_rejects=True)
    alt = estimate_cdf_inhomogeneous(lattice, subgrid, p_in, p_out, runs, alt_seed, threads)
    beta = float(alt.values[t - 1]) if t >= 1 else 0.0
    return PowerEstimate(beta=beta, critical_value=t, alpha=alpha)
