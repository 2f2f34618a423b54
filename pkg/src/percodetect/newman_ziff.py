"""Distribution of the maximum cluster size via the Newman-Ziff scheme.

One run visits the lattice sites in a uniformly random order while a
union-find structure tracks the largest cluster after every addition. The
conditional law of the largest cluster given the number of active sites
does not depend on the occupation probability p, so a single run curve,
convolved with the binomial law of the active-site count, yields one
single-run estimate of P(M <= k) for any p; averaging over independent
runs gives the Monte Carlo cdf estimate.

Runs are assigned the streams (seed, 0), (seed, 1), ... and per-run
results are reduced in run-index order, so estimates are bit-identical
regardless of the worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.stats

from ._backend import kernels
from ._parallel import ordered_map
from .lattice import Lattice, Topology
from .rng import RngStream, random_permutation

REFERENCE_PROBABILITIES = (
    0.1, 0.2, 0.3, 0.4, 0.42, 0.44, 0.46, 0.48, 0.5,
    0.52, 0.54, 0.56, 0.58, 0.6, 0.7, 0.8, 0.9,
)


@dataclass(frozen=True)
class MaxSizeCurve:
    """sizes[n] = largest cluster with the first n visited sites occupied.

    Length is site_count + 1 with sizes[0] == 0; nondecreasing, and
    sizes[n] <= n.
    """

    sizes: np.ndarray


@dataclass(frozen=True)
class BinomialPmf:
    """Binomial(trials, p) weights for the number of active sites."""

    weights: np.ndarray
    trials: int
    p: float


@dataclass(frozen=True)
class CdfEstimate:
    """Estimated P(M <= k) for k = 0..S, with simulation provenance.

    The lattice descriptor and seed are optional for partial results
    (e.g. a single-run convolution); persistence requires them.
    """

    values: np.ndarray
    rows: int | None = None
    cols: int | None = None
    topology: Topology | None = None
    runs: int | None = None
    seed: int | None = None
    p: float | None = None
    p_in: float | None = None
    p_out: float | None = None
    subgrid_rect: tuple[int, int, int, int] | None = None

    @property
    def site_count(self) -> int:
        return len(self.values) - 1


def _check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p


def nz_run(lattice: Lattice, rng: RngStream) -> MaxSizeCurve:
    """One run: occupy all sites in random order, tracking the largest cluster."""
    order = random_permutation(lattice.site_count, rng)
    sizes = kernels.max_cluster_curve(lattice.nbr_indices, lattice.nbr_starts, order)
    return MaxSizeCurve(sizes)


def binomial_pmf(trials: int, p: float) -> BinomialPmf:
    """Binomial weights b(n) = C(trials, n) p^n (1-p)^(trials-n), n = 0..trials.

    Computed in log space (scipy), so large site counts stay stable.
    """
    p = _check_probability(p)
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    weights = scipy.stats.binom.pmf(np.arange(trials + 1), trials, p)
    return BinomialPmf(weights, trials, p)


def _convolve_values(sizes: np.ndarray, pmf: BinomialPmf) -> np.ndarray:
    # sizes is nondecreasing, so {n : sizes[n] <= k} is a prefix and the
    # indicator sum collapses to one cumulative-weight lookup per k.
    site_count = len(sizes) - 1
    cum = np.concatenate(([0.0], np.cumsum(pmf.weights)))
    idx = np.searchsorted(sizes, np.arange(site_count + 1), side="right")
    # normalize by the total weight so that F(S) == 1 exactly
    return cum[idx] / cum[-1]


def convolve_cdf(curve: MaxSizeCurve, pmf: BinomialPmf) -> CdfEstimate:
    """Single-run cdf estimate: F(k) = sum_n 1{sizes[n] <= k} b(n).

    The n = 0 term uses sizes[0] = 0, i.e. the empty configuration.
    """
    site_count = len(curve.sizes) - 1
    if pmf.trials != site_count:
        raise ValueError(
            f"curve covers {site_count} sites but pmf has {pmf.trials} trials"
        )
    return CdfEstimate(values=_convolve_values(curve.sizes, pmf), runs=1, p=pmf.p)


def _curve_worker(payload, stream_id: int) -> np.ndarray:
    lattice, seed = payload
    return nz_run(lattice, RngStream(seed, stream_id)).sizes


def _iter_curves(lattice, seed, runs, threads, first_stream=0):
    args = [first_stream + i for i in range(runs)]
    return ordered_map(_curve_worker, (lattice, seed), args, threads)


def _estimate(lattice, p, runs, seed, threads, first_stream) -> CdfEstimate:
    pmf = binomial_pmf(lattice.site_count, p)
    acc = np.zeros(lattice.site_count + 1)
    for sizes in _iter_curves(lattice, seed, runs, threads, first_stream):
        acc += _convolve_values(sizes, pmf)
    return CdfEstimate(
        values=acc / runs,
        rows=lattice.rows,
        cols=lattice.cols,
        topology=lattice.topology,
        runs=runs,
        seed=seed,
        p=pmf.p,
    )


def estimate_cdf(
    lattice: Lattice, p: float, runs: int, seed: int, threads: int = 1
) -> CdfEstimate:
    """Average the single-run cdf estimates of ``runs`` independent runs.

    Run i draws from the stream (seed, i); the output is deterministic
    given (seed, runs) for any ``threads``.
    """
    if runs < 1:
        raise ValueError(f"runs must be positive, got {runs}")
    _check_probability(p)
    return _estimate(lattice, p, runs, seed, threads, first_stream=0)


def sweep(
    lattice: Lattice,
    probabilities,
    runs: int,
    seed: int,
    threads: int = 1,
    reuse_curves: bool = True,
) -> list[CdfEstimate]:
    """Estimate the cdf at several occupation probabilities.

    The run curves do not depend on p, so by default one ensemble of curves
    (streams (seed, 0..runs-1)) is shared by all probabilities and only the
    binomial convolution changes; each estimate then equals
    ``estimate_cdf`` at that p exactly. ``reuse_curves=False`` instead
    simulates a fresh ensemble per probability, with probability j using
    streams (seed, j*runs .. j*runs+runs-1).
    """
    probs = [_check_probability(p) for p in probabilities]
    if not probs:
        raise ValueError("at least one probability is required")
    if runs < 1:
        raise ValueError(f"runs must be positive, got {runs}")

    if not reuse_curves:
        return [
            _estimate(lattice, p, runs, seed, threads, first_stream=j * runs)
            for j, p in enumerate(probs)
        ]

    curves = list(_iter_curves(lattice, seed, runs, threads))
    estimates = []
    for p in probs:
        pmf = binomial_pmf(lattice.site_count, p)
        acc = np.zeros(lattice.site_count + 1)
        for sizes in curves:
            acc += _convolve_values(sizes, pmf)
        estimates.append(
            CdfEstimate(
                values=acc / runs,
                rows=lattice.rows,
                cols=lattice.cols,
                topology=lattice.topology,
                runs=runs,
                seed=seed,
                p=p,
            )
        )
    return estimates
