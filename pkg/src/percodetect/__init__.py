"""Statistical object detection in noisy images via percolation clusters.

The pipeline: threshold a noisy image into 0/1 site activity on a lattice
(4-, 6- or 8-neighborhood), find the largest connected cluster of active
sites, and compare it against the simulated null distribution of the
maximum cluster size. The null cdf comes from the Newman-Ziff scheme
(random visiting order plus binomial convolution); a two-region variant
with an elevated probability on a subgrid serves as the alternative for
power estimates.
"""

from ._backend import backend_name as kernel_backend
from .clustering import (
    ClusterLabeling,
    DepthLabeling,
    dfs_spanning_tree,
    label_components,
    largest_cluster_size,
)
from .detection import (
    DetectionResult,
    NullDistribution,
    PowerEstimate,
    critical_value,
    detect,
    power_estimate,
)
from .image import (
    BinaryImage,
    GrayImage,
    NetpbmError,
    ThresholdDirection,
    generate_percolation,
    load_binary,
    load_gray,
    save_binary,
    save_gray,
    threshold,
)
from .inhomogeneous import (
    JointMaxSizeTable,
    Subgrid,
    convolve_cdf_joint,
    estimate_cdf_inhomogeneous,
    nz_run_modified,
    rect_subgrid,
)
from .lattice import Lattice, Topology, build_lattice
from .newman_ziff import (
    REFERENCE_PROBABILITIES,
    BinomialPmf,
    CdfEstimate,
    MaxSizeCurve,
    binomial_pmf,
    convolve_cdf,
    estimate_cdf,
    nz_run,
    sweep,
)
from .rng import RngStream, random_permutation
from .store import load_cdf, save_cdf

__version__ = "0.1.0"

__all__ = [
    "BinaryImage",
    "BinomialPmf",
    "CdfEstimate",
    "ClusterLabeling",
    "DepthLabeling",
    "DetectionResult",
    "GrayImage",
    "JointMaxSizeTable",
    "Lattice",
    "MaxSizeCurve",
    "NetpbmError",
    "NullDistribution",
    "PowerEstimate",
    "REFERENCE_PROBABILITIES",
    "RngStream",
    "Subgrid",
    "ThresholdDirection",
    "Topology",
    "binomial_pmf",
    "build_lattice",
    "convolve_cdf",
    "convolve_cdf_joint",
    "critical_value",
    "detect",
    "dfs_spanning_tree",
    "estimate_cdf",
    "estimate_cdf_inhomogeneous",
    "generate_percolation",
    "kernel_backend",
    "label_components",
    "largest_cluster_size",
    "load_binary",
    "load_cdf",
    "load_gray",
    "nz_run",
    "nz_run_modified",
    "power_estimate",
    "random_permutation",
    "rect_subgrid",
    "save_binary",
    "save_cdf",
    "save_gray",
    "sweep",
    "threshold",
]
