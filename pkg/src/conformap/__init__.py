"""Conformal flattening of disk-topology triangle meshes with boundary control."""

import os

if os.environ.get("BFF_THREADS"):
    # cap BLAS/OpenMP pools before numpy/scipy spin them up
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, os.environ["BFF_THREADS"])

from .errors import (  # noqa: E402
    AlreadyOpenWithCuts,
    AngleSumViolation,
    ConeNotReachable,
    ConeSumViolation,
    ConformapError,
    DegenerateFace,
    DimensionMismatch,
    NoConvergence,
    NonManifold,
    NonPositiveLength,
    NotADisk,
    NotPositiveDefinite,
    WindingMismatch,
)
from .mesh import (  # noqa: E402
    DiscreteCurvatures,
    DiskMesh,
    SeamMap,
    SurfaceMesh,
    cut_to_disk,
    discrete_curvatures,
    interior_angles,
)
from .laplace import CotanMatrix, FactoredLaplace, build_laplace, factor, counters  # noqa: E402
from .steklov import (  # noqa: E402
    conjugate_extend,
    dirichlet_to_neumann,
    harmonic_extend,
    hilbert_transform,
    neumann_to_dirichlet,
)
from .flatten import (  # noqa: E402
    EXTERIOR_ANGLES,
    HARMONIC,
    HOLOMORPHIC,
    SCALE_FACTORS,
    BoundaryConditions,
    BoundaryCurve,
    Flattener,
    Flattening,
    best_fit_curve,
    extend_curve,
    target_lengths,
)

__version__ = "0.1.0"
