"""Numerical geometry of the Heisenberg group H^n.

Group law and homogeneous metric, homogeneous subgroups and the intrinsic
Grassmannian, cones and paraboloids, empirical measures, tangent-subgroup
fitting and randomized checks of quantitative lemmas.
"""
from .algebra import HPoint, dilate, dist, hom_norm, identity, inv, mul, omega
from .errors import (
    GrassmannianError,
    HGeomError,
    InsufficientDataError,
    InvalidInputError,
    NotASubgroupError,
    PreconditionError,
    SamplingStarvedError,
)
from .measure import DensityReport, PointCloud, cover_measure, density_at, out_of_cone_mass
from .regions import Cone, Cylinder, Paraboloid, TruncatedCone, dist_to_subgroup, region_contains
from .subgroups import (
    SplitPair,
    Subgroup,
    complement,
    is_complementary_pair,
    is_in_grassmannian,
    make_subgroup,
    project_split,
    rho_metric,
)
from .tangent import TangentReport, classify_cloud, fit_tangent

__version__ = "0.1.0"

__all__ = [
    "HPoint", "dilate", "dist", "hom_norm", "identity", "inv", "mul", "omega",
    "GrassmannianError", "HGeomError", "InsufficientDataError", "InvalidInputError",
    "NotASubgroupError", "PreconditionError", "SamplingStarvedError",
    "DensityReport", "PointCloud", "cover_measure", "density_at", "out_of_cone_mass",
    "Cone", "Cylinder", "Paraboloid", "TruncatedCone", "dist_to_subgroup", "region_contains",
    "SplitPair", "Subgroup", "complement", "is_complementary_pair", "is_in_grassmannian",
    "make_subgroup", "project_split", "rho_metric",
    "TangentReport", "classify_cloud", "fit_tangent",
]
