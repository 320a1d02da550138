"""Exact arithmetic of cyclic normic bundles: Brauer quotients, prescribed-
group constructions, tame local invariants, and obstruction classification."""

from .brauer import FactorData, NormicBundleDesc, compute_brauer
from .construct import construct_bundle, verify_plan
from .errors import InternalCheckError, SchemaError, SearchExhausted
from .obstruct import classify_obstruction, phi_image, plan_targets, total_set
from .places import PlaceModel, cyclic_invariant
from .schemas import SCHEMA_VERSION

__version__ = SCHEMA_VERSION

__all__ = [
    "FactorData",
    "NormicBundleDesc",
    "compute_brauer",
    "construct_bundle",
    "verify_plan",
    "InternalCheckError",
    "SchemaError",
    "SearchExhausted",
    "classify_obstruction",
    "phi_image",
    "plan_targets",
    "total_set",
    "PlaceModel",
    "cyclic_invariant",
    "SCHEMA_VERSION",
    "__version__",
]
