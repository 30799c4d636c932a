"""toposlab: a workbench for finite presheaf toposes.

Builds small sites, computes limits, exponentials and the subobject
classifier, certifies homotopy theories (pieces, identity, bang, and the
quotient of any Lawvere-Tierney topology) on registered families, and
machine-checks connectedness, contractibility, cohesion postulates and
their consequences on concrete toposes.
"""

from .config import Config, DEFAULT
from .errors import (BudgetExceeded, CertificationError, DocumentError,
                     HomSetTooLarge, InternalCheckFailure, PreconditionError,
                     PresentationOverflow, ShapeMismatch, ToposError)
from .fincat import (FinCategory, FinFunctor, builtin, every_object_has_point,
                     from_presentation, opposite, terminal_object,
                     validate_category)
from .presheaf import (Presheaf, PresheafMap, Subobject, Topos, identity_map)
from .pieces import (AdjunctionCertificate, PiecesResult, certify_pieces_adjunction,
                     codiscrete, discrete, pi0, pi0_arrow, points,
                     points_subobject, theta)
from .homotopy import (HomClasses, HomotopyTheory, decidables_adjunction,
                       ep_compose, ep_copair, ep_extensivity_check,
                       ep_hom_action, ep_pair, ep_transpose, hom_classes,
                       homotopic, make_theory, name_partition)
from .ltopology import (LTTopology, double_negation, enumerate_topologies,
                        closure, is_closed, is_dense, is_separated,
                        mod_relation, quotient, quotient_universal, sheafify,
                        homotopy_lift, validate_topology)
from .cohesion import (CohesionReport, ExplicitHomotopy, build_R, check_DSO,
                       check_NS, check_WDQO, classify,
                       explicit_homotopy_search, is_connected,
                       is_contractible, is_decidable, monoid_zero_check,
                       no_motion, sheaf_connectedness_check,
                       verify_explicit_implies_homotopic)
from .workspace import Workspace, standard_workspace
from .dsl import parse

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
