"""Finite topological preordered spaces: classification, monotone separation,
isotone extension, quotients, streaming separation over exhaustions and
utility representations, all in exact rational arithmetic."""
from .errors import (ConditionViolated, InternalError, InvalidInput, InvalidSpace,
                     NotApplicable, NotFound, NotSeparable, ParseError, TooLarge,
                     TPSError)
from .exhaustion import (Exhaustion, SeparationTrace, TraceStep, limit_open_check,
                         stream_extend, stream_separate, validate_exhaustion)
from .functions import (MonotoneFn, alpha, combine_alpha, is_continuous, is_isotone,
                        is_utility, weighted_sum)
from .preorder import (Classification, Preorder, PreorderedSpace, check_subspace_inheritance,
                       classify, closed_dec_hull, closed_inc_hull, dec_hull,
                       enumerate_monotone_opens, inc_hull, interpolate, is_closed_preorder,
                       make_preorder, make_space)
from .quotient import (check_quotient_closed, check_remark_equivalences, quotient_by_map,
                       quotient_space)
from .separation import (SeparatorPair, check_extension_condition, extend_isotone,
                         extend_with_pinning, perfectly_separate, separate, urysohn)
from .topology import (FiniteTopology, closure, disjoint_union, interior, make_topology,
                       minimal_neighborhood, product, subspace)
from .utility import (isotone_representation, utilities_from_isotones,
                      utility_representation, verify_representation)

__version__ = "0.1.0"
