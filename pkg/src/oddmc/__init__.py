"""oddmc: first-order properties of structures presented by
width-bounded ordered decision diagrams, decided and counted through
automata over layer alphabets."""

from ._backend import BACKEND_NAME
from .alphabet import PAD, tensor_strings, untensor
from .automaton import (
    Dfa,
    Nfa,
    fa_accepts,
    fa_count_exact_length,
    fa_determinize,
    fa_difference,
    fa_intersect,
    fa_is_empty,
    fa_union,
    make_nfa,
)
from .engine import CheckResult, check_class, count_assignments, model_check
from .errors import (
    CompileError,
    FormatError,
    FormulaSyntaxError,
    MalformedConvolutionError,
    OddmcError,
    OddValidationError,
    ResourceLimitError,
)
from .fo import Formula, compile_formula, free_vars, normalize, parse_formula
from .odd import (
    Layer,
    Odd,
    binarize_odd,
    default_binary_encoding,
    enumerate_language,
    make_layer,
    make_odd,
    odd_accepts,
    odd_to_nfa,
    pad_to_length,
    validate_odd,
)
from .oracle import ExplicitStructure, count_brute, derive_structure, eval_fo, \
    verify_binarize_iso
from .relations import (
    RelationAutomaton,
    TrackSpec,
    TrackSupport,
    enumerate_tuples,
    rel_bool,
    rel_complement_within,
    rel_direct_sum,
    rel_fold,
    rel_from_tuples,
    rel_identify,
    rel_intersect,
    rel_perm,
    rel_proj,
    rel_unfold,
    rel_union,
)
from .structural import (
    ClassAutomaton,
    StructuralTuple,
    Support,
    Vocabulary,
    hypercube_class,
    hypercube_tuple,
    membership_rel,
    multi_membership,
    bounded_strings,
    non_membership,
    odd_pair,
    string_to_tuple,
    structural_universe,
    subset_rel,
    support_from_class,
    support_from_tuple,
    tuple_to_string,
    universe_odds,
    validate_structural,
)

__version__ = "0.1.0"
