"""Exact normal forms in relatively free algebras of identity-defined
varieties, with Veronese and invariant subalgebras."""

__version__ = "0.1.0"

from .engine import (
    CapExceededError,
    ComponentNormalizer,
    NormalVector,
    dim_table,
    is_identity,
    normal_form,
    normalizer,
    quotient_dim,
    tideal_component,
)
from .graded import GradedSubspace
from .groups import LinearGroupAction, load_group_file, parse_group, reynolds
from .identities import (
    ALTERNATIVE,
    ASSOCIATIVE,
    NONASSOC_FREE,
    RIGHT_ALTERNATIVE,
    IdentitySet,
    load_identity_file,
    variety,
)
from .split import eval_split, is_zero_split, split_rank
from .structure import (
    assoc_nucleus_component,
    center_component,
    d_chain_component,
    nucleus_component,
    pigeonhole_witness,
)
from .termlang import format_poly, parse
from .terms import FreePoly, Monomial, associator, circ, commutator, left_power, linearize, substitute
from .veronese import (
    GeneratorReport,
    VeroneseConfig,
    invariant_component,
    invariant_generators,
    new_generators,
    veronese_component,
)
