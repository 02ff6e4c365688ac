"""Monochromatic tight Berge-path coverings of edge-coloured complete k-graphs.

A library and CLI for three tasks: building families of at most s
monochromatic t-tight Berge-paths whose cores cover a vertex prefix under any
s*(k-t+1)-colouring, generating the blocking colouring with one extra colour
that defeats every such family at scale, and certifying small instances by
exhaustive search. All runs are deterministic and emit verifiable JSON.
"""

from .adversary import (
    AdversarialOracle,
    BlockLayout,
    CoverSearchResult,
    adversary_colour,
    brute_force_cover_check,
    check_eq1,
    counting_diagnostics,
    lex_subsets,
)
from .core import (
    BergePath,
    Edge,
    Params,
    VerifyReport,
    Violation,
    as_edge,
    consecutive_tuples,
    verify_berge_path,
    verify_family,
)
from .errors import (
    BergeError,
    BudgetExceededError,
    Inconclusive,
    OracleLoadError,
    OutOfWindowError,
    ParameterError,
    SizeGuardError,
)
from .oracles import (
    ColouringOracle,
    ExplicitOracle,
    RandomOracle,
    load_colouring,
    load_explicit_oracle,
    make_random_oracle,
)
from .partition import (
    BuildConfig,
    BuilderState,
    Certificate,
    assign_colour_classes,
    cover_prefix,
    extend_path,
)
from .ramsey import (
    CliqueChain,
    ColourBlocks,
    InducedColouring,
    build_clique_chain,
    clique_colouring,
    find_homogeneous_set,
    induced_multicolouring,
    select_max_mono_clique,
)

__version__ = "0.1.0"
