"""Free-group word calculus, coset enumeration with proof extraction, and
search tooling for expressing commutators of commutators as products of cubes.
"""

from .words import (
    Alphabet,
    DEFAULT_ALPHABET,
    Word,
    base_words,
    canonical_rep,
    commutator,
    commutator_of_commutators,
    conjugate,
    cyclic_reduce,
    format_word,
    free_reduce,
    invert,
    parse_word,
    power,
)
from .proofwords import (
    CubeProduct,
    ProofWord,
    ProofStats,
    absorb_conjugation,
    bracket_concat,
    conjugate_cube_product,
    cube_product_value,
    format_proofword,
    is_cube,
    parse_proofword,
    proof_stats,
    residue,
    shuffle_subgens,
    splice,
    split,
    to_cubes,
    validate,
    value,
)
from .presentations import (
    BurnsideParams,
    Presentation,
    SubgroupSpec,
    expected_index,
    expected_order,
    random_presentation,
    read_presentation,
    write_presentation,
)
from .todd_coxeter import (
    CosetTable,
    EnumResult,
    Ledger,
    certify_exponent3,
    enumerate_cosets,
)
from .extraction import (
    EdgeProof,
    Extractor,
    ProofTooLarge,
    edge_proof,
    extract,
    rewrite_as_cubes,
)
from .search import TrialConfig, TrialResult, cube_pipeline, run_campaign, run_trial

__all__ = [name for name in dir() if not name.startswith("_")]
