"""Exact tame symbols, K2 invariants, and reciprocity checks on the node
ring F_q[[u, x, y]] / (x*y - u^M)."""

from .errors import (
    AmbiguousZero,
    CertificateInvalid,
    NodetameError,
    NotAGenerator,
    NotAnNthPower,
    NotAUnit,
    NotAUnitAtPrime,
    ParseError,
    PrecisionExhausted,
    SpecMismatch,
    TamenessViolated,
    UnknownPrime,
    WildRoot,
)
from .ff import FieldSpec, FqElt, dlog, field_spec, norm, roots_of_unity
from .series import DEFAULT_PREC, LaurentSeries, SeriesRing, nth_root
from .node_ring import (
    FactoredElement,
    PrimeCertificate,
    RingConfig,
    TrivariatePoly,
    axis_shift_prime,
    embed_at_axis,
    ord_at,
    quadratic_prime,
    relation_rewrite,
    restrict,
    validate_certificate,
)
from .milnor import (
    LocalInvariant,
    k2_axis_invariant,
    tame_symbol_at_prime,
    tame_symbol_local,
    triple_tame_axis,
)
from .cft import (
    BoundaryData,
    CoverSpec,
    GaloisLevelN,
    boundary_map,
    is_nth_power,
    kummer_character,
    kummer_cover,
    local_character,
    product_formula,
    prop21_check,
    same_kummer_cover,
    thm41_model,
    unramified_cover,
)
from .grammar import encode_element, parse_element
from .campaign import CampaignConfig, TameRng, run_campaign, run_selfcheck

__version__ = "0.1.0"

__all__ = [
    "AmbiguousZero", "BoundaryData", "CampaignConfig", "CertificateInvalid",
    "CoverSpec", "DEFAULT_PREC", "FactoredElement", "FieldSpec", "FqElt",
    "GaloisLevelN", "LaurentSeries", "LocalInvariant", "NodetameError",
    "NotAGenerator", "NotAUnit", "NotAUnitAtPrime", "NotAnNthPower",
    "ParseError", "PrecisionExhausted", "PrimeCertificate", "RingConfig",
    "SeriesRing", "SpecMismatch", "TameRng", "TamenessViolated",
    "TrivariatePoly", "UnknownPrime", "WildRoot", "axis_shift_prime",
    "boundary_map", "dlog", "embed_at_axis", "encode_element", "field_spec",
    "is_nth_power", "k2_axis_invariant", "kummer_character", "kummer_cover",
    "local_character", "norm", "nth_root", "ord_at", "parse_element",
    "product_formula", "prop21_check", "quadratic_prime", "relation_rewrite",
    "restrict", "roots_of_unity", "run_campaign", "run_selfcheck",
    "same_kummer_cover", "tame_symbol_at_prime", "tame_symbol_local",
    "thm41_model", "triple_tame_axis", "unramified_cover",
    "validate_certificate", "__version__",
]
