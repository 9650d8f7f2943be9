"""Error taxonomy shared by every nodetame module.

Each failure mode gets its own class so callers can catch precisely; nothing
here is ever silently swallowed (an ambiguous zero is an error, not a zero).
"""


class NodetameError(Exception):
    """Base class for all package errors."""


class NotAUnit(NodetameError):
    """Inversion of zero, or a ring element with vanishing constant term."""


class SpecMismatch(NodetameError):
    """Operands belong to different field specs, or no embedding is registered."""


class NotAGenerator(NodetameError):
    """A claimed multiplicative generator fails the order check."""


class TamenessViolated(NodetameError):
    """Requested root-of-unity level n does not divide q - 1 (or n not | M)."""


class AmbiguousZero(NodetameError):
    """A series is zero to its full precision; its valuation is undecidable."""


class PrecisionExhausted(NodetameError):
    """A truncated-series operation has no known coefficients left to return."""


class NotAnNthPower(NodetameError):
    """nth_root: the leading coefficient has no n-th root in the field."""


class WildRoot(NodetameError):
    """nth_root with p | n: outside the tame range this package supports."""


class CertificateInvalid(NodetameError):
    """A prime certificate fails one of its consistency checks."""


class UnknownPrime(NodetameError):
    """A prime id is not present in the ring's registry."""


class NotAUnitAtPrime(NodetameError):
    """restrict() called on an element with nonzero order at that prime."""


class ParseError(NodetameError, ValueError):
    """Element / series / cover grammar could not be parsed."""
