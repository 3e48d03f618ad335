"""Exception hierarchy shared by all modules."""


class CertificationError(Exception):
    """Base class for every error raised by this package."""


class ParseError(CertificationError):
    """Malformed graph or CSP file."""


class InvalidId(CertificationError):
    """Identifier duplicated or outside {0, ..., M-1}."""


class InvalidEdge(CertificationError):
    """Edge endpoint out of range, or a self-loop."""


class InvalidParams(CertificationError):
    """Operation parameters outside their documented domain."""


class NoPerfectHash(CertificationError):
    """The whole function family was scanned without finding a member
    injective on the given key set."""


class NotSatisfiable(CertificationError):
    """Honest prover refuses: the instance has no homomorphism/solution."""


class BitmapTooLarge(CertificationError):
    """Identifier range exceeds the practicality cap for bitmap certificates."""


class MalformedCertificate(CertificationError):
    """Certificate payload does not decode cleanly."""


class TooLarge(CertificationError):
    """Brute-force search space exceeds the configured desk-scale bound."""
