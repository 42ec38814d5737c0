class PkeetError(Exception):
    """Base class for library errors."""


class DimensionError(PkeetError, ValueError):
    pass


class NotInvertible(PkeetError, ArithmeticError):
    pass


class TagNotInvertible(NotInvertible):
    """Preimage sampling needs an invertible tag h."""


class NonPositiveDefinite(PkeetError, ArithmeticError):
    """Perturbation covariance is not positive definite for this trapdoor."""


class ExhaustedRejection(PkeetError, RuntimeError):
    pass


class PreimageCheckFailed(PkeetError, RuntimeError):
    """A sampled preimage failed its own a^T x = u verification."""


class Rejected(PkeetError):
    """Decryption integrity check failed: the recovered digest does not match."""


class VariantMismatch(PkeetError, ValueError):
    pass


class BindingMismatch(PkeetError, ValueError):
    """A per-ciphertext trapdoor was used with a different ciphertext."""


class InvalidParams(PkeetError, ValueError):
    pass


class CodecError(PkeetError, ValueError):
    """Malformed or mismatched serialized object."""
