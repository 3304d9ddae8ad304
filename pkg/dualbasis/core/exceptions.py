"""Error types raised by dualbasis; ``code`` is the stable name reported by the command line front-end"""


class DualBasisError(Exception):
    @property
    def code(self) -> str:
        return type(self).__name__


class ValidationError(DualBasisError, ValueError):
    pass


class NonPositiveLength(ValidationError):
    pass


class AngleOutOfRange(ValidationError):
    pass


class NotRealizable(ValidationError):
    """Lengths and angles do not describe linearly independent vectors (Δ ≤ 0, or |cos α₁₂| ≥ 1 in 2D)"""

    def __init__(self, message: str, determinant: float):
        super().__init__(message)
        self.determinant = determinant


class CosineOutOfRange(ValidationError):
    def __init__(self, message: str, value: float):
        super().__init__(message)
        self.value = value


class DimensionMismatch(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class FrameMismatch(ValidationError):
    pass


class MissingDualData(ValidationError):
    pass


class IncompleteDocument(ValidationError):
    """An input document lacks the fields a command needs"""


class LinearAlgebraError(DualBasisError, ArithmeticError):
    pass


class SingularMatrix(LinearAlgebraError):
    pass


class SingularBasis(SingularMatrix):
    pass


class SingularMixed(SingularMatrix):
    pass


class NotPositiveDefinite(LinearAlgebraError):
    pass


class IdentityError(DualBasisError):
    pass


class DegenerateAlpha(IdentityError):
    """sin²(α₁₂) or Δ is too small to divide by"""


class Unresolvable(IdentityError):
    """No candidate of the degenerate 2D solver branch satisfies both column identities"""


class GenerationExhausted(DualBasisError, RuntimeError):
    pass
