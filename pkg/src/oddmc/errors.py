"""Exception types shared across the package."""


class OddmcError(Exception):
    """Base class for all library errors."""


class MalformedConvolutionError(OddmcError):
    """A string is not a valid convolution (pad before a proper symbol,
    or an all-pad column)."""


class ResourceLimitError(OddmcError):
    """An enumeration bound was exceeded."""


class OddValidationError(OddmcError):
    """An ODD candidate violates a layer-sequence condition.

    Carries the name of the first violated condition and the 1-based
    index of the offending layer.
    """

    def __init__(self, condition: str, layer_index: int, message: str):
        super().__init__(f"layer {layer_index}: {condition}: {message}")
        self.condition = condition
        self.layer_index = layer_index


class StructuralValidationError(OddmcError):
    """A tuple of ODDs fails one of the structural-tuple conditions."""

    def __init__(self, condition: str, message: str):
        super().__init__(f"{condition}: {message}")
        self.condition = condition


class FormulaSyntaxError(OddmcError):
    """Concrete-syntax error; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"at position {position}: {message}")
        self.position = position


class CompileError(OddmcError):
    """A formula cannot be compiled (free variable outside the context,
    non-normalized connective, shadowed quantifier variable)."""


class FormatError(OddmcError):
    """A textual input file does not follow its grammar."""
