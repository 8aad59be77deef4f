class TestbenchError(Exception):
    """Base exception for the testbench."""

    __test__ = False  # keep pytest from collecting the class

    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)


class InvalidParameterError(TestbenchError):
    """Raised when an operation precondition is violated."""
    pass


class ShapeMismatchError(InvalidParameterError):
    """Raised when array shapes and space descriptors disagree."""
    pass


class FrequencyOutOfRangeError(InvalidParameterError, IndexError):
    """Raised when a frequency lies outside the grid it is looked up on."""
    pass


class MissingParameterError(InvalidParameterError):
    """Raised when a region predicate lacks an exponent it consumes."""

    def __init__(self, parameter: str, theorem_id: str):
        self.parameter = parameter
        self.theorem_id = theorem_id
        super().__init__(f"{theorem_id} requires parameter '{parameter}'")


class HypothesisViolationError(TestbenchError):
    """Raised when a theorem hypothesis fails for the requested exponents."""

    def __init__(self, message: str, theorem: str = ""):
        self.theorem = theorem
        super().__init__(message)


class ArtifactIOError(TestbenchError):
    """Raised when a config file or artifact cannot be read or written."""
    pass
