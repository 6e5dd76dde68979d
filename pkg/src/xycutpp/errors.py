"""Exception types raised across the package."""


class XYCutError(ValueError):
    """Base class for all data errors (CLI exit status 1)."""


class SchemaError(XYCutError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class DuplicateIndex(SchemaError):
    pass


class EmptyRegion(XYCutError):
    pass


class EmptySequence(XYCutError):
    pass


class NotAPermutation(XYCutError):
    pass


class EmptyCorpus(XYCutError):
    pass


class MissingPage(XYCutError):
    pass


class InfeasibleLayout(XYCutError):
    pass
