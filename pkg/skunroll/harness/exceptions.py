from typing import Any

from skunroll.common.exceptions import SkunrollException, ParameterException, TerminalException


class HarnessException(SkunrollException):
    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class PhantomParameterException(ParameterException, HarnessException):
    pass


class NoiseParameterException(ParameterException, HarnessException):
    pass


class DatasetException(HarnessException, TerminalException):
    def __init__(self, path: str, msg: str) -> None:
        self.path = path
        super().__init__(msg)


class DatasetNotFoundException(DatasetException):
    def __init__(self, path: str) -> None:
        super().__init__(path, f"No dataset found in {path}")


class DatasetConsistencyException(DatasetException):
    def __init__(self, path: str, expected: Any, found: Any) -> None:
        self.expected = expected
        self.found = found
        super().__init__(path, f"Dataset {path} manifest lists {expected} but storage holds {found}")


class DatasetManifestException(DatasetConsistencyException):
    def __init__(self, path: str, key: str, reason: str) -> None:
        self.expected = key
        self.found = reason
        DatasetException.__init__(self, path, f"Dataset {path} manifest is malformed at {key}: {reason}")


class DatasetChecksumException(DatasetException):
    def __init__(self, path: str) -> None:
        super().__init__(path, f"Checksum of dataset file {path} does not match its manifest")


class GeometryMismatchException(HarnessException, TerminalException):
    def __init__(self, source: str, expected: Any, actual: Any) -> None:
        self.source = source
        self.expected = expected
        self.actual = actual
        super().__init__(f"Geometry of {source} is {actual} but the run is configured with {expected}")


class CheckFailedException(HarnessException, TerminalException):
    def __init__(self, check: str, value: float, tolerance: float) -> None:
        self.check = check
        self.value = value
        self.tolerance = tolerance
        super().__init__(f"{check} failed: {value!r} exceeds tolerance {tolerance!r}")
