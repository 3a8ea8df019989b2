"""Exception types shared across the package."""


class OtbMorphError(Exception):
    """Base class for every error raised by this package."""


class DegenerateVectorError(OtbMorphError, ValueError):
    """Vector has (numerically) zero norm and cannot be normalized."""


class DimensionMismatchError(OtbMorphError, ValueError):
    """Operands disagree on vector dimension or array shape."""


class DegenerateGeometryError(OtbMorphError, ValueError):
    """Point set or triangle is degenerate (collinear, duplicated, zero area)."""


class EmptyPoolError(OtbMorphError, ValueError):
    """Key pool contains no entries."""


class EmptyCohortError(OtbMorphError, ValueError):
    """Key pool contains no entry in the demographic cohort a strategy needs."""


class EnrollmentError(OtbMorphError, RuntimeError):
    """Feature extraction failed while building a reference record."""


class VerificationError(OtbMorphError, RuntimeError):
    """A verification attempt could not produce a score."""


class ExtractionError(OtbMorphError, RuntimeError):
    """An extractor cannot produce an embedding for the given face."""


class AttackAbortedError(OtbMorphError, RuntimeError):
    """A trajectory stopped early because the target system errored.

    Carries the outcomes observed so far in ``partial``.
    """

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = tuple(partial)


class ConfigError(OtbMorphError, ValueError):
    """Experiment configuration violates a constraint."""


class LoadError(OtbMorphError, ValueError):
    """An input file could not be parsed or failed validation.

    ``path`` and ``line`` (1-based, 0 when not line-scoped) locate the fault.
    """

    def __init__(self, message, path="", line=0):
        location = f"{path}:{line}: " if line else (f"{path}: " if path else "")
        super().__init__(f"{location}{message}")
        self.path = str(path)
        self.line = int(line)


class EmptyScoreSetError(OtbMorphError, ValueError):
    """A rate was requested over an empty score set."""
