"""Exception hierarchy shared by all spectralforge modules.

Every failure mode that a caller might want to branch on gets its own class;
witness data (the offending pair, stage index, ...) rides on attributes so
reports can name the exact culprit instead of re-deriving it.
"""

from __future__ import annotations


class SpectralForgeError(Exception):
    """Base class for all library errors."""


class InputError(SpectralForgeError):
    """Malformed user input (bad JSON, missing field, unparsable digit)."""


class EmptyInput(SpectralForgeError):
    pass


class BaseTooSmall(SpectralForgeError):
    pass


class EmptyDigitSet(SpectralForgeError):
    pass


class ModulusMismatch(SpectralForgeError):
    pass


class DistinctnessFailure(SpectralForgeError):
    """A direct sum had a colliding pair: a1 + b1 == a2 + b2 (mod modulus)."""

    def __init__(self, pair1, pair2, modulus):
        self.pair1 = pair1
        self.pair2 = pair2
        self.modulus = modulus
        super().__init__(
            f"direct sum not distinct mod {modulus}: "
            f"{pair1[0]}+{pair1[1]} == {pair2[0]}+{pair2[1]}"
        )


class OverlapError(SpectralForgeError):
    """A digit-set union produced the same digit twice."""

    def __init__(self, digit, first, second, stage=None):
        self.digit = digit
        self.first = first
        self.second = second
        self.stage = stage
        where = "" if stage is None else f" at stage {stage}"
        super().__init__(
            f"digit collision{where}: {digit} produced by {first} and {second}"
        )


class HadamardFailure(SpectralForgeError):
    """A triple failed exact verification; .report carries the witness."""

    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class ValidationFailure(SpectralForgeError):
    """A product form failed one of its defining conditions."""

    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class CoverageFailure(SpectralForgeError):
    """The per-factor cyclotomic index sets do not cover the requested set."""


class KernelDivisibilityFailure(SpectralForgeError):
    """Internal assertion: the kernel polynomial must divide the mask."""


class SpectrumUnavailable(SpectralForgeError):
    def __init__(self, stage, reason=""):
        self.stage = stage
        super().__init__(f"no spectrum available for factor {stage}: {reason}")


class TDivisibleByBeta(SpectralForgeError):
    """Four-digit construction rejected: the 2-adic shift lands on r = 0."""


class ShiftSearchFailure(SpectralForgeError):
    """No integer shift in the search window met the positivity threshold."""

    def __init__(self, gamma, window, best_ratio):
        self.gamma = gamma
        self.window = window
        self.best_ratio = best_ratio
        super().__init__(
            f"no shift in [-{window}, {window}] accepted for gamma={gamma} "
            f"(best ratio {best_ratio:.3e})"
        )


class TailBoundUnavailable(SpectralForgeError):
    """Truncation depth too small for a rigorous tail estimate at this point."""


class InvalidVariantParams(SpectralForgeError):
    pass


class NotCompleteResidues(SpectralForgeError):
    pass


class CMConditionFailure(SpectralForgeError):
    def __init__(self, which, condition):
        self.which = which
        self.condition = condition
        super().__init__(f"{condition} fails for {which}")
