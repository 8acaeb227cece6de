"""Exception types raised by the library.

Every error derives from :class:`RepmutError` so callers (the CLI in
particular) can separate "the theory says no" from "the numerics failed".
"""


class RepmutError(Exception):
    """Base class for all library errors."""


class NonIntegrable(RepmutError):
    """A profile's integral diverges or vanishes."""


class DomainError(RepmutError, ValueError):
    """An argument lies outside the documented domain of a function."""


class NeverDefined(RepmutError):
    """The solution exists for no positive time (heavy right tail, T = 0)."""


class OutOfLifespan(RepmutError):
    """Evaluation requested at or beyond the extinction time T."""

    def __init__(self, t, T):
        super().__init__(f"t={t!r} is outside the lifespan (0, {T!r})")
        self.t = t
        self.T = T


class NotCompact(RepmutError):
    """Operation requires a compactly supported sampled profile."""


class BlowUp(RepmutError):
    """The momentum denominator 1 + int v_bar crossed zero."""

    def __init__(self, t_lo, t_hi, t_star):
        super().__init__(
            f"denominator vanishes in [{t_lo!r}, {t_hi!r}], T* ~ {t_star!r}")
        self.t_lo = t_lo
        self.t_hi = t_hi
        self.t_star = t_star


class StepTooLarge(RepmutError):
    """ODE step too coarse: the Wronskian drifted beyond tolerance."""


class TransformOverflow(RepmutError, OverflowError):
    """A log-space result exceeds the floating point range."""


class NumericFailure(RepmutError):
    """Base class for failures of the direct integrator."""


class DomainEscape(NumericFailure):
    """Mass reached the boundary cells of the oracle window."""


class Unstable(NumericFailure):
    """Oracle values exceeded the blow-up guard."""


class GridMismatch(RepmutError, ValueError):
    """Frames being compared do not share grid or time alignment."""


class NoSolitaryWave(RepmutError, ValueError):
    """Solitary waves exist only for positive speed."""
