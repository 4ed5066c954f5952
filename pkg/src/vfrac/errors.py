from __future__ import annotations


class VFracError(Exception):
    """Base class for every operator error raised by vfrac."""

    @property
    def name(self) -> str:
        return type(self).__name__


class PoleError(VFracError, ValueError):
    pass


class SeriesOverflowError(VFracError, OverflowError):
    pass


class DomainError(VFracError, ValueError):
    pass


class NonConvergence(VFracError, ArithmeticError):
    pass


class UnstableLimit(VFracError, ArithmeticError):
    pass


class NonRealResult(VFracError, ValueError):
    pass


class OpenCurve(VFracError, ValueError):
    pass


class UsageError(VFracError):
    pass
