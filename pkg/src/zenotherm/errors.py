"""Exception types shared across the package."""


class RangeError(ValueError):
    """A numeric argument lies outside its admissible domain."""


class NonCommensurateTime(ValueError):
    """``t`` is not an integer multiple of the measurement interval."""

    def __init__(self, t: float, delta: float):
        self.t = t
        self.delta = delta
        super().__init__(f"t={t!r} is not an integer multiple of delta={delta!r}")


class DensityError(ValueError):
    """Base class for density-matrix validity failures.

    ``defect`` holds the measured violation (signed for eigenvalues).
    """

    what = "density matrix"

    def __init__(self, defect: float):
        self.defect = float(defect)
        super().__init__(f"{self.what}: defect {self.defect:.3e}")


class HermiticityViolation(DensityError):
    what = "not Hermitian"


class TraceViolation(DensityError):
    what = "trace differs from 1"


class NegativeEigenvalue(DensityError):
    what = "negative eigenvalue"


class NonHermitianInput(ValueError):
    pass


def check_range(name: str, value: float, lo: float, hi: float, *,
                lo_open: bool = False, hi_open: bool = False) -> float:
    """Return ``float(value)`` or raise :class:`RangeError`."""
    v = float(value)
    ok = v == v  # NaN check
    ok = ok and (v > lo if lo_open else v >= lo)
    ok = ok and (v < hi if hi_open else v <= hi)
    if not ok:
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise RangeError(f"{name}={value!r} outside {lb}{lo}, {hi}{rb}")
    return v
