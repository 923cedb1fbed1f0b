from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the decompositions.

    structural: zero/one patterns and orthogonality defects.
    residual:   reconstruction errors (relative to the input norm).
    spectral:   relative eigenvalue clustering radius.
    """

    structural: float = 1e-12
    residual: float = 1e-10
    spectral: float = 1e-8

    def __post_init__(self):
        for name in ("structural", "residual", "spectral"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"tolerance {name} must lie in (0, 1), got {value}")


DEFAULT_TOLERANCES = Tolerances()
