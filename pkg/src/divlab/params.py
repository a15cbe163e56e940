"""Exponent parameter points: the (p, q, s) triple and the (alpha, z) chart.

The (alpha, z) parametrization covers exactly the s = 1/(p + q) slice of the
(p, q, s) space via p = alpha/z, q = (1 - alpha)/z, s = z.  A point built from
(alpha, z) remembers its chart values so the conversion round-trips exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ParamPoint"]

_SLICE_RTOL = 1e-12


@dataclass(frozen=True)
class ParamPoint:
    p: float
    q: float
    s: float
    _alpha: float | None = None
    _z: float | None = None

    @classmethod
    def from_pqs(cls, p: float, q: float, s: float) -> "ParamPoint":
        if s == 0:
            raise ValueError("s must be nonzero")
        return cls(float(p), float(q), float(s))

    @classmethod
    def from_alpha_z(cls, alpha: float, z: float) -> "ParamPoint":
        alpha = float(alpha)
        z = float(z)
        if alpha <= 0 or alpha == 1:
            raise ValueError("alpha must be positive and != 1")
        if z <= 0:
            raise ValueError("z must be positive")
        return cls(alpha / z, (1.0 - alpha) / z, z, _alpha=alpha, _z=z)

    @property
    def on_alpha_z_slice(self) -> bool:
        total = self.p + self.q
        if total == 0:
            return False
        return abs(self.s * total - 1.0) <= _SLICE_RTOL * max(1.0, abs(self.s))

    def to_alpha_z(self) -> tuple[float, float]:
        """The (alpha, z) chart values; only defined on the s = 1/(p+q) slice."""
        if self._alpha is not None and self._z is not None:
            return self._alpha, self._z
        total = self.p + self.q
        if total == 0:
            raise ValueError("p + q = 0: the point has no (alpha, z) chart")
        if not self.on_alpha_z_slice:
            raise ValueError(
                f"point (p={self.p}, q={self.q}, s={self.s}) is off the "
                "s = 1/(p+q) slice"
            )
        return self.p / total, 1.0 / total

    def __repr__(self) -> str:
        return f"ParamPoint(p={self.p!r}, q={self.q!r}, s={self.s!r})"
