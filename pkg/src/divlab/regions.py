"""Classification of exponent triples against the known convexity phase diagram.

``classify`` reduces a point by the two exact symmetries

    (p, q, s) -> (-p, -q, -s)        and        (p, q) <-> (q, p)

to the fundamental domain p >= q, s > 0, and then matches the known
sufficient regions, the conjectured-convex band, and the necessary-condition
complements, in that order.  Boundary points satisfy the non-strict
inequalities of the theorems and inherit the stronger (Known) label.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "RegionKind",
    "RegionLabel",
    "classify",
    "classify_upsilon",
    "normalize_psi_point",
    "normalize_upsilon_point",
]


class RegionKind(enum.Enum):
    CONCAVE_KNOWN = "ConcaveKnown"
    CONVEX_KNOWN = "ConvexKnown"
    CONJECTURED_CONVEX = "ConjecturedConvex"
    NOT_CONVEX_NOT_CONCAVE = "NotConvexNotConcave"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class RegionLabel:
    kind: RegionKind
    citation: str

    def __str__(self) -> str:
        return f"{self.kind.value} {self.citation}".rstrip()


def normalize_psi_point(p: float, q: float, s: float) -> tuple[float, float, float]:
    """Map to the fundamental domain p >= q, s > 0 via the exact symmetries."""
    if s == 0:
        raise ValueError("s must be nonzero")
    if s < 0:
        p, q, s = -p, -q, -s
    if p < q:
        p, q = q, p
    return float(p), float(q), float(s)


def normalize_upsilon_point(p: float, s: float) -> tuple[float, float]:
    if s == 0:
        raise ValueError("s must be nonzero")
    if s < 0:
        p, s = -p, -s
    return float(p), float(s)


def _thm2_3_threshold(p: float, q: float) -> float:
    """The convexity threshold on s for 1 <= p <= 2, -1 <= q <= 0.

    For p = 1 the min{1/(p-1), 1/(q+1)} condition reads s >= 1/(q+1); the
    degenerate denominators map to an unreachable +inf threshold.
    """
    if p == 2.0:
        return 1.0 / (2.0 + q)
    left = math.inf if p == 1.0 else 1.0 / (p - 1.0)
    right = math.inf if q == -1.0 else 1.0 / (q + 1.0)
    if p == 1.0:
        return right
    return min(left, right)


def _in_concave_necessary(p: float, q: float, s: float) -> bool:
    # necessary conditions for joint concavity (2x2 witnesses)
    if not (0.0 <= q <= p <= 1.0):
        return False
    if p + q == 0.0:
        return True
    return s <= 1.0 / (p + q)


def _in_convex_necessary(p: float, q: float, s: float) -> bool:
    # necessary conditions for joint convexity (4x4 witnesses)
    if -1.0 <= q <= p <= 0.0:
        return True
    if 1.0 <= p <= 2.0 and -1.0 <= q <= 0.0 and (p, q) != (1.0, -1.0):
        return p + q > 0.0 and s >= 1.0 / (p + q)
    return False


def classify(p: float, q: float, s: float) -> RegionLabel:
    """Place an exponent triple in the convexity phase diagram.

    Matching order: concavity square, all-negative convexity square, the
    mixed-sign convexity wedge (including its p = 2 strip), the s = 1 line
    known from the operator-convexity era, the q = 0 edge settled by the
    one-argument functional, the conjectured-convex band, and finally the
    complement of the necessary regions.
    """
    p, q, s = normalize_psi_point(p, q, s)

    if 0.0 <= q <= p <= 1.0:
        if p + q == 0.0 or s <= 1.0 / (p + q):
            return RegionLabel(RegionKind.CONCAVE_KNOWN, "Theorem-2(1)")

    if -1.0 <= q <= p <= 0.0:
        return RegionLabel(RegionKind.CONVEX_KNOWN, "Theorem-2(2)")

    if 1.0 <= p <= 2.0 and -1.0 <= q <= 0.0:
        if s >= _thm2_3_threshold(p, q):
            return RegionLabel(RegionKind.CONVEX_KNOWN, "Theorem-2(3)")
        if s == 1.0 and p + q >= 1.0:
            return RegionLabel(RegionKind.CONVEX_KNOWN, "Ando-s=1")
        if q == 0.0 and s >= 1.0 / p:
            # constant in the second argument; settled by the one-argument case
            return RegionLabel(RegionKind.CONVEX_KNOWN, "Prop-5(3)")
        if q < 0.0 and p + q > 0.0 and s >= 1.0 / (p + q):
            return RegionLabel(RegionKind.CONJECTURED_CONVEX, "Conjecture-2")

    if not _in_concave_necessary(p, q, s) and not _in_convex_necessary(p, q, s):
        return RegionLabel(RegionKind.NOT_CONVEX_NOT_CONCAVE, "Prop-3")

    return RegionLabel(RegionKind.UNCLASSIFIED, "")


def classify_upsilon(p: float, s: float) -> RegionLabel:
    """Place an exponent pair for the one-argument functional Tr (K* A^p K)^s.

    Here the sufficient and necessary conditions coincide, so every point is
    either Known or NotConvexNotConcave.
    """
    p, s = normalize_upsilon_point(p, s)
    if 0.0 <= p <= 1.0 and (p == 0.0 or s <= 1.0 / p):
        return RegionLabel(RegionKind.CONCAVE_KNOWN, "Prop-5(1)")
    if -1.0 <= p <= 0.0:
        return RegionLabel(RegionKind.CONVEX_KNOWN, "Prop-5(2)")
    if 1.0 <= p <= 2.0 and s >= 1.0 / p:
        return RegionLabel(RegionKind.CONVEX_KNOWN, "Prop-5(3)")
    return RegionLabel(RegionKind.NOT_CONVEX_NOT_CONCAVE, "Prop-6")
