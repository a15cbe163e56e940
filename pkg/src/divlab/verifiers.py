"""Identity and inequality verifiers: variational trace formulas, the
Lieb-Thirring inequality, operator-order joint convexity, the power integral
representation, and the named verification suites exposed by the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .channels import random_cptp, verify_uhlmann_identity
from .divergences import psi, psi_via_block_embedding
from .linalg import (
    hermitian_part,
    matrix_from_json,
    matrix_power,
    matrix_to_json,
    min_eigenvalue,
    tensor,
)
from .params import ParamPoint
from .probes import ProbeReport
from .rand import derive_rng, ginibre, random_density, random_haar_unitary, random_positive_definite
from .tolerances import get_tolerances

__all__ = [
    "SUITE_NAMES",
    "SuiteResult",
    "run_suite",
    "run_suites",
    "verify_integral_representation",
    "verify_lieb_thirring",
    "verify_opconv",
    "verify_variational",
    "reevaluate_opconv_witness",
]


# ----------------------------------------------------------------------------
# variational characterization of the trace power


def _trace_product(x, y) -> float:
    return float(np.trace(np.asarray(x) @ np.asarray(y)).real)


def _var_value(x, y, s: float) -> float:
    """The variational objective at trial matrix Y.

    sup form (s > 1 or s < 0):  s Tr XY - (s-1) Tr Y^{s/(s-1)}
    inf form (0 < s < 1):       s Tr XY + (1-s) Tr Y^{-s/(1-s)}
    """
    if s > 1 or s < 0:
        w = np.clip(np.linalg.eigvalsh(hermitian_part(y)), 0.0, None)
        live = w[w > 0]
        return s * _trace_product(x, y) - (s - 1.0) * float(np.sum(live ** (s / (s - 1.0))))
    if 0 < s < 1:
        w = np.linalg.eigvalsh(hermitian_part(y))
        if float(w.min()) < get_tolerances().psd_floor:
            raise ValueError("the inf form requires a positive definite trial Y")
        return s * _trace_product(x, y) + (1.0 - s) * float(np.sum(w ** (-s / (1.0 - s))))
    raise ValueError("s = 1 and s = 0 are outside both variational forms")


def verify_variational(x, s: float, n_random_y: int, seed: int) -> dict:
    """Check attainment and bound direction of the variational trace formulas.

    The optimizer is Y = X^{s-1} in both forms (the equality case of the
    Hoelder/Young steps); its objective value must reproduce Tr X^s, and every
    random trial Y must respect the bound direction (an upper bound for the
    sup form, a lower bound for the inf form).
    """
    tol = get_tolerances()
    x = hermitian_part(x)
    wx = np.linalg.eigvalsh(x)
    if float(wx.min()) < tol.psd_floor:
        raise ValueError("X must be positive definite")
    target = float(np.sum(wx**s))
    scale = max(1.0, abs(target))

    y_opt = matrix_power(x, s - 1.0)
    attained_value = _var_value(x, y_opt, s)
    attainment_error = abs(attained_value - target)

    sup_form = s > 1 or s < 0
    worst = 0.0
    dim = x.shape[0]
    for i in range(n_random_y):
        rng = derive_rng(seed, i)
        if sup_form:
            g = ginibre(dim, dim, rng)
            y = g @ g.conj().T  # PSD trial, singular allowed in the sup form
        else:
            y = random_positive_definite(dim, (0.05, 5.0), rng)
        y = y * float(np.exp(rng.uniform(-1.5, 1.5)))
        value = _var_value(x, y, s)
        excess = (value - target) if sup_form else (target - value)
        worst = max(worst, excess)
    return {
        "s": s,
        "form": "sup" if sup_form else "inf",
        "target": target,
        "attainment_error": attainment_error,
        "attained": bool(attainment_error <= tol.variational_attainment_tol * scale),
        "n_trials": n_random_y,
        "worst_bound_excess": worst,
        "bounds_hold": bool(worst <= tol.variational_bound_tol * scale),
    }


# ----------------------------------------------------------------------------
# Lieb-Thirring


def verify_lieb_thirring(x, y, s: float, *, slack: float | None = None) -> bool:
    """Tr (Y^{s/2} X^s Y^{s/2})^{1/s} <= Tr XY for PSD X, Y and 0 < s < 1."""
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    slack = get_tolerances().lieb_thirring_slack if slack is None else slack
    xs = matrix_power(x, s)
    ys2 = matrix_power(y, s / 2.0)
    inner = hermitian_part(ys2 @ xs @ ys2)
    w = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    lhs = float(np.sum(w[w > 0] ** (1.0 / s)))
    rhs = _trace_product(hermitian_part(x), hermitian_part(y))
    return bool(lhs <= rhs + slack * max(1.0, abs(rhs)))


# ----------------------------------------------------------------------------
# operator-order joint convexity of (A, B) -> A K B^q K* A


def _opconv_map(a, b, k, q: float) -> np.ndarray:
    bq = matrix_power(b, q)
    return hermitian_part(a @ k @ bq @ k.conj().T @ a)


def reevaluate_opconv_witness(witness: dict) -> float:
    q = witness["q"]
    k = matrix_from_json(witness["k"])
    a0 = matrix_from_json(witness["a0"])
    a1 = matrix_from_json(witness["a1"])
    b0 = matrix_from_json(witness["b0"])
    b1 = matrix_from_json(witness["b1"])
    m0 = _opconv_map(a0, b0, k, q)
    m1 = _opconv_map(a1, b1, k, q)
    mm = _opconv_map((a0 + a1) / 2, (b0 + b1) / 2, k, q)
    return -min_eigenvalue(0.5 * (m0 + m1) - mm)


def verify_opconv(q: float, dim: int, n_samples: int, seed: int) -> ProbeReport:
    """Midpoint test of (A, B) -> A K B^q K* A in the semidefinite order.

    The margin is the most negative eigenvalue of (M0 + M1)/2 - M(midpoint),
    sign-flipped so that positive means an order violation.
    """
    if not -1.0 <= q <= 0.0:
        raise ValueError("q must lie in [-1, 0]")
    tol = get_tolerances()
    worst = -math.inf
    worst_witness = None
    violations = 0
    for i in range(n_samples):
        rng = derive_rng(seed, i)
        a0 = random_positive_definite(dim, (0.1, 4.0), rng)
        a1 = random_positive_definite(dim, (0.1, 4.0), rng)
        b0 = random_positive_definite(dim, (0.1, 4.0), rng)
        b1 = random_positive_definite(dim, (0.1, 4.0), rng)
        k = ginibre(dim, dim, rng)
        m0 = _opconv_map(a0, b0, k, q)
        m1 = _opconv_map(a1, b1, k, q)
        mm = _opconv_map((a0 + a1) / 2, (b0 + b1) / 2, k, q)
        gap = 0.5 * (m0 + m1) - mm
        margin = -min_eigenvalue(gap)
        scale = max(1.0, np.linalg.norm(m0, 2), np.linalg.norm(m1, 2))
        if margin > tol.opconv_floor_rel * scale:
            violations += 1
        if margin / scale > worst:
            worst = margin / scale
            worst_witness = {
                "kind": "opconv_midpoint",
                "q": q,
                "k": matrix_to_json(k),
                "a0": matrix_to_json(a0),
                "a1": matrix_to_json(a1),
                "b0": matrix_to_json(b0),
                "b1": matrix_to_json(b1),
                "margin": margin,
                "scale": scale,
            }
    return ProbeReport(
        direction="operator-convex",
        dim=dim,
        samples=n_samples,
        seed=seed,
        worst_margin=worst_witness["margin"] if worst_witness else 0.0,
        violations=violations,
        witness=worst_witness,
        metadata={"q": q},
    )


# ----------------------------------------------------------------------------
# the power integral representation


def verify_integral_representation(x: float, sigma: float, n_nodes: int) -> float:
    """|quadrature - x^sigma| for the representation

        x^sigma = sin(pi sigma)/pi * int_0^inf (1 + t/x)^{-1} t^{sigma-1} dt.

    After t = u/(1-u) the integrand is x u^{sigma-1} (1-u)^{-sigma} /
    (x(1-u) + u) on (0, 1); each half is mapped by a power substitution that
    absorbs its endpoint singularity exactly, leaving Gauss-Legendre to
    handle a bounded integrand.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    if not 0 < sigma < 1:
        raise ValueError("sigma must lie in (0, 1)")
    half = max(4, n_nodes // 2)
    nodes, weights = leggauss(half)
    # map [-1, 1] -> [0, 1]
    v = 0.5 * (nodes + 1.0)
    w = 0.5 * weights

    # u in (0, 1/2]: u = (1/2) v^{1/sigma}, u^{sigma-1} du = (1/2)^sigma dv / sigma
    u1 = 0.5 * v ** (1.0 / sigma)
    f1 = x * (1.0 - u1) ** (-sigma) / (x * (1.0 - u1) + u1)
    i1 = (0.5**sigma / sigma) * float(np.sum(w * f1))

    # u in [1/2, 1): 1-u = (1/2) t^{1/(1-sigma)} absorbs the (1-u)^{-sigma} factor
    one_minus_u = 0.5 * v ** (1.0 / (1.0 - sigma))
    u2 = 1.0 - one_minus_u
    f2 = x * u2 ** (sigma - 1.0) / (x * one_minus_u + u2)
    i2 = (0.5 ** (1.0 - sigma) / (1.0 - sigma)) * float(np.sum(w * f2))

    quadrature = math.sin(math.pi * sigma) / math.pi * (i1 + i2)
    return abs(quadrature - x**sigma)


# ----------------------------------------------------------------------------
# named suites


@dataclass
class SuiteResult:
    name: str
    passed: bool
    n_checks: int
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "n_checks": self.n_checks,
            "failures": list(self.failures),
        }


def _suite_symmetries(seed: int) -> SuiteResult:
    """Sign-flip, swap, block embedding, tensor property, unitary invariance."""
    tol = get_tolerances()
    failures: list[str] = []
    n = 0
    points = [(0.7, 0.3, 0.8), (1.4, -0.6, 1.5), (-0.4, -0.9, 2.0), (0.5, 0.5, 1.0)]
    for dim in (2, 3):
        for j, (p, q, s) in enumerate(points):
            rng = derive_rng(seed, dim, j)
            a = random_positive_definite(dim, (0.2, 5.0), rng)
            b = random_positive_definite(dim, (0.2, 5.0), rng)
            k = ginibre(dim, dim, rng)
            pt = ParamPoint.from_pqs(p, q, s)
            base = psi(a, b, k, pt)
            scale = max(1.0, abs(base))

            n += 1
            k_flip = np.linalg.inv(k).conj().T
            flipped = psi(a, b, k_flip, ParamPoint.from_pqs(-p, -q, -s))
            if abs(flipped - base) > tol.symmetry_tol * scale:
                failures.append(f"sign-flip at {(p, q, s)} dim {dim}: {flipped} vs {base}")

            n += 1
            swapped = psi(b, a, k.conj().T, ParamPoint.from_pqs(q, p, s))
            if abs(swapped - base) > tol.symmetry_tol * scale:
                failures.append(f"swap at {(p, q, s)} dim {dim}: {swapped} vs {base}")

            if s > 0:
                n += 1
                embedded = psi_via_block_embedding(a, b, k, pt)
                if abs(embedded - base) > tol.block_embedding_tol * scale:
                    failures.append(
                        f"block embedding at {(p, q, s)} dim {dim}: {embedded} vs {base}"
                    )

            n += 1
            u = random_haar_unitary(dim, derive_rng(seed, dim, j, 7))
            rotated = psi(u @ a @ u.conj().T, u @ b @ u.conj().T, np.eye(dim), pt)
            unrotated = psi(a, b, np.eye(dim), pt)
            if abs(rotated - unrotated) > tol.unitary_invariance_tol * max(1.0, abs(unrotated)):
                failures.append(f"unitary invariance at {(p, q, s)} dim {dim}")

    # tensor property on the s = 1/(p+q) slice with a rank-one projector
    for j, (p, q) in enumerate([(0.6, 0.3), (1.5, -0.5), (2.0, -0.4)]):
        pt = ParamPoint.from_pqs(p, q, 1.0 / (p + q))
        rng = derive_rng(seed, 99, j)
        rho = random_positive_definite(2, (0.2, 5.0), rng)
        sigma = random_positive_definite(2, (0.2, 5.0), rng)
        v = ginibre(3, 1, rng)
        v = v / np.linalg.norm(v)
        tau = v @ v.conj().T
        n += 1
        base = psi(rho, sigma, np.eye(2), pt)
        lifted = psi(
            tensor(rho, tau), tensor(sigma, tau), np.eye(6), pt, allow_singular=True
        )
        if abs(lifted - base) > tol.tensor_property_tol * max(1.0, abs(base)):
            failures.append(f"tensor property at {(p, q)}: {lifted} vs {base}")

    return SuiteResult("symmetries", not failures, n, failures)


def _suite_variational(seed: int) -> SuiteResult:
    failures: list[str] = []
    n = 0
    for dim in (2, 3):
        for j, s in enumerate((2.0, 3.0, -1.0, -0.5, 0.5, 0.3, 0.9)):
            x = random_positive_definite(dim, (0.2, 3.0), derive_rng(seed, dim, j))
            report = verify_variational(x, s, 50, seed + 31 * j + dim)
            n += 2
            if not report["attained"]:
                failures.append(
                    f"attainment failed at s={s} dim {dim}: err {report['attainment_error']:.2e}"
                )
            if not report["bounds_hold"]:
                failures.append(
                    f"bound violated at s={s} dim {dim}: excess {report['worst_bound_excess']:.2e}"
                )
    return SuiteResult("variational", not failures, n, failures)


def _suite_lieb_thirring(seed: int) -> SuiteResult:
    failures: list[str] = []
    n = 0
    per_s = 500 // 3 + 1
    for j, s in enumerate((0.3, 0.5, 0.9)):
        for i in range(per_s):
            rng = derive_rng(seed, j, i)
            dim = 2 if i % 2 == 0 else 3
            g1 = ginibre(dim, dim, rng)
            g2 = ginibre(dim, dim, rng)
            x = g1 @ g1.conj().T
            y = g2 @ g2.conj().T
            n += 1
            if not verify_lieb_thirring(x, y, s):
                failures.append(f"violation at s={s}, sample {i}")
    return SuiteResult("lieb-thirring", not failures, n, failures)


def _suite_uhlmann(seed: int) -> SuiteResult:
    failures: list[str] = []
    n = 0
    for dim in (2, 3):
        for env in (1, 2, 3):
            for i in range(5):
                rng = derive_rng(seed, dim, env, i)
                ch = random_cptp(dim, env, rng)
                rho = random_density(dim, dim, rng)
                n += 1
                if not verify_uhlmann_identity(ch, rho):
                    failures.append(f"twirl identity failed at dim {dim}, env {env}")
    return SuiteResult("uhlmann", not failures, n, failures)


def _suite_opconv(seed: int) -> SuiteResult:
    failures: list[str] = []
    n = 0
    for j, q in enumerate((-1.0, -0.5, -0.2)):
        report = verify_opconv(q, 3, 100, seed + j)
        n += report.samples
        if report.violations:
            failures.append(
                f"{report.violations} order violations at q={q}, "
                f"worst margin {report.worst_margin:.2e}"
            )
    return SuiteResult("opconv", not failures, n, failures)


def _suite_integral_rep(seed: int) -> SuiteResult:
    tol = get_tolerances()
    failures: list[str] = []
    n = 0
    for x in (0.1, 1.0, 2.7, 4.0, 10.0):
        for sigma in (0.1, 0.31, 0.5, 0.9):
            n += 1
            err = verify_integral_representation(x, sigma, 200)
            if err > tol.integral_rep_tol:
                failures.append(f"x={x}, sigma={sigma}: error {err:.2e}")
    return SuiteResult("integral-rep", not failures, n, failures)


_SUITES = {
    "symmetries": _suite_symmetries,
    "variational": _suite_variational,
    "lieb-thirring": _suite_lieb_thirring,
    "uhlmann": _suite_uhlmann,
    "opconv": _suite_opconv,
    "integral-rep": _suite_integral_rep,
}

SUITE_NAMES = tuple(_SUITES)


def run_suite(name: str, seed: int) -> SuiteResult:
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES)}")
    return _SUITES[name](seed)


def run_suites(names, seed: int) -> list[SuiteResult]:
    return [run_suite(name, seed) for name in names]
