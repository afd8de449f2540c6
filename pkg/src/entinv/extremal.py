"""Extremal values of I_1 at fixed K, in both coordinate systems.

For qutrits the two nontrivial invariants can be traded for (I_1, K).  At
fixed K the attainable I_1 values form a closed interval, and the interval
computed from Schmidt coefficients equals the one computed from the
canonical-form parameters (with K = p1^6/27).  This module provides:

* closed-form bounds on the Schmidt side via the roots t_-, t_+ of the cubic
  t^3 - 2 t^2 + t - 4K = 0, obtained from the trigonometric solution
  t_{-+} = (2/3)(1 + cos((phi_1 +- 2 pi)/3)) with cos(phi_1) = 54 K - 1,
* closed-form bounds on the canonical-parameter side via the stationary
  points of I_1 as a function of the product-term weight p3,
* a grid-plus-golden-section brute-force oracle, independent of the closed
  forms,
* a grid verifier for the equality of the two bound pairs.

Numerical note: the trigonometric root formulas lose relative accuracy where
1 + cos(.) nearly cancels (small K for t_-, and t_+ near its K -> 0 limit), so
the trig values are polished by safeguarded Newton iteration on t (1-t)^2 = 4K
in well-conditioned variables (t itself for t_-, delta = 1 - t for t_+).  The
polished roots restore full double accuracy across K in [0, 1/27].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure, OutOfRange

SQRT3 = math.sqrt(3.0)
TWO_PI = 2.0 * math.pi
K_MAX = 1.0 / 27.0
CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class ExtremalBounds:
    """Extremal data for one fixed value of K (equivalently of p1).

    ``t_minus``/``t_plus`` bracket the admissible largest squared Schmidt
    coefficient; ``p3_argmin``/``p3_argmax`` are the stationary product-term
    weights realizing the bounds on the canonical-parameter side (populated
    by :func:`p_form_bounds_for_p1`).
    """

    K: float
    p1: float
    phi1: float
    phi2: float
    phi3: float
    t_minus: float
    t_plus: float
    I1_min: float
    I1_max: float
    p3_argmin: float | None = None
    p3_argmax: float | None = None


def _checked_arccos(x: float, what: str) -> float:
    if abs(x) > 1.0 + CLAMP_TOL:
        raise OutOfRange(f"{what} = {x!r} lies outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, x)))


def _clamp_k(k: float) -> float:
    if not (-CLAMP_TOL <= k <= K_MAX + CLAMP_TOL):
        raise OutOfRange(f"K = {k!r} lies outside [0, 1/27]")
    return min(K_MAX, max(0.0, k))


def _clamp_p1(p1: float) -> float:
    if not (-CLAMP_TOL <= p1 <= 1.0 + CLAMP_TOL):
        raise OutOfRange(f"p1 = {p1!r} lies outside [0, 1]")
    return min(1.0, max(0.0, p1))


def _polish_t_minus(k: float, t0: float) -> float:
    # Newton on f(t) = t (1-t)^2 - 4K, monotone on [0, 1/3].  Near the root
    # merge at t = 1/3 the derivative factor (1 - 3t) vanishes and the trig
    # seed is already accurate, so iteration stops there.
    t = min(max(t0, 0.0), 1.0 / 3.0)
    for _ in range(60):
        merge = 1.0 - 3.0 * t
        if merge <= 1e-7:
            break
        f = t * (1.0 - t) ** 2 - 4.0 * k
        step = f / ((1.0 - t) * merge)
        t_new = min(max(t - step, 0.0), 1.0 / 3.0)
        if t_new == t or abs(step) < 1e-18:
            t = t_new
            break
        t = t_new
    return t


def _polish_delta_plus(k: float, delta0: float) -> float:
    # Newton on g(delta) = (1-delta) delta^2 - 4K with delta = 1 - t_plus,
    # monotone on [0, 2/3].  The derivative delta (2 - 3 delta) vanishes at
    # both ends: near the merge at delta = 2/3 the trig seed is accurate and
    # iteration stops; near delta = 0 the quotient g/g' stays relatively
    # accurate, but the seed must be positive (the trig value collapses onto
    # t = 1 for tiny K, so the asymptotic root 2 sqrt(K) seeds instead).
    delta = delta0 if delta0 > 0.0 else 2.0 * math.sqrt(k)
    delta = min(max(delta, 0.0), 2.0 / 3.0)
    if delta == 0.0:
        return 0.0  # only at K = 0 exactly
    for _ in range(60):
        merge = 2.0 - 3.0 * delta
        if merge <= 1e-7:
            break
        g = (1.0 - delta) * delta * delta - 4.0 * k
        step = g / (delta * merge)
        d_new = min(max(delta - step, 0.0), 2.0 / 3.0)
        if d_new == delta or abs(step) < 1e-18 * max(delta, 1e-300):
            delta = d_new
            break
        delta = d_new
    return delta


def cubic_roots_for_K(k: float) -> tuple[float, float]:
    """The two roots of t^3 - 2 t^2 + t - 4K = 0 inside [0, 1].

    Returns (t_minus, t_plus) with t_minus <= 1/3 <= t_plus.
    """
    k = _clamp_k(k)
    phi1 = _checked_arccos(54.0 * k - 1.0, "cos(phi_1) = 54K - 1")
    t_minus = (2.0 / 3.0) * (1.0 + math.cos((phi1 + TWO_PI) / 3.0))
    t_plus = (2.0 / 3.0) * (1.0 + math.cos((phi1 - TWO_PI) / 3.0))
    t_minus = _polish_t_minus(k, t_minus)
    delta = _polish_delta_plus(k, 1.0 - t_plus)
    return t_minus, 1.0 - delta


def i1_of_largest_schmidt_weight(u: float, k: float) -> float:
    """I_1 as a function of u = kappa_1^2 at fixed K.

    Equals 2(-u + u^2 - K/u) + 1; the K = 0, u = 0 limit is 1.
    """
    if u == 0.0:
        if k == 0.0:
            return 1.0
        raise OutOfRange("kappa_1^2 = 0 is admissible only at K = 0")
    return 1.0 - 2.0 * (u * (1.0 - u) + k / u)


def i1_of_p3(p1: float, p3: float, cos_theta: float) -> float:
    """I_1 of the canonical family at fixed p1, as a function of p3 and cos(theta)."""
    q = 1.0 - p1 * p1 - p3 * p3  # p2^2
    return (
        1.0
        - (2.0 / 3.0) * p1 * p1
        - 0.5 * q * q
        + (2.0 / SQRT3) * p1 * p3 * q * cos_theta
    )


def schmidt_bounds_for_K(k: float) -> ExtremalBounds:
    """Closed-form [I1_min, I1_max] over Schmidt vectors with fixed K.

    The minimum is attained at kappa_1^2 = t_minus with the two remaining
    squared coefficients equal, the maximum at kappa_1^2 = t_plus likewise.
    For K <= 1e-12 the minimum is taken at its analytic limit 1/2 (the
    formula divides K by t_minus, which is 0/0 at the boundary); the maximum
    needs no special case because the delta = 1 - t_plus form stays regular
    all the way to K = 0, where it yields exactly 1.
    """
    k = _clamp_k(k)
    phi1 = _checked_arccos(54.0 * k - 1.0, "cos(phi_1) = 54K - 1")
    t_minus, t_plus = cubic_roots_for_K(k)
    p1 = (27.0 * k) ** (1.0 / 6.0)
    p13 = min(1.0, p1**3)
    if k <= 1e-12:
        i1_min = 0.5
    else:
        i1_min = i1_of_largest_schmidt_weight(t_minus, k)
    delta = 1.0 - t_plus
    i1_max = 1.0 - 2.0 * ((1.0 - delta) * delta + k / (1.0 - delta))
    return ExtremalBounds(
        K=k,
        p1=p1,
        phi1=phi1,
        phi2=_checked_arccos(p13, "cos(phi_2) = p1^3"),
        phi3=_checked_arccos(-p13, "cos(phi_3) = -p1^3"),
        t_minus=t_minus,
        t_plus=t_plus,
        I1_min=i1_min,
        I1_max=i1_max,
    )


def _stationary_cubic_minus(p1: float, p3: float) -> float:
    # Stationary-point condition for the cos(theta) = -1 branch.
    return (
        p3**3
        - SQRT3 * p1 * p3 * p3
        + (p1 * p1 - 1.0) * p3
        + p1 * (1.0 - p1 * p1) / SQRT3
    )


def _stationary_cubic_plus(p1: float, p3: float) -> float:
    # cos(theta) = +1 branch; the polynomial above with p1 negated.
    return _stationary_cubic_minus(-p1, p3)


def p_form_bounds_for_p1(p1: float) -> ExtremalBounds:
    """Closed-form [I1_min, I1_max] over canonical parameters with fixed p1.

    The minimum sits on the cos(theta) = -1 branch at the stationary weight

        p3* = (p1 + 2 cos((phi_2 - 2 pi)/3)) / sqrt(3),  cos(phi_2) = p1^3,

    and evaluates to 1/2 + (8/9) p1^3 x + (4/3) x^2 - (8/9) x^4 with
    x = cos((phi_2 - 2 pi)/3).  The maximum is the mirror image on the
    cos(theta) = +1 branch with y = cos(phi_3 / 3), cos(phi_3) = -p1^3.
    Both stationary weights are verified to be roots of their cubics and to
    lie within [0, sqrt(1 - p1^2)].
    """
    p1 = _clamp_p1(p1)
    p13 = p1**3
    p3_cap = math.sqrt(max(0.0, 1.0 - p1 * p1))

    phi2 = _checked_arccos(p13, "cos(phi_2) = p1^3")
    x = math.cos((phi2 - TWO_PI) / 3.0)
    p3_argmin = (p1 + 2.0 * x) / SQRT3
    phi3 = _checked_arccos(-p13, "cos(phi_3) = -p1^3")
    y = math.cos(phi3 / 3.0)
    p3_argmax = (-p1 + 2.0 * y) / SQRT3

    for label, p3, poly in (
        ("minimizing", p3_argmin, _stationary_cubic_minus),
        ("maximizing", p3_argmax, _stationary_cubic_plus),
    ):
        if not (-1e-9 <= p3 <= p3_cap + 1e-9):
            raise NumericalFailure(
                f"{label} weight {p3!r} escapes [0, {p3_cap!r}] at p1={p1!r}"
            )
        resid = abs(poly(p1, p3))
        if resid > 1e-10:
            raise NumericalFailure(
                f"{label} weight fails its stationarity cubic by {resid:.3e}"
            )
    p3_argmin = min(max(p3_argmin, 0.0), p3_cap)
    p3_argmax = min(max(p3_argmax, 0.0), p3_cap)

    i1_min = 0.5 + (8.0 / 9.0) * p13 * x + (4.0 / 3.0) * x * x - (8.0 / 9.0) * x**4
    i1_max = 0.5 - (8.0 / 9.0) * p13 * y + (4.0 / 3.0) * y * y - (8.0 / 9.0) * y**4

    k = p1**6 / 27.0
    t_minus, t_plus = cubic_roots_for_K(k)
    return ExtremalBounds(
        K=k,
        p1=p1,
        phi1=2.0 * phi2,  # cos(2 phi_2) = 2 p1^6 - 1 = 54K - 1
        phi2=phi2,
        phi3=phi3,
        t_minus=t_minus,
        t_plus=t_plus,
        I1_min=i1_min,
        I1_max=i1_max,
        p3_argmin=p3_argmin,
        p3_argmax=p3_argmax,
    )


@dataclass(frozen=True)
class RangeEqualityReport:
    """Per-grid-point deviations between the two closed-form bound pairs."""

    p1_grid: np.ndarray
    dev_min: np.ndarray
    dev_max: np.ndarray

    @property
    def max_dev_min(self) -> float:
        return float(np.max(self.dev_min))

    @property
    def max_dev_max(self) -> float:
        return float(np.max(self.dev_max))


def verify_range_equality(grid_size: int) -> RangeEqualityReport:
    """Compare the two bound pairs on a uniform p1 grid over [0, 1].

    For each grid point the Schmidt-side bounds at K = p1^6/27 are compared
    with the parameter-side bounds at p1.  The triple-angle substitutions
    linking the two sides (p1^3 = 4x^3 - 3x = 3y - 4y^3, K = (4x^3 - 3x)^2/27,
    and the half-angle bridge between phi_1 and phi_2) are checked as
    self-consistency assertions at every point.
    """
    if grid_size < 2:
        raise OutOfRange(f"grid_size must be at least 2, got {grid_size}")
    grid = np.linspace(0.0, 1.0, grid_size)
    dev_min = np.empty(grid_size)
    dev_max = np.empty(grid_size)
    for idx, p1 in enumerate(grid):
        pb = p_form_bounds_for_p1(float(p1))
        kb = schmidt_bounds_for_K(p1**6 / 27.0)
        dev_min[idx] = abs(kb.I1_min - pb.I1_min)
        dev_max[idx] = abs(kb.I1_max - pb.I1_max)

        x = math.cos((pb.phi2 - TWO_PI) / 3.0)
        y = math.cos(pb.phi3 / 3.0)
        p13 = p1**3
        checks = (
            ("p1^3 = 4x^3 - 3x", abs(4.0 * x**3 - 3.0 * x - p13)),
            ("p1^3 = 3y - 4y^3", abs(3.0 * y - 4.0 * y**3 - p13)),
            ("27K = (4x^3 - 3x)^2", abs((4.0 * x**3 - 3.0 * x) ** 2 / 27.0 - kb.K)),
            (
                "half-angle bridge",
                abs(math.cos((kb.phi1 + TWO_PI) / 3.0) - (2.0 * x * x - 1.0)),
            ),
        )
        for label, err in checks:
            if err > 1e-12:
                raise NumericalFailure(
                    f"self-consistency check '{label}' fails by {err:.3e} at p1={p1!r}"
                )
    return RangeEqualityReport(p1_grid=grid, dev_min=dev_min, dev_max=dev_max)


def _golden_minimize(f, a: float, b: float, tol: float = 1e-12):
    """Golden-section minimum of a unimodal f on [a, b]; returns (x, f(x))."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    inv_phi2 = (3.0 - math.sqrt(5.0)) / 2.0
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    c = a + inv_phi2 * h
    d = a + inv_phi * h
    yc, yd = f(c), f(d)
    n = int(math.ceil(math.log(tol / h) / math.log(inv_phi)))
    for _ in range(n):
        if yc < yd:
            b, d, yd = d, c, yc
            h *= inv_phi
            c = a + inv_phi2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= inv_phi
            d = a + inv_phi * h
            yd = f(d)
    x = c if yc < yd else d
    return x, f(x)


def _refine_extremum(f, grid: np.ndarray, vals: np.ndarray, sign: float):
    """Polish the best grid point of sign*f with a golden-section pass."""
    idx = int(np.argmin(sign * vals))
    lo = grid[max(idx - 1, 0)]
    hi = grid[min(idx + 1, grid.size - 1)]
    x, fx = _golden_minimize(lambda u: sign * f(u), float(lo), float(hi))
    best = min(sign * vals[idx], fx)
    return sign * best


def brute_force_I1_range(k: float, resolution: int) -> tuple[float, float]:
    """Brute-force [I1_min, I1_max] at fixed K, independent of the closed forms.

    Scans kappa_1^2 across [t_minus, t_plus] at the given resolution, then
    polishes the minimum and maximum with golden-section refinement to 1e-12.
    Serves as the oracle for :func:`schmidt_bounds_for_K`.
    """
    if resolution < 10:
        raise OutOfRange(f"resolution must be at least 10, got {resolution}")
    k = _clamp_k(k)
    t_minus, t_plus = cubic_roots_for_K(k)
    grid = np.linspace(t_minus, t_plus, resolution)
    vals = np.array([i1_of_largest_schmidt_weight(float(u), k) for u in grid])
    f = lambda u: i1_of_largest_schmidt_weight(max(u, t_minus), k)
    lo = _refine_extremum(f, grid, vals, 1.0)
    hi = _refine_extremum(f, grid, vals, -1.0)
    return lo, hi


def brute_force_I1_range_p_form(p1: float, resolution: int) -> tuple[float, float]:
    """Brute-force [I1_min, I1_max] over (p3, cos theta = +-1) at fixed p1.

    Companion oracle for :func:`p_form_bounds_for_p1`; scans the product-term
    weight on both extreme phase branches and polishes with golden section.
    """
    if resolution < 10:
        raise OutOfRange(f"resolution must be at least 10, got {resolution}")
    p1 = _clamp_p1(p1)
    p3_cap = math.sqrt(max(0.0, 1.0 - p1 * p1))
    grid = np.linspace(0.0, p3_cap, resolution)
    lo = math.inf
    hi = -math.inf
    for cos_theta in (-1.0, 1.0):
        vals = np.array([i1_of_p3(p1, float(p3), cos_theta) for p3 in grid])
        f = lambda p3: i1_of_p3(p1, min(max(p3, 0.0), p3_cap), cos_theta)
        lo = min(lo, _refine_extremum(f, grid, vals, 1.0))
        hi = max(hi, _refine_extremum(f, grid, vals, -1.0))
    return lo, hi
