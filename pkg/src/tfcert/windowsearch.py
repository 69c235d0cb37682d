"""Empirical window design: drive |V_g f| below |<f, g>|/N outside a ball.

The window family is a dilated Gaussian-Hermite span (an orthonormal basis
with closed-form decay, keeping the search space compact). The tail ratio is
a lattice scan and therefore a heuristic lower bound of the true sup; the
scan covers lattice points strictly outside the ball plus a deterministic
ring of samples on its boundary, because the sup over the open exterior
equals the boundary maximum for continuous fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError, NearOrthogonalError, NumericalRefusal
from .tfops import FunctionEvaluator, GridSpec, stft, stft_grid, stft_points

WIDTH_MIN, WIDTH_MAX = 1.0 / 16.0, 16.0
MAX_DEGREE = 8
DENOM_FLOOR = 1e-10
_RING_SAMPLES = 180


@dataclass(frozen=True)
class WindowParams:
    """Dilated Gaussian-Hermite window: width w and coefficients c_0..c_d."""

    width: float
    hermite_coeffs: np.ndarray

    def __post_init__(self):
        w = float(self.width)
        c = np.asarray(self.hermite_coeffs, dtype=float).reshape(-1)
        if not WIDTH_MIN <= w <= WIDTH_MAX:
            raise InputError(f"width must lie in [{WIDTH_MIN}, {WIDTH_MAX}]")
        if c.size < 1 or c.size > MAX_DEGREE + 1:
            raise InputError(f"need 1..{MAX_DEGREE + 1} Hermite coefficients")
        if not np.any(c != 0.0):
            raise InputError("coefficient vector must not be identically zero")
        object.__setattr__(self, "width", w)
        object.__setattr__(self, "hermite_coeffs", c)

    def to_json(self) -> dict:
        return {"width": self.width,
                "hermite_coeffs": [float(v) for v in self.hermite_coeffs]}


def hermite_function(k: int) -> FunctionEvaluator:
    """k-th L2-orthonormal Hermite function (h_0 is the unit Gaussian)."""
    return realize_window(WindowParams(1.0, np.eye(1, k + 1, k)[0]))


def realize_window(params: WindowParams) -> FunctionEvaluator:
    """Build the window evaluator g(t) = sum_k c_k w^{-1/2} h_k(t/w)."""
    w = params.width
    c = params.hermite_coeffs
    scaled = np.array([ck * 2.0 ** 0.25 / math.sqrt(2.0 ** k * math.factorial(k))
                       for k, ck in enumerate(c)])

    def fn(t):
        s = t / w
        poly = np.polynomial.hermite.hermval(math.sqrt(2.0 * math.pi) * s, scaled)
        return (w ** -0.5 * poly * np.exp(-np.pi * s * s)).astype(complex)

    return FunctionEvaluator(dim=1, fn=fn, envelope=None, singularities=(),
                             square_integrable=True)


def tail_ratio(f: FunctionEvaluator, g_params: WindowParams, R: float, N: int,
               lattice: Optional[GridSpec] = None,
               grid: Optional[GridSpec] = None) -> float:
    """max |V_g f| over {||lambda|| >= R} scan points, divided by |<f, g>|.

    Scans lattice points with ||lambda|| > R plus a ring on the boundary
    circle itself; a heuristic lower bound of the true exterior sup. Raises
    NearOrthogonalError when the denominator underflows (distinct from an
    infinite ratio).
    """
    if f.dim != 1:
        raise InputError("window search is implemented for dimension 1")
    R = float(R)
    if R <= 0:
        raise InputError("R must be positive")
    g = realize_window(g_params)
    denom = abs(stft(f, g, (0.0, 0.0), grid))
    if denom <= DENOM_FLOOR:
        raise NearOrthogonalError(
            "|<f, g>| underflows; the tail ratio is undefined for this window")
    lattice = lattice or GridSpec(8.0, 81)
    xs = np.linspace(-lattice.half_width, lattice.half_width,
                     lattice.samples_per_axis)
    field = np.abs(stft_grid(f, g, xs, xs, grid))
    radii = np.hypot(*np.meshgrid(xs, xs, indexing="ij"))
    outside = field[radii > R]
    best = float(outside.max()) if outside.size else 0.0
    theta = np.linspace(0.0, 2.0 * np.pi, _RING_SAMPLES, endpoint=False)
    ring = np.column_stack([R * np.cos(theta), R * np.sin(theta)])
    ring_vals = np.abs(stft_points(f, g, ring, grid))
    return max(best, float(ring_vals.max())) / denom


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a window search run, with the full incumbent trace."""

    best_params: WindowParams
    ratio: float
    target: float
    achieved: bool
    evaluations: int
    trace: tuple

    def to_json(self) -> dict:
        return {
            "best_params": self.best_params.to_json(),
            "ratio": float(self.ratio),
            "target": float(self.target),
            "achieved": self.achieved,
            "evaluations": int(self.evaluations),
            "trace": [{"params": p.to_json(), "ratio": float(r)}
                      for p, r in self.trace],
        }


def _fold(value: float, lo: float, hi: float) -> float:
    """Reflect a coordinate back into [lo, hi]."""
    span = hi - lo
    if span <= 0:
        return lo
    y = (value - lo) % (2.0 * span)
    if y < 0:
        y += 2.0 * span
    return lo + (y if y <= span else 2.0 * span - y)


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    @property
    def exhausted(self) -> bool:
        return self.used >= self.limit


def search(f: FunctionEvaluator, R: float, N: int, d: int, budget: int,
           seed: int = 0, lattice: Optional[GridSpec] = None,
           grid: Optional[GridSpec] = None,
           restarts: int = 3) -> SearchResult:
    """Derivative-free simplex search minimizing the tail ratio.

    Runs reflect/expand/contract iterations over the (d+2)-dimensional
    parameter box (width plus d+1 coefficients) from a fixed Gaussian start
    and seeded random restarts, reflecting out-of-box proposals back inside.
    Deterministic for fixed inputs; restarts merge by lowest ratio with ties
    resolved in start order. The trace records every improvement of the
    incumbent, so it is nonincreasing by construction.
    """
    if budget < 10:
        raise InputError("budget must be at least 10")
    d = int(d)
    if not 0 <= d <= MAX_DEGREE:
        raise InputError(f"degree must lie in [0, {MAX_DEGREE}]")
    target = 1.0 / int(N)
    ndim = d + 2
    lo = np.array([WIDTH_MIN] + [-1.0] * (d + 1))
    hi = np.array([WIDTH_MAX] + [1.0] * (d + 1))
    budget_state = _Budget(int(budget))
    incumbent = {"ratio": math.inf, "params": None, "trace": []}
    failures = []

    def objective(theta: np.ndarray) -> float:
        if budget_state.exhausted:
            return math.inf
        vec = np.array([_fold(v, l, h) for v, l, h in zip(theta, lo, hi)])
        budget_state.used += 1
        coeffs = vec[1:]
        if not np.any(np.abs(coeffs) > 1e-12):
            return math.inf
        params = WindowParams(vec[0], coeffs)
        try:
            ratio = tail_ratio(f, params, R, N, lattice, grid)
        except NearOrthogonalError as exc:
            failures.append(str(exc))
            return math.inf
        if ratio < incumbent["ratio"]:
            incumbent["ratio"] = ratio
            incumbent["params"] = params
            incumbent["trace"].append((params, ratio))
        return ratio

    rng = np.random.default_rng(int(seed))
    starts = [np.concatenate([[1.0], np.eye(1, d + 1, 0)[0]])]
    for _ in range(max(0, restarts - 1)):
        width0 = rng.uniform(0.5, 2.0)
        coeffs0 = rng.uniform(-1.0, 1.0, d + 1)
        starts.append(np.concatenate([[width0], coeffs0]))

    share = max(1, int(budget) // len(starts))
    for idx, start in enumerate(starts):
        cap = budget_state.limit if idx == len(starts) - 1 else \
            min(budget_state.limit, budget_state.used + share)
        _nelder_mead(objective, start, ndim, budget_state, cap)
        if budget_state.exhausted:
            break

    if incumbent["params"] is None:
        detail = failures[-1] if failures else "no finite objective value found"
        raise NumericalRefusal(f"window search failed on every start: {detail}")
    ratio = incumbent["ratio"]
    return SearchResult(best_params=incumbent["params"], ratio=ratio,
                        target=target, achieved=ratio < target,
                        evaluations=budget_state.used,
                        trace=tuple(incumbent["trace"]))


def _nelder_mead(objective, start: np.ndarray, ndim: int, budget: _Budget,
                 cap: int, alpha: float = 1.0, gamma: float = 2.0,
                 rho: float = 0.5, sigma: float = 0.5) -> None:
    """One bounded Nelder-Mead run; stops when its evaluation cap is hit."""
    steps = np.full(ndim, 0.25)
    steps[0] = 0.2
    simplex = [np.asarray(start, dtype=float)]
    for i in range(ndim):
        v = simplex[0].copy()
        v[i] += steps[i]
        simplex.append(v)
    values = [objective(v) for v in simplex]
    if budget.used >= cap:
        return

    while budget.used < cap and not budget.exhausted:
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]

        reflected = centroid + alpha * (centroid - worst)
        fr = objective(reflected)
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = reflected, fr
            continue
        if fr < values[0]:
            expanded = centroid + gamma * (reflected - centroid)
            fe = objective(expanded)
            if fe < fr:
                simplex[-1], values[-1] = expanded, fe
            else:
                simplex[-1], values[-1] = reflected, fr
            continue
        contracted = centroid + rho * (worst - centroid)
        fc = objective(contracted)
        if fc < values[-1]:
            simplex[-1], values[-1] = contracted, fc
            continue
        best = simplex[0]
        for i in range(1, len(simplex)):
            simplex[i] = best + sigma * (simplex[i] - best)
            values[i] = objective(simplex[i])
