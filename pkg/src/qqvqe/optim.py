"""Derivative-free optimizers over the six-angle parameter space.

Three methods are implemented from their published algorithmic
descriptions: the Nelder-Mead simplex, Powell's direction-set method with
bracketing plus Brent line minimization, and a linear-approximation
trust-region method in the COBYLA family (7-point interpolation simplex,
model step within a trust radius, radius shrinking on failure).  All three
log every objective evaluation, never exceed their evaluation budget, and
are fully deterministic for a deterministic objective.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NELDER_MEAD = "nelder-mead"
POWELL = "powell"
COBYLA = "cobyla"
METHODS = (NELDER_MEAD, POWELL, COBYLA)

#: Success window around the exact ground energy, MJ/mol.
SUCCESS_TOL = 0.01


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = COBYLA
    ftol: float = 0.01
    max_evals: int = 300
    initial_step: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.ftol <= 0:
            raise ValueError("ftol must be positive")
        if self.max_evals < 1:
            raise ValueError("max_evals must be >= 1")
        if self.initial_step <= 0:
            raise ValueError("initial_step must be positive")


@dataclass
class OptResult:
    best_theta: np.ndarray
    best_value: float
    n_evals: int
    trace: list[tuple[np.ndarray, float]] = field(repr=False)
    converged: bool = False


def is_success(result: OptResult, e0: float) -> bool:
    """Whether the run's best value is within 0.01 MJ/mol of e0."""
    return abs(result.best_value - e0) < SUCCESS_TOL


class _BudgetExhausted(Exception):
    pass


class _Recorder:
    """Wraps the objective: counts calls, keeps the trace, enforces budget."""

    def __init__(self, fn, max_evals: int):
        self.fn = fn
        self.max_evals = max_evals
        self.trace: list[tuple[np.ndarray, float]] = []

    def __call__(self, x) -> float:
        if len(self.trace) >= self.max_evals:
            raise _BudgetExhausted
        value = float(self.fn(np.asarray(x, dtype=float)))
        self.trace.append((np.array(x, dtype=float), value))
        return value

    def result(self, converged: bool) -> OptResult:
        values = [v for _, v in self.trace]
        best = int(np.argmin(values))
        return OptResult(
            best_theta=self.trace[best][0].copy(),
            best_value=values[best],
            n_evals=len(self.trace),
            trace=self.trace,
            converged=converged,
        )


def minimize(fn, theta0, cfg: OptimizerConfig) -> OptResult:
    """Dispatch to the configured method."""
    runner = {NELDER_MEAD: nelder_mead, POWELL: powell, COBYLA: cobyla}[cfg.method]
    return runner(fn, theta0, cfg)


def nelder_mead(fn, theta0, cfg: OptimizerConfig) -> OptResult:
    """Standard simplex method (reflect 1, expand 2, contract 0.5, shrink 0.5).

    Stops when the spread of simplex values falls below ftol, or at the
    evaluation budget.
    """
    rec = _Recorder(fn, cfg.max_evals)
    x0 = np.asarray(theta0, dtype=float)
    n = x0.size
    converged = False
    try:
        simplex = [x0.copy()]
        for i in range(n):
            v = x0.copy()
            v[i] += cfg.initial_step
            simplex.append(v)
        values = [rec(v) for v in simplex]
        while True:
            order = np.argsort(values, kind="stable")
            simplex = [simplex[i] for i in order]
            values = [values[i] for i in order]
            if values[-1] - values[0] < cfg.ftol:
                converged = True
                break
            centroid = np.mean(simplex[:-1], axis=0)
            xr = centroid + (centroid - simplex[-1])
            fr = rec(xr)
            if fr < values[0]:
                xe = centroid + 2.0 * (centroid - simplex[-1])
                fe = rec(xe)
                if fe < fr:
                    simplex[-1], values[-1] = xe, fe
                else:
                    simplex[-1], values[-1] = xr, fr
            elif fr < values[-2]:
                simplex[-1], values[-1] = xr, fr
            else:
                if fr < values[-1]:
                    xc = centroid + 0.5 * (centroid - simplex[-1])
                else:
                    xc = centroid - 0.5 * (centroid - simplex[-1])
                fc = rec(xc)
                if fc < min(fr, values[-1]):
                    simplex[-1], values[-1] = xc, fc
                else:
                    for i in range(1, n + 1):
                        simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                        values[i] = rec(simplex[i])
    except _BudgetExhausted:
        converged = False
    return rec.result(converged)


def _bracket(g, f0: float, step: float, rec_budget=30):
    """Bracket a minimum of g along alpha >= or <= 0, starting from 0."""
    a, fa = 0.0, f0
    b = step
    fb = g(b)
    if fb > fa:
        a, b = b, a
        fa, fb = fb, fa
    c = b + 1.618 * (b - a)
    fc = g(c)
    k = 0
    while fc < fb and k < rec_budget:
        a, fa = b, fb
        b, fb = c, fc
        c = b + 1.618 * (b - a)
        fc = g(c)
        k += 1
    return (a, b, c), (fa, fb, fc)


def _brent(g, abc, fabc, value_tol: float, maxiter: int = 40):
    """Brent line minimization with a value-plateau stopping rule.

    Iterates parabolic/golden steps until the incumbent minimum has not
    improved by at least value_tol over three consecutive iterations (or
    maxiter).  Suits both smooth lines (parabolic convergence makes the
    incumbent stall quickly once converged) and kinked ones (golden
    descent continues until improvements flatten at the requested value
    resolution).
    """
    a, b, c = abc
    fa, fb, fc = fabc
    lo, hi = min(a, c), max(a, c)
    x = w = v = b
    fx = fw = fv = fb
    d = e = 0.0
    flat_streak = 0
    tiny = 1e-12
    for _ in range(maxiter):
        m = 0.5 * (lo + hi)
        if hi - lo < tiny:
            break
        use_golden = True
        if abs(e) > tiny:
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0:
                p = -p
            q = abs(q)
            etmp = e
            e = d
            if abs(p) < abs(0.5 * q * etmp) and q * (lo - x) < p < q * (hi - x):
                d = p / q
                use_golden = False
        if use_golden:
            e = (hi - x) if x < m else (lo - x)
            d = 0.382 * e
        u = x + d if abs(d) > tiny else x + (tiny if d >= 0 else -tiny)
        fu = g(u)
        incumbent_before = fx
        if fu <= fx:
            if u >= x:
                lo = x
            else:
                hi = x
            v, w, x = w, x, u
            fv, fw, fx = fw, fx, fu
        else:
            if u < x:
                lo = u
            else:
                hi = u
            if fu <= fw or w == x:
                v, w = w, u
                fv, fw = fw, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
        if incumbent_before - fx < value_tol:
            flat_streak += 1
            if flat_streak >= 3:
                break
        else:
            flat_streak = 0
    return x, fx


def powell(fn, theta0, cfg: OptimizerConfig) -> OptResult:
    """Powell's direction-set method with Brent line minimizations.

    One iteration line-minimizes along each direction in turn, then applies
    the standard direction-replacement heuristic.  Stops when an iteration
    improves the objective by less than ftol.
    """
    rec = _Recorder(fn, cfg.max_evals)
    x = np.asarray(theta0, dtype=float).copy()
    n = x.size
    dirs = [np.eye(n)[i].copy() for i in range(n)]
    line_tol = cfg.ftol / 20.0
    converged = False
    try:
        fx = rec(x)
        while True:
            f_start, x_start = fx, x.copy()
            biggest_drop, biggest_i = 0.0, 0
            for i in range(n):
                direction = dirs[i]

                def g(alpha):
                    return rec(x + alpha * direction)

                abc, fabc = _bracket(g, fx, cfg.initial_step)
                alpha, falpha = _brent(g, abc, fabc, line_tol)
                if falpha < fx:
                    drop = fx - falpha
                    x = x + alpha * direction
                    fx = falpha
                    if drop > biggest_drop:
                        biggest_drop, biggest_i = drop, i
            if f_start - fx < cfg.ftol:
                converged = True
                break
            extrapolated = 2.0 * x - x_start
            f_e = rec(extrapolated)
            if f_e < f_start:
                t = (
                    2.0 * (f_start - 2.0 * fx + f_e)
                    * (f_start - fx - biggest_drop) ** 2
                    - biggest_drop * (f_start - f_e) ** 2
                )
                if t < 0.0:
                    new_dir = x - x_start
                    norm = np.linalg.norm(new_dir)
                    if norm > 1e-12:
                        new_dir = new_dir / norm

                        def g(alpha):
                            return rec(x + alpha * new_dir)

                        abc, fabc = _bracket(g, fx, cfg.initial_step)
                        alpha, falpha = _brent(g, abc, fabc, line_tol)
                        if falpha < fx:
                            x = x + alpha * new_dir
                            fx = falpha
                        dirs[biggest_i] = dirs[-1]
                        dirs[-1] = new_dir
    except _BudgetExhausted:
        converged = False
    return rec.result(converged)


def cobyla(fn, theta0, cfg: OptimizerConfig) -> OptResult:
    """Linear-approximation trust-region method on a 7-point simplex.

    The objective is interpolated linearly over n+1 points; each iteration
    steps from the best vertex to the model minimizer on a ball of radius
    delta, where delta adapts quickly between the slowly decreasing
    resolution rho and twice the initial step.  Degenerate or overstretched
    simplexes are repaired along their thinnest direction.  rho shrinks on
    persistent failure down to a final radius tied to ftol; when a descent
    pass reaches that radius having improved the incumbent by more than
    ftol/2, the radius ladder restarts from the incumbent (a polish cycle)
    while budget remains.  On a noisy objective, repeated evaluations of
    the incumbent estimate the noise floor and rho holds once the model's
    predicted decrease falls below it, instead of collapsing into noise.
    """
    rec = _Recorder(fn, cfg.max_evals)
    x0 = np.asarray(theta0, dtype=float)
    n = x0.size
    rho = cfg.initial_step
    delta = cfg.initial_step
    rho_end = 0.05 * cfg.ftol
    geom_far = 2.5
    geom_flat = 0.15
    delta_cap = 2.0 * cfg.initial_step
    converged = False
    try:
        points = np.tile(x0, (n + 1, 1))
        for i in range(n):
            points[i + 1, i] += rho
        # evaluate the start twice: the spread measures evaluation noise
        # (exactly zero for a deterministic objective)
        first = rec(points[0])
        second = rec(points[0])
        sigma_est = abs(first - second)
        values = np.array([0.5 * (first + second)] + [rec(p) for p in points[1:]])
        anchor = points[int(np.argmin(values))].copy()
        cycle_best = float(np.min(values))

        def replace(y, v):
            """Swap in y for the vertex with the largest barycentric weight."""
            b = int(np.argmin(values))
            others = [j for j in range(n + 1) if j != b]
            diffs = points[others] - points[b]
            try:
                coeffs = np.linalg.solve(diffs.T, y - points[b])
                j = others[int(np.argmax(np.abs(coeffs)))]
            except np.linalg.LinAlgError:
                j = others[int(np.argmax(values[others]))]
            points[j] = y
            values[j] = v

        while True:
            b = int(np.argmin(values))
            others = [j for j in range(n + 1) if j != b]
            diffs = points[others] - points[b]
            dvals = values[others] - values[b]
            dists = np.linalg.norm(diffs, axis=1)
            svals = np.linalg.svd(diffs, compute_uv=False)
            if dists.max() > geom_far * max(delta, rho) or svals[-1] < geom_flat * rho:
                # geometry repair: drop the farthest vertex, probe the
                # thinnest direction of the simplex at radius rho
                _, _, vt = np.linalg.svd(diffs)
                j = others[int(np.argmax(dists))]
                direction = vt[-1]
                grad_ls, *_ = np.linalg.lstsq(diffs, dvals, rcond=None)
                sign = -np.sign(grad_ls @ direction) or 1.0
                probe = points[b] + sign * rho * direction
                values_probe = rec(probe)
                points[j] = probe
                values[j] = values_probe
                continue
            grad = np.linalg.solve(diffs, dvals)
            grad_norm = np.linalg.norm(grad)
            if grad_norm < 1e-15:
                if rho <= rho_end:
                    converged = True
                    break
                rho = max(0.5 * rho, rho_end)
                delta = rho
                continue
            descent = grad / grad_norm
            f_best = values[b]
            x_best = points[b].copy()
            candidate = x_best - delta * descent
            f_cand = rec(candidate)
            replace(candidate, f_cand)
            ratio = (f_best - f_cand) / (delta * grad_norm)
            if ratio < 0.1 and f_cand >= f_best:
                # one-eval parabolic repair along the ray
                curv = 2.0 * (f_cand - f_best + delta * grad_norm) / (delta * delta)
                if curv > 0:
                    a_star = grad_norm / curv
                    if 0.05 * delta < a_star < 0.95 * delta:
                        repaired = x_best - a_star * descent
                        f_rep = rec(repaired)
                        replace(repaired, f_rep)
            if ratio >= 0.7:
                delta = min(2.0 * delta, delta_cap)
            elif ratio < 0.1:
                if delta > rho:
                    delta = max(0.5 * delta, rho)
                    continue
                if sigma_est > 0.0:
                    # noisy objective: re-average the incumbent (its stored
                    # value may be a lucky low draw blocking progress) and
                    # hold rho while the model signal is inside the noise
                    if f_cand >= f_best:
                        b2 = int(np.argmin(values))
                        f_re = rec(points[b2])
                        sigma_est = max(sigma_est, abs(f_re - values[b2]))
                        values[b2] = 0.5 * (values[b2] + f_re)
                    if rho * grad_norm < 2.0 * sigma_est:
                        continue
                b3 = int(np.argmin(values))
                move = points[b3] - anchor
                if np.linalg.norm(move) > 2.0 * rho:
                    # pattern step along the net movement of this rho level
                    pattern = points[b3] + move
                    f_pat = rec(pattern)
                    replace(pattern, f_pat)
                    if f_pat < values[b3]:
                        continue
                if rho <= rho_end:
                    best_now = float(np.min(values))
                    if cycle_best - best_now > 0.5 * cfg.ftol and \
                            len(rec.trace) + 40 <= cfg.max_evals:
                        cycle_best = best_now
                        rho = max(0.25 * cfg.initial_step, 8.0 * rho_end)
                        delta = rho
                        anchor = points[int(np.argmin(values))].copy()
                        continue
                    converged = True
                    break
                rho = max(0.5 * rho, rho_end)
                delta = rho
                anchor = points[int(np.argmin(values))].copy()
    except _BudgetExhausted:
        converged = False
    return rec.result(converged)
