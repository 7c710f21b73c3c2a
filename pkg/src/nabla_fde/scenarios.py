"""Parameter sweeps: built-in cases, ``.scn`` files, CSV and SVG output.

A ``.scn`` file is plain ``key = value`` text; ``#`` starts a comment::

    name    = my_sweep
    alpha   = 1.1:2.0:0.1      # start:stop:step (inclusive) or a comma list
    lambda  = -0.2
    b0      = 0
    b1      = 1
    a       = 1
    horizon = 100
    method  = auto             # auto | explicit | recursive

Unknown keys are errors.  Exactly one of ``alpha``/``lambda`` must hold more
than one value.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .classifier import Verdict, classify_zero_input, empirical_classify, overshoot_magnitude
from .errors import DomainError
from .operators import caputo_order
from .solver import SystemSpec, solve_explicit, solve_recursive

SOLVE_METHODS = ("auto", "explicit", "recursive")
CLASSIFY_HORIZON = 2000


@dataclass(frozen=True)
class Scenario:
    name: str
    alpha_grid: tuple[float, ...]
    lambda_grid: tuple[float, ...]
    b0: float = 1.0
    b1: float = 0.0
    a: int = 1
    horizon: int = 100
    method: str = "auto"

    def __post_init__(self) -> None:
        ag = tuple(float(x) for x in self.alpha_grid)
        lg = tuple(float(x) for x in self.lambda_grid)
        object.__setattr__(self, "alpha_grid", ag)
        object.__setattr__(self, "lambda_grid", lg)
        if not ag or not lg:
            raise DomainError("alpha and lambda grids must be non-empty")
        if (len(ag) > 1) + (len(lg) > 1) != 1:
            raise DomainError("exactly one of the alpha/lambda grids must hold more than one value")
        if any(x == 1 for x in lg):
            raise DomainError("lambda must not equal 1")
        if any(not x > 0 for x in ag):
            raise DomainError("alpha values must be positive")
        if self.method not in SOLVE_METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise DomainError(f"horizon must be a positive integer, got {self.horizon!r}")

    @property
    def sweeps_alpha(self) -> bool:
        return len(self.alpha_grid) > 1

    @property
    def points(self) -> list[tuple[float, float]]:
        """``(alpha, lambda)`` per sweep index."""
        if self.sweeps_alpha:
            return [(al, self.lambda_grid[0]) for al in self.alpha_grid]
        return [(self.alpha_grid[0], lam) for lam in self.lambda_grid]

    def b_for(self, alpha: float) -> tuple[float, ...]:
        n = caputo_order(alpha)
        if n == 1 and self.b1 != 0:
            raise DomainError(f"alpha = {alpha} takes one initial condition, but b1 = {self.b1}")
        return ((self.b0,) + (self.b1,) + (0.0,) * n)[:n]


def _grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + i * step, 10) for i in range(n))


BUILTIN: dict[str, Scenario] = {
    "case1": Scenario("case1", _grid(0.1, 1.0, 0.1), (-0.2,), b0=1.0, b1=0.0),
    "case2": Scenario("case2", _grid(1.0, 2.0, 0.1), (-0.2,), b0=1.0, b1=0.0),
    "case3": Scenario("case3", _grid(1.1, 2.0, 0.1), (-0.2,), b0=0.0, b1=1.0),
    "case4": Scenario("case4", (1.5,), _grid(-0.04, -0.4, -0.04), b0=1.0, b1=0.0),
}


def _parse_values(text: str, key: str) -> tuple[float, ...]:
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3 or parts[2] == 0:
                raise ValueError
            return _grid(*parts)
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise DomainError(f"{key}: cannot parse {text!r} as a list or start:stop:step range") from None


def parse_scenario(text: str, default_name: str = "scenario") -> Scenario:
    """Parse ``.scn`` text."""
    fields: dict[str, object] = {"name": default_name}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        try:
            if key == "name":
                fields["name"] = value
            elif key == "alpha":
                fields["alpha_grid"] = _parse_values(value, key)
            elif key == "lambda":
                fields["lambda_grid"] = _parse_values(value, key)
            elif key in ("b0", "b1"):
                fields[key] = float(value)
            elif key in ("a", "horizon"):
                fields[key] = int(value)
            elif key == "method":
                fields["method"] = value
            else:
                raise DomainError(f"line {lineno}: unknown key {key!r}")
        except ValueError:
            raise DomainError(f"line {lineno}: bad value for {key}: {value!r}") from None
    for required in ("alpha_grid", "lambda_grid"):
        if required not in fields:
            raise DomainError(f"scenario is missing {required.split('_')[0]!r}")
    return Scenario(**fields)


def load_scenario(target: str) -> Scenario:
    """A built-in case name or a path to a ``.scn`` file."""
    if target in BUILTIN:
        return BUILTIN[target]
    p = Path(target)
    if not p.is_file():
        raise DomainError(f"{target!r} is neither a built-in case ({', '.join(BUILTIN)}) nor a file")
    return parse_scenario(p.read_text(encoding="utf-8"), default_name=p.stem)


def pick_method(method: str, alpha: float, lam: float) -> str:
    if method != "auto":
        return method
    if abs(lam) >= 0.95 or abs(alpha - round(alpha)) <= 1e-12:
        return "recursive"
    return "explicit"


@dataclass(frozen=True)
class SweepSummary:
    sweep_value: float
    alpha: float
    lam: float
    method: str
    analytic: Verdict
    empirical: Verdict
    overshoot: float
    tail: float


@dataclass(frozen=True)
class ScenarioResult:
    csv_path: Path
    svg_path: Path
    summary: tuple[SweepSummary, ...]
    responses: tuple[np.ndarray, ...]


def _run_point(args):
    sc, alpha, lam, classify_horizon = args
    spec = SystemSpec(alpha, lam, sc.a, sc.b_for(alpha))
    method = pick_method(sc.method, alpha, lam)
    solve = solve_explicit if method == "explicit" else solve_recursive
    y = solve(spec, K=sc.horizon).y
    long = solve_recursive(spec, K=max(classify_horizon, sc.horizon), allow_overflow=True)
    emp = empirical_classify(long, min_horizon=min(500, classify_horizon))
    ana = classify_zero_input(alpha, lam, spec.b)
    sweep = alpha if sc.sweeps_alpha else lam
    return y, SweepSummary(sweep, alpha, lam, method, ana.verdict, emp.verdict, overshoot_magnitude(y), float(abs(y[-1])))


def format_csv(sc: Scenario, ys) -> str:
    lines = ["sweep_param,k,y"]
    for (alpha, lam), y in zip(sc.points, ys):
        p = repr(alpha if sc.sweeps_alpha else lam)
        for i, v in enumerate(y):
            lines.append(f"{p},{sc.a + 1 + i},{v:.17g}")
    return "\n".join(lines) + "\n"


def run_scenario(
    sc: Scenario,
    out_dir,
    workers: int = 1,
    classify_horizon: int = CLASSIFY_HORIZON,
) -> ScenarioResult:
    """Solve every sweep point, write ``<name>.csv`` and ``<name>.svg``.

    Points may be solved in a process pool; results are always gathered in
    sweep order, so the files do not depend on ``workers``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(sc, al, lam, classify_horizon) for al, lam in sc.points]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs), os.cpu_count() or 1)) as ex:
            results = list(ex.map(_run_point, jobs))
    else:
        results = [_run_point(j) for j in jobs]
    ys = tuple(r[0] for r in results)
    summary = tuple(r[1] for r in results)

    csv_path = out / f"{sc.name}.csv"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(sc, ys))

    from .svg import line_chart

    sym = "alpha" if sc.sweeps_alpha else "lambda"
    fixed = f"lambda={sc.lambda_grid[0]:g}" if sc.sweeps_alpha else f"alpha={sc.alpha_grid[0]:g}"
    grid = np.arange(sc.a + 1, sc.a + sc.horizon + 1)
    series = [(f"{sym}={s.sweep_value:g}", grid, y) for s, y in zip(summary, ys)]
    title = f"{sc.name}: b0={sc.b0:g}, b1={sc.b1:g}, {fixed}"
    svg_path = out / f"{sc.name}.svg"
    with open(svg_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(line_chart(series, title=title, xlabel="k", ylabel="y(k)"))
    return ScenarioResult(csv_path, svg_path, summary, ys)


def with_overrides(sc: Scenario, horizon: int | None = None, method: str | None = None) -> Scenario:
    kw = {}
    if horizon is not None:
        kw["horizon"] = horizon
    if method is not None:
        kw["method"] = method
    return replace(sc, **kw) if kw else sc
