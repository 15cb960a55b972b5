"""
Parameter sweeps over the construction families.

Grid points are evaluated concurrently on a thread pool; every point
function is pure, and a point whose evaluation raises a GrayforgeError is
recorded with its error class in the `status` column instead of aborting
the sweep.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from src.models.reports import SweepResult
from src.utils.config import get_global_config
from src.utils.errors import GrayforgeError
from src.utils.logging_util import log_sweep_metrics, setup_logging

from src.functions.einstein_family import enumerate_einstein
from src.functions.family_params import derive_params
from src.functions.gray_solver import asymmetric_search, eps_s, eta_estimate
from src.functions.kahler_family import kahler_boundary_residuals, kahler_spec
from src.functions.product_family import product_spec


logger = setup_logging("sweeps")

# asymmetric eps = -1 families are searched for below this twist only
ASYMMETRIC_CEILING = 2.1

SweepPoint = Callable[..., Dict]


def _run(kind: str, point: SweepPoint, grid: Iterable, columns: List[str],
         max_workers: Optional[int] = None) -> List[Dict]:
    """Evaluate `point` over `grid` in parallel; records keep grid order."""
    grid = list(grid)
    max_workers = max_workers or get_global_config().max_workers
    start = time.perf_counter()

    def guarded(args):
        args = args if isinstance(args, tuple) else (args,)
        try:
            record = point(*args)
            record.setdefault("status", "ok")
        except GrayforgeError as e:
            logger.warning("Sweep point failed", kind=kind, point=list(args), error_type=type(e).__name__)
            record = {"status": type(e).__name__}
        return {column: record.get(column, _axis_value(columns, column, args)) for column in columns}

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        records = list(pool.map(guarded, grid))

    failures = sum(1 for r in records if r["status"] != "ok")
    log_sweep_metrics(logger, kind, len(records), failures, (time.perf_counter() - start) * 1000)
    return records


def _axis_value(columns: List[str], column: str, args: tuple):
    # failed points still report their grid coordinates
    index = columns.index(column)
    return args[index] if index < len(args) else None


def einstein_count(genera: Sequence[int], max_workers: Optional[int] = None) -> SweepResult:
    """Einstein members per genus against the expected max(0, 2 genus - 3)."""
    columns = ["genus", "count", "expected", "matches", "status"]

    def point(genus: int) -> Dict:
        count = len(enumerate_einstein(genus)) if genus >= 2 else 0
        expected = max(0, 2 * genus - 3)
        return {"genus": genus, "count": count, "expected": expected, "matches": count == expected}

    records = _run("einstein-count", point, genera, columns, max_workers)
    return SweepResult(
        kind="einstein-count",
        axes={"genus": "genus of the base curve"},
        columns=columns,
        records=records,
        summary={"all_match": all(r["matches"] for r in records)},
    )


def eta_sweep(lower: float = 2.0, upper: float = 2.1, tol: float = 1e-5, grid: int = 401) -> SweepResult:
    """The bracketed threshold as a single record."""
    columns = ["lower", "upper", "value", "width", "iterations", "witness_x", "witness_y", "status"]
    estimate = eta_estimate(lower, upper, tol, grid)
    record = {
        "lower": estimate.bracket[0],
        "upper": estimate.bracket[1],
        "value": estimate.value,
        "width": estimate.width,
        "iterations": estimate.iterations,
        "witness_x": estimate.witness.x if estimate.witness else None,
        "witness_y": estimate.witness.y if estimate.witness else None,
        "status": "ok",
    }
    return SweepResult(
        kind="eta",
        axes={"s": "twist searched by bisection"},
        columns=columns,
        records=[record],
        summary={"value": estimate.value, "width": estimate.width},
    )


def eps_s_curve(s_values: Sequence[float], eps: int = -1, max_workers: Optional[int] = None) -> SweepResult:
    columns = ["s", "eps", "eps_s", "status"]

    def point(s: float) -> Dict:
        return {"s": s, "eps": eps, "eps_s": eps_s(s, eps)}

    records = _run("eps-s", point, s_values, columns, max_workers)
    return SweepResult(kind="eps-s", axes={"s": "twist"}, columns=columns, records=records,
                       summary={"points": len(records)})


def kahler_window(s_values: Sequence[float], d_values: Sequence[float],
                  max_workers: Optional[int] = None) -> SweepResult:
    """Feasibility of the Kahler branch over an (s, D) grid, from the endpoint residuals."""
    columns = ["s", "D", "feasible", "y", "x", "status"]

    def point(s: float, D: float) -> Dict:
        spec = kahler_spec(s, D)
        return {"s": s, "D": D, "feasible": kahler_boundary_residuals(spec).passed, "y": spec.y, "x": spec.x}

    grid = [(float(s), float(D)) for s in s_values for D in d_values]
    records = _run("kahler-window", point, grid, columns, max_workers)
    for record in records:
        if record["feasible"] is None:
            record["feasible"] = False
    feasible = [r["s"] for r in records if r["feasible"]]
    return SweepResult(
        kind="kahler-window",
        axes={"s": "twist", "D": "Kahler coefficient D"},
        columns=columns,
        records=records,
        summary={"feasible": len(feasible), "s_min": min(feasible, default=None),
                 "s_max": max(feasible, default=None)},
    )


def asymmetric_count(genera: Sequence[int], max_workers: Optional[int] = None) -> SweepResult:
    """Per genus, the k whose twist k/(genus - 1) carries an asymmetric eps = -1 family."""
    columns = ["genus", "count", "ks", "inconclusive", "status"]

    def point(genus: int) -> Dict:
        if genus < 2:
            return {"genus": genus, "count": 0, "ks": "", "inconclusive": 0}
        found, inconclusive = [], 0
        k = 1
        while True:
            s = derive_params(genus, k).s
            if s >= ASYMMETRIC_CEILING:
                break
            outcome = asymmetric_search(s, -1)
            if outcome.status == "found":
                found.append(k)
            elif outcome.status == "inconclusive":
                inconclusive += 1
            k += 1
        return {"genus": genus, "count": len(found), "ks": ",".join(str(k) for k in found),
                "inconclusive": inconclusive}

    records = _run("asymmetric-count", point, genera, columns, max_workers)
    return SweepResult(kind="asymmetric-count", axes={"genus": "genus of the base curve"},
                       columns=columns, records=records,
                       summary={"total": sum(r["count"] or 0 for r in records)})


def kahler_count(genera: Sequence[int], D: float = 1.0, max_workers: Optional[int] = None) -> SweepResult:
    """Per genus, the k with s = k/(genus - 1) inside the Kahler window."""
    columns = ["genus", "count", "expected", "status"]

    def point(genus: int) -> Dict:
        count = 0
        if genus >= 2:
            for k in range(1, 2 * genus):
                try:
                    kahler_spec(derive_params(genus, k, A=0).s, D)
                except GrayforgeError:
                    continue
                count += 1
        return {"genus": genus, "count": count, "expected": max(0, 2 * genus - 3)}

    records = _run("kahler-count", point, genera, columns, max_workers)
    return SweepResult(kind="kahler-count", axes={"genus": "genus of the base curve"},
                       columns=columns, records=records,
                       summary={"all_match": all(r["count"] == r["expected"] for r in records)})


def product_constants(alphas: Sequence[float], max_workers: Optional[int] = None) -> SweepResult:
    """The Gray constant 3 C3 over an alpha grid."""
    columns = ["alpha", "A3", "B3", "C3", "gray_constant", "status"]

    def point(alpha: float) -> Dict:
        spec = product_spec(alpha)
        return {"alpha": alpha, "A3": spec.A3, "B3": spec.B3, "C3": spec.C3, "gray_constant": spec.gray_constant}

    records = _run("product-constants", point, alphas, columns, max_workers)
    constants = np.array([r["gray_constant"] for r in records if r["status"] == "ok"], dtype=float)
    steps = np.diff(constants)
    distinct = bool(len(np.unique(constants)) == len(constants))
    monotone = bool(len(constants) < 2 or np.all(steps > 0) or np.all(steps < 0))
    return SweepResult(kind="product-constants", axes={"alpha": "endpoint ratio x / y"},
                       columns=columns, records=records,
                       summary={"distinct": distinct, "monotone": monotone})


SWEEPS = {
    "einstein-count": einstein_count,
    "eta": eta_sweep,
    "eps-s": eps_s_curve,
    "kahler-window": kahler_window,
    "asymmetric-count": asymmetric_count,
    "kahler-count": kahler_count,
    "product-constants": product_constants,
}
