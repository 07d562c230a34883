"""
套件运行器 - 按子命令组织检查，并通过进程池并行处理多个实例
结果按提交顺序收集，报告与线程数无关
"""
import concurrent.futures
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from framelab.check_manager import CheckManager, RunReport
from framelab.clique_homology import (
    clique_complex,
    collapse_doublehat,
    collapse_hat,
    collapsed_clique_complex,
    homology,
)
from framelab.config import Settings
from framelab.errors import InstanceTooLargeError
from framelab.exact_counts import (
    d_count,
    euler_decomp_poset,
    euler_frame,
    euler_nondeg_poset,
    frame_count,
    gu_order,
    identity_suite,
    lines_report,
    points_dim2,
    wedge_count_dim3,
    wedge_identity_check,
)
from framelab.garland_bounds import (
    garland_table,
    is_monotone,
    lambda_min_link,
    p_bound,
    poset_vanishing_prediction,
    q_bound,
    vanishing_prediction,
)
from framelab.hermitian_space import POSITIONS
from framelab.orthogonality_graph import (
    OrthGraph,
    build_graph,
    components,
    diameter,
    eta_formula,
    expected_connectivity,
    l2_spot_check,
    walks_formula,
    walks_table_from_power,
)
from framelab.poset_topology import (
    build_decomp_poset,
    build_doublehat_poset,
    build_hat_poset,
    build_nondeg_poset,
    fiber_check,
    interval_checks,
    poset_betti,
    reduced_euler,
)
from framelab.spectrum import (
    expected_srg,
    laplacian_spectrum,
    multiplicities_rank,
    spectrum_formula,
    srg_parameters,
    trace_identities,
    verify_annihilation,
)

# 已知的约化有理 Betti 数
EXPECTED_BETTI: Dict[Tuple[int, int], Dict[int, int]] = {
    (3, 2): {0: 3, 1: 0},
    (3, 3): {0: 0, 1: 64},
    (4, 2): {0: 0, 1: 81},
    (4, 3): {0: 0, 1: 70, 2: 9114},
}
# 已知的 2-挠个数
EXPECTED_TORSION2: Dict[Tuple[int, int], Dict[int, int]] = {
    (6, 2): {1: 2},
}

QUICK_SUITE: List[Tuple[int, int]] = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)]
FULL_SUITE: List[Tuple[int, int]] = QUICK_SUITE + [(3, 4), (4, 3), (5, 2), (6, 2)]
SUITE_COMMANDS = ["count", "walks", "spectrum", "homology", "garland", "poset"]
# 显式偏序集只在小实例上构建
POSET_SUITE = set(QUICK_SUITE)
# 全套件中同调只算到 2 维的实例：(6,2) 只核对 1 维的 2-挠
SUITE_MAX_DIM: Dict[Tuple[int, int], int] = {(6, 2): 2}
# 坍塌与偏序集 Betti 检查的单形总数上限
COLLAPSE_MAX_SIMPLICES = 200_000
# count 子命令中显式偏序集对照的元素上限
ORACLE_MAX_POSET = 2_000


@dataclass
class CheckOptions:
    """子命令选项"""
    max_dim: Optional[int] = None
    torsion: str = "none"
    euler_decomp: bool = False


def _instance(n: int, q: int) -> Dict[str, int]:
    return {"n": n, "q": q}


def _graph(n: int, q: int, settings: Settings) -> OrthGraph:
    return build_graph(n, q, max_vertices=settings.max_vertices)


def _same_betti(a: Sequence[int], b: Sequence[int]) -> bool:
    """忽略末尾的零后相等"""
    width = max(len(a), len(b))
    return list(a) + [0] * (width - len(a)) == list(b) + [0] * (width - len(b))


def count_checks(m: CheckManager, n: int, q: int, options: CheckOptions, settings: Settings):
    inst = _instance(n, q)
    m.run_check("gu_order", inst, lambda: (True, {"value": gu_order(n, q)}), ref="unitary group order")

    def lines():
        if d_count(n + 1, q) > settings.max_vertices:
            return True, {"formula": d_count(n + 1, q), "oracle": None}
        report = lines_report(n, q)
        ok = report.matches and report.extra["isotropic_formula"] == report.extra["isotropic_oracle"]
        return ok, {"formula": report.formula_value, "oracle": report.oracle_value, **report.extra}
    m.run_check("lines", inst, lines, ref="line and isotropic vector counts")

    if n >= 3:
        def identities():
            results = identity_suite(n, q)
            return all(ok for _, ok in results), dict(results)
        m.run_check("identities", inst, identities, ref="counting identities (i)-(viii)")

    def frames():
        counts = [frame_count(n, q, k) for k in range(n + 1)]
        chi = euler_frame(n, q)
        values: Dict[str, Any] = {"frame_counts": counts, "euler_frame": chi}
        ok = True
        if n == 2:
            values["points"] = points_dim2(q)
            ok = chi == points_dim2(q) - 1
        elif n == 3 and q >= 3:
            values["wedge_count"] = wedge_count_dim3(q)
            ok = chi == -wedge_count_dim3(q)
        if d_count(n + 1, q) <= settings.max_rank_vertices:
            try:
                K = clique_complex(_graph(n, q, settings), max_simplices=settings.max_simplices)
            except InstanceTooLargeError as e:
                logger.debug(f"Skipping frame enumeration: {e}")
                return ok, values
            values["f_vector"] = K.f_vector
            ok = ok and K.f_vector == counts[1:len(K.f_vector) + 1] and K.reduced_euler() == chi
        return ok, values
    m.run_check("frames", inst, frames, ref="frame counts and Euler characteristic of the frame complex")

    def nondeg():
        value = euler_nondeg_poset(n, q)
        values: Dict[str, Any] = {"formula": value}
        try:
            values["oracle"] = reduced_euler(build_nondeg_poset(n, q, min(settings.max_poset, ORACLE_MAX_POSET)))
        except InstanceTooLargeError as e:
            logger.debug(f"Skipping explicit non-degenerate poset: {e}")
        return values.get("oracle", value) == value, values
    m.run_check("euler_nondeg_poset", inst, nondeg, ref="Euler characteristic of the non-degenerate subspace poset")

    if options.euler_decomp:
        def decomp():
            value = euler_decomp_poset(n, q)
            values: Dict[str, Any] = {"formula": value}
            try:
                values["oracle"] = reduced_euler(build_decomp_poset(n, q, max_poset=min(settings.max_poset, ORACLE_MAX_POSET)))
            except InstanceTooLargeError as e:
                logger.debug(f"Skipping explicit decomposition poset: {e}")
            return values.get("oracle", value) == value, values
        m.run_check("euler_decomp_poset", inst, decomp, ref="Euler characteristic of the decomposition poset")


def walks_checks(m: CheckManager, n: int, q: int, options: CheckOptions, settings: Settings):
    inst = _instance(n, q)
    g = _graph(n, q, settings)
    lengths = range(1, 5) if n >= 3 else range(1, 3)
    powers = g.matrix_powers(max(lengths))

    for k in lengths:
        def walks(k=k):
            table = walks_table_from_power(g, powers[k], k)
            values: Dict[str, Any] = {}
            ok = True
            for pos in POSITIONS:
                formula = walks_formula(n, q, k, pos)
                observed = table.values[pos]
                values[pos.value] = {"matrix": observed, "formula": formula}
                ok = ok and (observed == formula if observed is not None else formula == 0)
            return ok, values
        m.run_check(f"walks_l{k}", inst, walks, ref=f"walks of length {k} by position class")

    if n >= 3:
        def etas():
            values: Dict[str, Any] = {}
            ok = True
            for code, pos in enumerate(POSITIONS):
                pairs = np.argwhere(g.positions == code)
                if len(pairs) == 0:
                    continue
                i, j = (int(x) for x in pairs[0])
                observed = g.space.eta_counts(g.vertices[i], g.vertices[j], g.vertices)[1:]
                formula = eta_formula(n, q, pos)
                values[pos.value] = {"enumerated": list(observed), "formula": list(formula)}
                ok = ok and tuple(observed) == formula
            return ok, values
        m.run_check("eta", inst, etas, ref="eta values by position class")

    def connectivity():
        expected = expected_connectivity(n, q)
        comps, diams = components(g), diameter(g)
        return (comps, max(diams)) == expected and len(set(diams)) == 1, {
            "components": comps,
            "diameters": sorted(set(diams)),
            "expected": list(expected),
        }
    m.run_check("connectivity", inst, connectivity, ref="connectivity and diameter of the orthogonality graph")

    def spot():
        pairs = [(0, j) for j in range(1, min(g.num_vertices, 16))]
        return l2_spot_check(g, pairs), {"pairs": len(pairs)}
    m.run_check("l2_spot_check", inst, spot, ref="two-step walks via orthogonal complements")


def spectrum_checks(m: CheckManager, n: int, q: int, options: CheckOptions, settings: Settings):
    inst = _instance(n, q)
    g = _graph(n, q, settings)
    m.run_check("annihilation", inst, lambda: (verify_annihilation(g), {}), ref="minimal polynomial")

    def traces():
        ids = trace_identities(n, q)
        return all(ids.values()), {"spectrum": spectrum_formula(n, q), **ids}
    m.run_check("trace_identities", inst, traces, ref="eigenvalue multiplicities")

    def ranks():
        observed = multiplicities_rank(g, settings.max_rank_vertices)
        expected = spectrum_formula(n, q)
        return observed == expected, {"rank": observed, "formula": expected}
    m.run_check("multiplicities_rank", inst, ranks, ref="eigenvalue multiplicities")

    def laplacian():
        return True, {"laplacian": laplacian_spectrum(n, q)}
    m.run_check("laplacian", inst, laplacian, ref="normalized Laplacian spectrum")

    expected = expected_srg(n, q)
    if expected is not None:
        def srg():
            observed = srg_parameters(g)
            return observed == expected, {"observed": observed, "expected": expected}
        m.run_check("srg", inst, srg, ref="strongly regular parameters for q = 2")


def homology_checks(m: CheckManager, n: int, q: int, options: CheckOptions, settings: Settings):
    inst = _instance(n, q)
    g = _graph(n, q, settings)
    K = collapsed_clique_complex(g, max_dim=options.max_dim, max_simplices=settings.max_simplices)
    torsion_degrees = list(range(0, K.dim)) if options.torsion == "2" else []
    report = homology(K, settings.primes, settings.threads, torsion_degrees=torsion_degrees, snf_max=settings.snf_max)

    def betti_check():
        values: Dict[str, Any] = report.to_dict()
        values["truncated"] = K.truncated
        values["collapse"] = "doublehat" if K.meta.get("doublehat") else "hat" if K.meta.get("hat") else "none"
        ok = K.boundary_squares_zero()
        expected = EXPECTED_BETTI.get((n, q), {})
        for d, b in expected.items():
            if d < len(report.betti):
                ok = ok and report.betti[d] == b
        if not K.truncated:
            chi = euler_frame(n, q)
            values["euler_frame"] = chi
            ok = ok and K.reduced_euler() == chi and report.euler_from_betti == chi
        if n == 3 and q >= 3 and len(report.betti) > 1:
            ok = ok and report.betti[1] == wedge_count_dim3(q)
        return ok, values
    m.run_check("betti", inst, betti_check, ref="homology of the frame complex")

    def soundness():
        predicted = vanishing_prediction(n, q)
        violated = [d for d in predicted.degrees if d < len(report.betti) and report.betti[d] != 0]
        return not violated, {"predicted": predicted.degrees, "violated": violated}
    m.run_check("vanishing_soundness", inst, soundness, ref="predicted vanishing against computed Betti numbers")

    if torsion_degrees:
        def torsion():
            expected = EXPECTED_TORSION2.get((n, q), {})
            ok = all(report.torsion2.get(d) == t for d, t in expected.items() if d in report.torsion2)
            return ok, {"torsion2": report.torsion2}
        m.run_check("torsion2", inst, torsion, ref="2-torsion in integral homology")

    full_size = sum(frame_count(n, q, k) for k in range(1, n + 1))
    if not K.truncated and full_size <= COLLAPSE_MAX_SIMPLICES:
        def collapse():
            raw = clique_complex(g, max_simplices=settings.max_simplices)
            explicit = collapse_doublehat(raw) if q == 2 and raw.dim >= 2 else collapse_hat(raw)
            raw_report = homology(
                raw, settings.primes, settings.threads, torsion_degrees=torsion_degrees, snf_max=settings.snf_max
            )
            ok = explicit.layers == K.layers and raw_report.betti == report.betti
            ok = ok and raw_report.torsion2 == report.torsion2
            return ok, {
                "full_f_vector": raw.f_vector,
                "collapsed_f_vector": K.f_vector,
                "full_betti": raw_report.betti,
            }
        m.run_check("collapse", inst, collapse, ref="elementary collapses of top frames")


def garland_checks(m: CheckManager, n: int, q: int, options: CheckOptions, settings: Settings):
    inst = _instance(n, q)

    def verdicts():
        table = garland_table(n, q)
        ok = True
        for v in table:
            if v.lambda_min is None:
                continue
            # Garland 条件成立当且仅当 Q_n(q, i) > 0
            ok = ok and v.passes == (q_bound(n, q, v.i) > 0)
            if q != 2:
                ok = ok and v.lambda_min == min(x for x in laplacian_spectrum(n - v.i, q) if x > 0)
        return ok, {"verdicts": [v.to_dict() for v in table]}
    m.run_check("garland_verdicts", inst, verdicts, ref="spectral gap of links")

    if (q == 2 and n >= 4) or (q != 2 and n >= 3):
        m.run_check("monotone", inst, lambda: (is_monotone(n, q), {}), ref="monotone Garland bound")

    def prediction():
        pred = vanishing_prediction(n, q)
        bounds = {j: p_bound(j, q) for j in range(3 if q != 2 else 4, n + 1)}
        return True, {**pred.to_dict(), "p_bounds": bounds}
    m.run_check("vanishing_prediction", inst, prediction, ref="homological connectivity of the frame complex")

    if n - 1 >= 2:
        def link_lambda():
            i = 0
            lam = lambda_min_link(n, q, i)
            return lam > 0, {"lambda_min": lam}
        if expected_connectivity(n, q)[0] == 1 and (q != 2 or n >= 4):
            m.run_check("lambda_min_link", inst, link_lambda, ref="spectral gap of links")


def poset_checks(m: CheckManager, n: int, q: int, options: CheckOptions, settings: Settings):
    inst = _instance(n, q)

    def nondeg():
        P = build_nondeg_poset(n, q, settings.max_poset)
        value = reduced_euler(P)
        return value == euler_nondeg_poset(n, q), {"elements": len(P), "euler": value}
    m.run_check("nondeg_poset", inst, nondeg, ref="non-degenerate subspace poset")

    def decomp():
        D = build_decomp_poset(n, q, max_poset=settings.max_poset)
        value = reduced_euler(D)
        return value == euler_decomp_poset(n, q), {"elements": len(D), "euler": value}
    m.run_check("decomp_poset", inst, decomp, ref="decomposition poset")

    def wedge():
        report = wedge_identity_check(n, q, settings.max_poset)
        return report.matches, {"lhs": report.formula_value, "rhs": report.oracle_value}
    m.run_check("wedge_identity", inst, wedge, ref="wedge decomposition of the non-degenerate poset")

    if n >= 2:
        def fibers():
            result = fiber_check(n, q, settings.max_poset)
            return result.ok, {"decompositions": result.decompositions, "chains": result.chains}
        m.run_check("fiber", inst, fibers, ref="fibers of the decomposition map")

        def intervals():
            result = interval_checks(n, q, settings.max_poset)
            return all(result.values()), result
        m.run_check("intervals", inst, intervals, ref="intervals of the decomposition poset")

    def hat():
        if d_count(n + 1, q) > settings.max_rank_vertices:
            raise InstanceTooLargeError(f"{d_count(n + 1, q)} vertices exceed the frame poset cap")
        g = _graph(n, q, settings)
        K = clique_complex(g, max_simplices=settings.max_simplices)
        hat_size = sum(K.f_vector) - (K.f_vector[n - 2] if n >= 2 and len(K.f_vector) > n - 2 else 0)
        if hat_size > settings.max_poset or sum(K.f_vector) > COLLAPSE_MAX_SIMPLICES:
            raise InstanceTooLargeError(f"{hat_size} frames exceed the frame poset cap")
        expected = homology(K, settings.primes, settings.threads).betti
        values: Dict[str, Any] = {"frame_betti": expected}
        hat_betti = poset_betti(build_hat_poset(g), settings.primes, settings.threads)
        values["hat_betti"] = hat_betti
        ok = _same_betti(hat_betti, expected)
        if q == 2 and n >= 3:
            double = poset_betti(build_doublehat_poset(g), settings.primes, settings.threads)
            values["doublehat_betti"] = double
            ok = ok and _same_betti(double, expected)
        return ok, values
    if n >= 2:
        m.run_check("hat_posets", inst, hat, ref="hat posets share the homology of the frame complex")

    def predictions():
        preds = poset_vanishing_prediction(n, q)
        return True, {k: v.to_dict() for k, v in preds.items()}
    m.run_check("poset_prediction", inst, predictions, ref="homological connectivity of the posets")


COMMANDS: Dict[str, Callable[[CheckManager, int, int, CheckOptions, Settings], None]] = {
    "count": count_checks,
    "walks": walks_checks,
    "spectrum": spectrum_checks,
    "homology": homology_checks,
    "garland": garland_checks,
    "poset": poset_checks,
}


def run_instance(command: str, n: int, q: int, options: CheckOptions, settings: Settings) -> RunReport:
    """
    对单个实例运行一个子命令的全部检查

    构建阶段（建图、建复形）的 InstanceTooLargeError 记为一项跳过的检查
    """
    manager = CheckManager(command, {"n": n, "q": q})
    try:
        COMMANDS[command](manager, n, q, options, settings)
    except InstanceTooLargeError as e:
        item = manager.skip(f"{command}_build", _instance(n, q), str(e))
        item.too_large = True
        logger.warning(f"{command} at (n={n}, q={q}) skipped: {e}")
    except Exception as e:
        manager.fail(f"{command}_build", _instance(n, q), f"{type(e).__name__}: {e}")
    return manager.report


def _run_task(task: Tuple[str, int, int, CheckOptions, Settings]) -> RunReport:
    command, n, q, options, settings = task
    logger.info(f"Running {command} at (n={n}, q={q})")
    return run_instance(command, n, q, options, settings)


class SuiteRunner:
    """套件运行器"""

    def __init__(self, settings: Settings):
        self.settings = settings

    def suite_tasks(self, suite: str) -> List[Tuple[str, int, int, CheckOptions, Settings]]:
        if suite not in ("quick", "full"):
            raise ValueError(f"unknown suite {suite!r}")
        instances = QUICK_SUITE if suite == "quick" else FULL_SUITE
        tasks = []
        for n, q in instances:
            for command in SUITE_COMMANDS:
                if command == "poset" and (n, q) not in POSET_SUITE:
                    continue
                options = CheckOptions(max_dim=SUITE_MAX_DIM.get((n, q)))
                if command == "homology" and (n, q) in EXPECTED_TORSION2:
                    options.torsion = "2"
                if command == "count":
                    options.euler_decomp = True
                tasks.append((command, n, q, options, self.settings))
        return tasks

    def process(self, tasks: Sequence[Tuple[str, int, int, CheckOptions, Settings]]) -> List[RunReport]:
        """依次或并行处理任务，结果保持提交顺序"""
        if self.settings.threads <= 1 or len(tasks) <= 1:
            return [_run_task(t) for t in tasks]
        with concurrent.futures.ProcessPoolExecutor(max_workers=self.settings.threads) as pool:
            futures = [pool.submit(_run_task, t) for t in tasks]
            return [f.result() for f in futures]

    def process_suite(self, suite: str) -> RunReport:
        tasks = self.suite_tasks(suite)
        logger.info(f"Processing suite {suite}: {len(tasks)} tasks, {self.settings.threads} workers")
        combined = RunReport("verify-all", {"suite": suite})
        for report in self.process(tasks):
            combined.extend(report)
        info = combined.get_progress_info()
        logger.info(f"Suite {suite} completed: {info}")
        return combined
