"""
命令行入口 - 构建实例、运行检查并输出报告
用法: python -m framelab.main <子命令> [参数]
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger
from pydantic import ValidationError

from framelab import __version__
from framelab.check_manager import RunReport
from framelab.clique_homology import clique_complex
from framelab.config import Settings, get_settings
from framelab.data_manager import LocalDataManager, render_report
from framelab.errors import FramelabError, InstanceTooLargeError
from framelab.galois_field import field_new
from framelab.orthogonality_graph import build_graph
from framelab.poset_topology import build_decomp_poset, build_nondeg_poset
from framelab.suite_runner import CheckOptions, SuiteRunner, run_instance

INSTANCE_COMMANDS = ["count", "walks", "spectrum", "homology", "garland", "poset"]

# 0 全部通过；1 检查失败；2 参数错误；3 实例过大
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framelab",
        description="Exact checks for orthogonality graphs and frame complexes of finite unitary spaces",
    )
    parser.add_argument("--version", action="version", version=f"framelab {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--refs", action="store_true", help="annotate each check with the result it verifies")
    common.add_argument("--threads", type=int, help="worker pool size (default FRAMELAB_THREADS)")
    common.add_argument("--timings", action="store_true", help="include elapsed seconds per check")

    sub = parser.add_subparsers(dest="command", required=True)
    for name in INSTANCE_COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("n", type=int)
        p.add_argument("q", type=int)
        if name in ("walks", "spectrum", "homology", "poset"):
            p.add_argument("--export", action="store_true", help="write graphs, matrices or posets to the data dir")
        if name == "count":
            p.add_argument("--euler-decomp", action="store_true", help="include the decomposition poset Euler characteristic")
        if name == "homology":
            p.add_argument("--max-dim", type=int, help="build simplices up to this dimension only")
            p.add_argument("--torsion", choices=["none", "2"], default="none")

    suite = sub.add_parser("verify-all", parents=[common])
    suite.add_argument("--suite", choices=["quick", "full"], default="quick")
    return parser


def configure_logging(settings: Settings):
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level)


def export_instance(command: str, n: int, q: int, options: CheckOptions, settings: Settings, dm: LocalDataManager):
    """按子命令导出图、边界矩阵或偏序集"""
    if command in ("walks", "spectrum"):
        g = build_graph(n, q, max_vertices=settings.max_vertices)
        dm.export_edge_list(g)
        dm.export_adjacency(g)
    elif command == "homology":
        g = build_graph(n, q, max_vertices=settings.max_vertices)
        K = clique_complex(g, max_dim=options.max_dim, max_simplices=settings.max_simplices)
        dm.export_simplices(K, f"frames_n{n}_q{q}.txt")
        for k in range(1, K.dim + 1):
            dm.export_boundary(K, k)
    elif command == "poset":
        dm.export_poset(build_nondeg_poset(n, q, settings.max_poset), f"nondeg_n{n}_q{q}.txt")
        dm.export_poset(build_decomp_poset(n, q, max_poset=settings.max_poset), f"decomp_n{n}_q{q}.txt")


def emit(report: RunReport, args: argparse.Namespace):
    text = render_report(report, args.format, include_refs=args.refs, include_timings=args.timings)
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Report written to {path}")
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = get_settings(threads=args.threads)
    except ValidationError as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(settings)

    if args.command == "verify-all":
        report = SuiteRunner(settings).process_suite(args.suite)
        emit(report, args)
        return report.exit_code(size_is_error=False)

    if args.n < 2:
        parser.error(f"n must be at least 2, got {args.n}")
    try:
        field_new(args.q)
    except (FramelabError, ValueError) as e:
        print(f"invalid field parameter: {e}", file=sys.stderr)
        return EXIT_USAGE

    options = CheckOptions(
        max_dim=getattr(args, "max_dim", None),
        torsion=getattr(args, "torsion", "none"),
        euler_decomp=getattr(args, "euler_decomp", False),
    )
    report = run_instance(args.command, args.n, args.q, options, settings)
    if getattr(args, "export", False):
        try:
            export_instance(args.command, args.n, args.q, options, settings, LocalDataManager(settings.data_dir))
        except InstanceTooLargeError as e:
            logger.warning(f"Export skipped: {e}")
    emit(report, args)
    code = report.exit_code(size_is_error=True)
    logger.info(f"{args.command} (n={args.n}, q={args.q}) finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
