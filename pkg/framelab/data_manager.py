"""
数据管理器 - 负责报告与导出文件的存储和读取
支持本地文件系统存储
"""
import csv
import io
import json
from pathlib import Path
from typing import Dict, List, Optional

import scipy.io
from loguru import logger
from scipy.sparse import coo_matrix

from framelab.check_manager import RunReport
from framelab.clique_homology import SimComplex
from framelab.orthogonality_graph import OrthGraph
from framelab.poset_topology import FinPoset

CSV_COLUMNS = ["command", "name", "n", "q", "status", "reason", "ref", "values"]


def render_report(
    report: RunReport, fmt: str = "json", include_refs: bool = False, include_timings: bool = False
) -> str:
    """
    把运行报告渲染为文本

    Args:
        report: 运行报告
        fmt: json 或 csv（每项检查一行）
        include_refs: 是否带出处标签
        include_timings: 是否带耗时

    Returns:
        报告文本
    """
    data = report.to_dict(include_refs=include_refs, include_timings=include_timings)
    if fmt == "json":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    columns = CSV_COLUMNS + (["elapsed_seconds"] if include_timings else [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for check in data["checks"]:
        row: Dict[str, str] = {
            "command": data["command"],
            "name": check["name"],
            "n": check["instance"].get("n", ""),
            "q": check["instance"].get("q", ""),
            "status": check["status"],
            "reason": check["reason"],
            "ref": check.get("ref", ""),
            "values": json.dumps(check["values"], ensure_ascii=False, separators=(",", ":")),
        }
        if include_timings:
            row["elapsed_seconds"] = check["elapsed_seconds"]
        writer.writerow(row)
    return buf.getvalue()


class LocalDataManager:
    """本地文件数据管理器"""

    def __init__(self, base_dir: str = "./data"):
        """
        初始化数据管理器

        Args:
            base_dir: 基础存储目录
        """
        self.base_dir = Path(base_dir).resolve()
        self.base_dir.mkdir(parents=True, exist_ok=True)

        self.exports_dir = self.base_dir / "exports"
        self.reports_dir = self.base_dir / "reports"
        for dir_path in [self.exports_dir, self.reports_dir]:
            dir_path.mkdir(parents=True, exist_ok=True)

        logger.debug(f"DataManager initialized with base_dir: {self.base_dir}")

    def _get_path(self, filename: str, subdir: Optional[str] = None) -> Path:
        """获取文件完整路径"""
        if subdir:
            return self.base_dir / subdir / filename
        return self.base_dir / filename

    def save_text(self, text: str, filename: str, subdir: Optional[str] = None) -> str:
        """
        保存文本到文件

        Returns:
            保存的文件路径
        """
        file_path = self._get_path(filename, subdir)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Saved: {file_path}")
        return str(file_path)

    def load_text(self, filename: str, subdir: Optional[str] = None) -> str:
        file_path = self._get_path(filename, subdir)
        if not file_path.exists():
            raise FileNotFoundError(f"File not found: {file_path}")
        with open(file_path, "r", encoding="utf-8") as f:
            return f.read()

    def file_exists(self, filename: str, subdir: Optional[str] = None) -> bool:
        return self._get_path(filename, subdir).exists()

    def list_files(self, subdir: Optional[str] = None) -> List[str]:
        """列出目录下的所有文件（按名称排序）"""
        dir_path = self._get_path("", subdir) if subdir else self.base_dir
        if not dir_path.exists():
            return []
        return sorted(f.name for f in dir_path.iterdir() if f.is_file())

    def save_report(
        self,
        report: RunReport,
        filename: str,
        fmt: str = "json",
        include_refs: bool = False,
        include_timings: bool = False,
    ) -> str:
        """保存运行报告到 reports/"""
        text = render_report(report, fmt, include_refs, include_timings)
        return self.save_text(text, filename, "reports")

    def load_report(self, filename: str) -> RunReport:
        """读取 JSON 报告"""
        return RunReport.from_dict(json.loads(self.load_text(filename, "reports")))

    def export_edge_list(self, g: OrthGraph, filename: Optional[str] = None) -> str:
        name = filename or f"graph_n{g.n}_q{g.q}.edges"
        return self.save_text(g.to_edge_list(), name, "exports")

    def export_adjacency(self, g: OrthGraph, filename: Optional[str] = None) -> str:
        """邻接矩阵（MatrixMarket 坐标格式）"""
        name = filename or f"adjacency_n{g.n}_q{g.q}.mtx"
        path = self._get_path(name, "exports")
        scipy.io.mmwrite(str(path), coo_matrix(g.adjacency.astype(int)), field="integer", symmetry="general")
        logger.info(f"Saved: {path}")
        return str(path)

    def export_boundary(self, K: SimComplex, k: int, filename: Optional[str] = None) -> str:
        """∂_k（MatrixMarket 坐标格式）"""
        tag = "".join(f"_{key}{K.meta[key]}" for key in sorted(K.meta))
        name = filename or f"boundary{tag}_d{k}.mtx"
        path = self._get_path(name, "exports")
        scipy.io.mmwrite(str(path), K.boundary_matrix(k).tocoo(), field="integer")
        logger.info(f"Saved: {path}")
        return str(path)

    def export_simplices(self, K: SimComplex, filename: str) -> str:
        return self.save_text(K.to_text(), filename, "exports")

    def export_poset(self, P: FinPoset, filename: str) -> str:
        return self.save_text(P.to_text(), filename, "exports")
