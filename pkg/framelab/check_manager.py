"""
检查管理器 - 负责单次运行中各项检查的执行与记录
支持 run（运行）和 check_item（检查项）的层级结构
"""
import time
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from loguru import logger

from framelab import __version__
from framelab.errors import InstanceTooLargeError


class CheckStatus(Enum):
    """检查项状态"""
    PENDING = "pending"
    PASSED = "pass"
    FAILED = "fail"
    SKIPPED = "skipped"


def stringify(value: Any) -> Any:
    """把报告中的数值统一转成十进制字符串，保留布尔值与 None"""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): stringify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [stringify(v) for v in items]
    if hasattr(value, "to_dict"):
        return stringify(value.to_dict())
    # numpy 标量等
    return str(value)


CheckFn = Callable[[], Tuple[bool, Dict[str, Any]]]


class CheckItem:
    """检查项"""
    def __init__(
        self,
        name: str,
        instance: Dict[str, int],
        ref: str = "",
        status: CheckStatus = CheckStatus.PENDING,
        values: Optional[Dict[str, Any]] = None,
        reason: str = "",
    ):
        self.name = name
        self.instance = instance
        self.ref = ref
        self.status = status
        self.values = values or {}
        self.reason = reason
        self.elapsed: float = 0.0
        # 是否因实例过大而跳过
        self.too_large = False

    def to_dict(self, include_refs: bool = False, include_timings: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "name": self.name,
            "instance": stringify(self.instance),
            "status": self.status.value,
            "values": stringify(self.values),
            "reason": self.reason,
        }
        if include_refs:
            data["ref"] = self.ref
        if include_timings:
            data["elapsed_seconds"] = f"{self.elapsed:.3f}"
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CheckItem":
        item = cls(
            name=data["name"],
            instance={k: int(v) for k, v in data.get("instance", {}).items()},
            ref=data.get("ref", ""),
            status=CheckStatus(data.get("status", "pending")),
            values=data.get("values", {}),
            reason=data.get("reason", ""),
        )
        if "elapsed_seconds" in data:
            item.elapsed = float(data["elapsed_seconds"])
        return item


class RunReport:
    """一次运行的报告"""
    def __init__(self, command: str, parameters: Dict[str, Any], items: Optional[List[CheckItem]] = None):
        self.command = command
        self.parameters = parameters
        self.items = items or []

    def get_progress_info(self) -> Dict[str, int]:
        return {
            "total": len(self.items),
            "passed": sum(1 for i in self.items if i.status == CheckStatus.PASSED),
            "failed": sum(1 for i in self.items if i.status == CheckStatus.FAILED),
            "skipped": sum(1 for i in self.items if i.status == CheckStatus.SKIPPED),
        }

    @property
    def ok(self) -> bool:
        return all(i.status != CheckStatus.FAILED for i in self.items)

    def exit_code(self, size_is_error: bool = True) -> int:
        """
        0 全部通过；1 有检查失败；3 有检查因实例过大被跳过（size_is_error 为 True 时）
        """
        if not self.ok:
            return 1
        if size_is_error and any(i.too_large for i in self.items):
            return 3
        return 0

    def extend(self, other: "RunReport"):
        self.items.extend(other.items)

    def to_dict(self, include_refs: bool = False, include_timings: bool = False) -> Dict[str, Any]:
        return {
            "tool": "framelab",
            "version": __version__,
            "command": self.command,
            "parameters": stringify(self.parameters),
            "summary": stringify(self.get_progress_info()),
            "checks": [i.to_dict(include_refs, include_timings) for i in self.items],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunReport":
        report = cls(data["command"], data.get("parameters", {}))
        for item_data in data.get("checks", []):
            try:
                report.items.append(CheckItem.from_dict(item_data))
            except Exception as e:
                logger.error(f"Failed to load check from report: {e}, item_data: {item_data}")
        return report


class CheckManager:
    """检查管理器：逐项执行检查函数并记录结果，异常不会中断运行"""

    def __init__(self, command: str, parameters: Optional[Dict[str, Any]] = None):
        self.report = RunReport(command, parameters or {})

    def run_check(self, name: str, instance: Dict[str, int], fn: CheckFn, ref: str = "") -> CheckItem:
        """
        执行一项检查

        Args:
            name: 检查名
            instance: 实例参数，如 {"n": 4, "q": 2}
            fn: 返回 (是否通过, 数值字典) 的无参函数
            ref: 结论出处标签

        Returns:
            记录好的检查项
        """
        item = CheckItem(name, instance, ref=ref)
        started = time.perf_counter()
        try:
            ok, values = fn()
            item.values = values
            item.status = CheckStatus.PASSED if ok else CheckStatus.FAILED
            if not ok:
                item.reason = "value mismatch"
                logger.error(f"Check {name} failed at {instance}: {stringify(values)}")
        except InstanceTooLargeError as e:
            item.status = CheckStatus.SKIPPED
            item.too_large = True
            item.reason = str(e)
            logger.warning(f"Check {name} skipped at {instance}: {e}")
        except Exception as e:
            item.status = CheckStatus.FAILED
            item.reason = f"{type(e).__name__}: {e}"
            logger.error(f"Check {name} raised at {instance}: {item.reason}")
        item.elapsed = time.perf_counter() - started
        self.report.items.append(item)
        logger.debug(f"Check {name} at {instance}: {item.status.value} ({item.elapsed:.3f}s)")
        return item

    def skip(self, name: str, instance: Dict[str, int], reason: str, ref: str = "") -> CheckItem:
        item = CheckItem(name, instance, ref=ref, status=CheckStatus.SKIPPED, reason=reason)
        self.report.items.append(item)
        return item

    def fail(self, name: str, instance: Dict[str, int], reason: str, ref: str = "") -> CheckItem:
        item = CheckItem(name, instance, ref=ref, status=CheckStatus.FAILED, reason=reason)
        self.report.items.append(item)
        logger.error(f"Check {name} failed at {instance}: {reason}")
        return item
