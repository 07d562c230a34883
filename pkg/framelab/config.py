"""
配置 - 从环境变量读取运行参数
环境变量优先级低于命令行参数（通过 get_settings 的 overrides 传入）
"""
import os
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy import isprime, prevprime

# 环境变量名 -> Settings 字段
ENV_FIELDS = {
    "FRAMELAB_THREADS": "threads",
    "FRAMELAB_PRIMES": "primes",
    "FRAMELAB_MAX_SIMPLICES": "max_simplices",
    "FRAMELAB_MAX_VERTICES": "max_vertices",
    "FRAMELAB_MAX_RANK_VERTICES": "max_rank_vertices",
    "FRAMELAB_SNF_MAX": "snf_max",
    "FRAMELAB_MAX_POSET": "max_poset",
    "FRAMELAB_DATA_DIR": "data_dir",
    "FRAMELAB_LOG_LEVEL": "log_level",
}


def _default_primes() -> Tuple[int, int]:
    """2^62 以下最大的两个素数"""
    p1 = int(prevprime(2 ** 62))
    p2 = int(prevprime(p1))
    return (p1, p2)


class Settings(BaseModel):
    """运行配置"""
    model_config = ConfigDict(frozen=True)

    threads: int = Field(default=1, ge=1)
    primes: Tuple[int, ...] = Field(default_factory=_default_primes)
    max_simplices: int = Field(default=2_000_000, ge=1)
    max_vertices: int = Field(default=100_000, ge=1)
    max_rank_vertices: int = Field(default=700, ge=1)
    snf_max: int = Field(default=60, ge=0)
    max_poset: int = Field(default=20_000, ge=1)
    data_dir: str = "./data"
    log_level: str = "INFO"

    @field_validator("primes", mode="before")
    @classmethod
    def _parse_primes(cls, value: Any) -> Tuple[int, ...]:
        if isinstance(value, str):
            value = [part.strip() for part in value.split(",") if part.strip()]
        primes = tuple(int(p) for p in value)
        if len(primes) < 2:
            raise ValueError("at least two primes are required")
        if len(set(primes)) != len(primes):
            raise ValueError(f"primes must be distinct: {primes}")
        for p in primes:
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
        return primes

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        return value.upper()


def get_settings(**overrides: Optional[Any]) -> Settings:
    """
    从环境变量构建配置

    Args:
        overrides: 命令行覆盖项，值为 None 的项忽略

    Returns:
        Settings 实例
    """
    values: Dict[str, Any] = {}
    for env_name, field_name in ENV_FIELDS.items():
        raw = os.getenv(env_name)
        if raw is not None and raw != "":
            values[field_name] = raw
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    return Settings(**values)
