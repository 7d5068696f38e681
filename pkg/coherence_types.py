"""
数据类型定义
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel


class CommandName(str, Enum):
    """子命令"""
    THERMALIZE = "thermalize"
    STABILIZE = "stabilize"
    WORK_COST = "work-cost"
    COHERENCE = "coherence"
    SWEEP = "sweep"
    VERIFY = "verify"


class OutputFormat(str, Enum):
    """输出格式"""
    CSV = "csv"
    JSON = "json"


class PlanKind(str, Enum):
    """稳定化方案"""
    GTO_SWAP = "gto-swap"
    COHERENT_SWAP = "coherent-swap"


class ResultRow(BaseModel):
    """输出记录基类"""

    def record(self) -> Dict[str, Any]:
        """扁平化为一行（列名 -> 值）"""
        return self.model_dump(mode="json")

    @classmethod
    def columns(cls) -> List[str]:
        return list(cls.model_fields)


class ThermalizeRow(ResultRow):
    """热化路径上的一步"""
    step: int
    distance: float
    coherence: float
    zero_law_bound: float
    populations: List[float]

    def record(self) -> Dict[str, Any]:
        out = self.model_dump(mode="json", exclude={"populations"})
        for i, p in enumerate(self.populations):
            out[f"p_{i}"] = p
        return out

    @classmethod
    def columns(cls) -> List[str]:
        return ["step", "distance", "coherence", "zero_law_bound"]


class StabilizeRow(ResultRow):
    """一次碰撞 + 一次稳定化"""
    step: int
    plan: PlanKind
    distance_before: float
    distance_after: float
    energy_commutator_norm: float
    stationarity_commutator_norm: float
    is_gto: bool
    work: float


class WorkCostRow(ResultRow):
    """做功报告"""
    theta: float
    beta: float
    w_direct: float
    w_closed: float
    discrepancy: float
    d_symm: float
    coherence: float
    w_gto_plan: Optional[float] = None


class CoherenceRow(ResultRow):
    """相干性与能级分块"""
    dim: int
    coherence: float
    block_count: int
    blocks: str
    is_block_diagonal: bool
    contraction_factor: Optional[float] = None
    predicted_after_step: Optional[float] = None


class SweepRow(ResultRow):
    """参数扫描中的一次试验"""
    cell: int
    trial: int
    theta: float
    beta: float
    dim: int
    seed: int
    w_direct: float
    w_closed: float
    discrepancy: float
    d_symm: float
    coherence: float


class SuiteResult(ResultRow):
    """一个验证套件的结果"""
    suite: str
    dim: int
    passed: int
    total: int
    max_error: float
    tolerance: float
    status: str

    @property
    def ok(self) -> bool:
        return self.passed == self.total
