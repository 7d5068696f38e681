"""
工具函数模块：态/哈密顿量的加载与结果输出
"""

import io
import json
import sys
from typing import Any, Dict, List, Optional, Sequence, Type

import pandas as pd
from loguru import logger

from coherence_cost.matrix_core import matrix_from_json
from coherence_cost.presets import hamiltonian_preset, is_hamiltonian_preset, is_state_preset, state_preset
from coherence_cost.thermo_states import DensityMatrix, Hamiltonian, regularize
from coherence_types import OutputFormat, ResultRow

CSV_FLOAT_FORMAT = "%.17g"


class FixtureUnreadable(Exception):
    """矩阵文件无法读取或解析"""

    @property
    def name(self) -> str:
        return type(self).__name__


class ResultWriteError(Exception):
    """结果无法写出"""

    @property
    def name(self) -> str:
        return type(self).__name__


def load_matrix_fixture(path: str):
    """
    读取 {"dim": d, "entries": [[re, im], ...]} 格式的矩阵文件

    Args:
        path: JSON 文件路径

    Returns:
        np.ndarray: 复矩阵

    Raises:
        FixtureUnreadable: 文件不存在、不是合法 JSON 或缺少字段
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
        return matrix_from_json(payload)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise FixtureUnreadable(f"无法读取矩阵文件 {path!r}: {e}")


def load_hamiltonian(source: str) -> Hamiltonian:
    """从预设名或矩阵文件加载系统哈密顿量"""
    if is_hamiltonian_preset(source):
        return hamiltonian_preset(source)
    return Hamiltonian(load_matrix_fixture(source))


def load_state(
    source: str,
    h_s: Optional[Hamiltonian] = None,
    beta: Optional[float] = None,
    regularize_eps: Optional[float] = None,
) -> DensityMatrix:
    """
    从预设名或矩阵文件加载态

    Args:
        source: 预设名（如 "qubit-plus"、"gibbs"）或 JSON 文件路径
        h_s: 系统哈密顿量（gibbs 预设需要）
        beta: 逆温度（gibbs 预设需要）
        regularize_eps: 若给出，返回 (1-ε)ρ + ε·I/d

    Returns:
        DensityMatrix: 态
    """
    if is_state_preset(source):
        rho = state_preset(source, h_s=h_s, beta=beta)
    else:
        rho = DensityMatrix(load_matrix_fixture(source))
    if regularize_eps:
        rho = regularize(rho, regularize_eps)
        logger.info(f"态已正则化: ε={regularize_eps}, 最小本征值 {rho.min_eigenvalue:.3e}")
    return rho


def _records(rows: Sequence[Any]) -> List[Dict[str, Any]]:
    return [row.record() if isinstance(row, ResultRow) else dict(row) for row in rows]


def render_results(
    rows: Sequence[Any],
    fmt: OutputFormat,
    row_type: Optional[Type[ResultRow]] = None,
) -> str:
    """
    把记录渲染为 CSV 或 JSON 文本

    CSV 含表头，浮点数保留17位有效数字；空记录只输出表头。
    JSON 为对象数组。相同输入总是得到相同字节。
    """
    records = _records(rows)
    if OutputFormat(fmt) == OutputFormat.JSON:
        return json.dumps(records, indent=2, ensure_ascii=False) + "\n"

    if records:
        columns = list(records[0])
    else:
        columns = row_type.columns() if row_type is not None else []
    for record in records:
        if list(record) != columns:
            raise ValueError(f"记录字段不一致: {list(record)} != {columns}")
    buffer = io.StringIO()
    pd.DataFrame(records, columns=columns).to_csv(
        buffer, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
    )
    return buffer.getvalue()


def emit_results(
    rows: Sequence[Any],
    fmt: OutputFormat,
    path: str,
    row_type: Optional[Type[ResultRow]] = None,
) -> None:
    """
    输出结果到文件或标准输出（path 为 "-"）

    Raises:
        ResultWriteError: 写文件失败
    """
    text = render_results(rows, fmt, row_type)
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise ResultWriteError(f"无法写入结果文件 {path!r}: {e}")
    logger.info(f"✅ 已写出 {len(rows)} 行结果: {path}")
