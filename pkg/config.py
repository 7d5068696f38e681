"""
配置管理模块

优先级：默认值 < 环境变量（.env，前缀 COHERENCE_COST_）< --config 配置文件 < 命令行参数
"""

import math
import re
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, Field, ValidationError

from coherence_cost.tolerances import Tolerances
from coherence_types import CommandName, OutputFormat
from config_manager import get_config_from_env, load_config_file, load_tolerance_overrides, tolerance_overrides_path

MAX_REGULARIZE = 0.1
LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")

# k*pi/m, k*ln2/m 以及普通数字
_SYMBOLIC = re.compile(
    r"^(?:(?P<coef>[0-9.]+(?:[eE][+-]?[0-9]+)?)\s*\*\s*)?(?P<atom>pi|π|ln\s*2)(?:\s*/\s*(?P<div>[0-9.]+(?:[eE][+-]?[0-9]+)?))?$"
)


class ConfigInvalid(Exception):
    """配置无效"""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))

    @property
    def name(self) -> str:
        return type(self).__name__


def parse_real(value: Any) -> float:
    """
    解析实数，支持符号常量

    Args:
        value: 数字或字符串，如 "0.3"、"pi/4"、"3*pi/8"、"ln2"、"ln 2"、"2*ln2"

    Returns:
        float: 数值

    Raises:
        ValueError: 无法解析
    """
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().lower()
    match = _SYMBOLIC.match(text)
    if match is None:
        return float(text)
    atom = math.pi if match.group("atom") in ("pi", "π") else math.log(2.0)
    coef = float(match.group("coef")) if match.group("coef") else 1.0
    div = float(match.group("div")) if match.group("div") else 1.0
    if div == 0:
        raise ValueError(f"division by zero in {value!r}")
    return coef * atom / div


def parse_real_list(value: Any) -> List[float]:
    if isinstance(value, (list, tuple)):
        return [parse_real(v) for v in value]
    return [parse_real(v) for v in str(value).split(",") if v.strip()]


def parse_int_list(value: Any) -> List[int]:
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(v) for v in str(value).split(",") if v.strip()]


class SweepGrid(BaseModel):
    """扫描网格"""

    theta_values: List[float] = Field(description="碰撞角 θ 列表")
    beta_values: List[float] = Field(description="逆温度 β 列表")
    dims: List[int] = Field(description="系统维数列表")
    trials_per_cell: int = Field(description="每个网格点的随机试验次数")

    def cells(self) -> List[tuple]:
        """按 (dim, theta, beta) 字典序展开的网格点"""
        return [(d, t, b) for d in self.dims for t in self.theta_values for b in self.beta_values]


class ExperimentConfig(BaseModel):
    """实验配置"""

    # 命令
    command: CommandName = Field(CommandName.THERMALIZE, description="子命令")

    # 物理参数
    state_source: str = Field("qubit-plus", description="态：JSON矩阵文件路径或预设名")
    hamiltonian: str = Field("ladder 2", description="系统哈密顿量 H_s：JSON矩阵文件路径或预设名")
    theta: float = Field(math.pi / 4, description="部分交换角 θ ∈ (0, π/2]")
    beta: float = Field(math.log(2.0), description="逆温度 β > 0")
    steps: int = Field(50, description="碰撞次数")
    eps: float = Field(1e-6, description="到达平衡的 l1 距离阈值")
    regularize: Optional[float] = Field(None, description="与最大混态混合的权重 ε ∈ [0, 0.1]")

    # 随机与批量
    seed: int = Field(0, description="随机种子")
    dims: List[int] = Field([2, 3], description="verify/sweep 的系统维数")
    trials: int = Field(100, description="verify 每个套件的试验次数")
    theta_values: List[float] = Field([math.pi / 8, math.pi / 4, math.pi / 2], description="sweep 的 θ 列表")
    beta_values: List[float] = Field([0.1, 1.0, 10.0], description="sweep 的 β 列表")
    trials_per_cell: int = Field(5, description="sweep 每个网格点的试验次数")

    # 输出
    output: str = Field("-", description="输出文件路径（- 表示标准输出）")
    format: OutputFormat = Field(OutputFormat.CSV, description="输出格式")

    # 日志配置
    log_level: str = Field("INFO", description="日志级别")
    log_file: Optional[str] = Field(None, description="日志文件（按天轮转）")

    # 容差覆盖（键为 Tolerances 字段名）
    tolerance_overrides: Dict[str, str] = Field(default_factory=dict, description="容差覆盖")

    def sweep_grid(self) -> SweepGrid:
        return SweepGrid(
            theta_values=self.theta_values,
            beta_values=self.beta_values,
            dims=self.dims,
            trials_per_cell=self.trials_per_cell,
        )


_KEY_ALIASES = {"state": "state_source", "hamiltonian_source": "hamiltonian"}
_REAL_KEYS = ("theta", "beta", "eps", "regularize")
_REAL_LIST_KEYS = ("theta_values", "beta_values")
_INT_KEYS = ("steps", "seed", "trials", "trials_per_cell")
_INT_LIST_KEYS = ("dims",)
_CONFIG_KEYS = [k for k in ExperimentConfig.model_fields if k != "tolerance_overrides"] + ["state"]


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    if key in _REAL_KEYS:
        return parse_real(value)
    if key in _REAL_LIST_KEYS:
        return parse_real_list(value)
    if key in _INT_KEYS:
        return int(value)
    if key in _INT_LIST_KEYS:
        return parse_int_list(value)
    if key == "log_level":
        return str(value).upper()
    return value


def _merge(target: Dict[str, Any], tolerances: Dict[str, str], source: Dict[str, Any], errors: List[str], origin: str):
    for raw_key, value in source.items():
        if value is None:
            continue
        key = _KEY_ALIASES.get(raw_key, raw_key)
        if key in Tolerances.model_fields:
            tolerances[key] = str(value)
            continue
        if key not in ExperimentConfig.model_fields or key == "tolerance_overrides":
            errors.append(f"{origin}: 未知配置项 {raw_key!r}")
            continue
        try:
            target[key] = _coerce(key, value)
        except ValueError as e:
            errors.append(f"{origin}: {raw_key}={value!r} 无法解析 ({e})")


def load_config(config_file: Optional[str] = None, cli_overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    按优先级合并各来源的配置

    Args:
        config_file: --config 指定的 key=value 文件
        cli_overrides: 命令行参数（值为 None 的键视为未指定）

    Returns:
        ExperimentConfig: 配置对象

    Raises:
        ConfigInvalid: 文件不可读、键未知、值无法解析或类型错误
    """
    # 加载.env文件
    load_dotenv()

    values: Dict[str, Any] = {}
    tolerances: Dict[str, str] = {}
    errors: List[str] = []

    _merge(values, tolerances, get_config_from_env(_CONFIG_KEYS), errors, "环境变量")

    if config_file:
        try:
            file_values = load_config_file(config_file)
        except (OSError, ValueError) as e:
            raise ConfigInvalid([f"配置文件读取失败: {e}"])
        _merge(values, tolerances, file_values, errors, config_file)

    overrides = dict(cli_overrides or {})
    tolerances.update(overrides.pop("tolerance_overrides", None) or {})
    _merge(values, tolerances, overrides, errors, "命令行")

    if errors:
        raise ConfigInvalid(errors)

    try:
        config = ExperimentConfig(**values, tolerance_overrides=tolerances)
    except ValidationError as e:
        raise ConfigInvalid([f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()])

    logger.debug(f"配置加载成功: command={config.command.value}, state={config.state_source}, H_s={config.hamiltonian}")
    return config


def validate_config(config: ExperimentConfig) -> bool:
    """
    验证配置

    Args:
        config: 配置对象

    Returns:
        bool: 验证是否通过
    """
    errors = []

    if not (0.0 < config.theta <= math.pi / 2):
        errors.append(f"theta 必须在 (0, π/2] 内，当前 {config.theta}")

    if not (math.isfinite(config.beta) and config.beta > 0):
        errors.append(f"beta 必须为正有限数，当前 {config.beta}")

    if config.steps < 0:
        errors.append(f"steps 不能为负，当前 {config.steps}")

    if not config.eps > 0:
        errors.append(f"eps 必须大于0，当前 {config.eps}")

    if config.regularize is not None and not (0.0 <= config.regularize <= MAX_REGULARIZE):
        errors.append(f"regularize 必须在 [0, {MAX_REGULARIZE}] 内，当前 {config.regularize}")

    if config.seed < 0:
        errors.append(f"seed 不能为负，当前 {config.seed}")

    if config.trials < 1:
        errors.append("trials 必须至少为1")

    # 扫描网格
    if not config.theta_values:
        errors.append("theta_values 不能为空")
    if not config.beta_values:
        errors.append("beta_values 不能为空")
    if not config.dims:
        errors.append("dims 不能为空")
    for t in config.theta_values:
        if not (0.0 < t <= math.pi / 2):
            errors.append(f"theta_values 中的 {t} 不在 (0, π/2] 内")
    for b in config.beta_values:
        if not (math.isfinite(b) and b > 0):
            errors.append(f"beta_values 中的 {b} 不是正有限数")
    for d in config.dims:
        if d < 1:
            errors.append(f"dims 中的 {d} 不是正整数")
    if config.command == CommandName.VERIFY:
        for d in config.dims:
            if not 2 <= d <= 5:
                errors.append(f"verify 的维数必须在 2..5 内，当前 {d}")
    if config.trials_per_cell < 1:
        errors.append("trials_per_cell 必须至少为1")

    if config.log_level not in LOG_LEVELS:
        errors.append(f"未知日志级别 {config.log_level}")

    if errors:
        for error in errors:
            logger.error(f"配置验证失败: {error}")
        return False

    logger.debug("配置验证通过")
    return True


def resolve_tolerances(config: ExperimentConfig) -> Tolerances:
    """
    合并容差：默认值 < COHERENCE_COST_TOL_OVERRIDES 文件 < 配置文件/命令行

    Raises:
        ConfigInvalid: 容差文件不可读，或容差名未知、取值非法
    """
    merged: Dict[str, str] = {}
    path = tolerance_overrides_path()
    if path:
        try:
            merged.update(load_tolerance_overrides(path))
        except (OSError, ValueError) as e:
            raise ConfigInvalid([f"容差文件读取失败: {e}"])
    merged.update(config.tolerance_overrides)

    try:
        tolerances = Tolerances(**merged)
    except ValidationError as e:
        raise ConfigInvalid([f"容差 {'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()])

    if merged:
        logger.info(f"容差覆盖: {', '.join(f'{k}={v}' for k, v in sorted(merged.items()))}")
    return tolerances
