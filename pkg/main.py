#!/usr/bin/env python3
"""
coherence-cost 命令行主程序

用法:
    coherence-cost <command> [--theta --beta --steps --eps --seed --state --output --format --regularize ...]

退出码: 0 成功, 2 配置错误, 3 数值前提不成立/文件错误, 4 验证套件失败
"""

import argparse
import asyncio
import sys
from typing import Any, Dict, List, Optional

from loguru import logger

from coherence_cost.errors import NumericalPreconditionError
from coherence_cost.tolerances import configure
from coherence_types import (
    CoherenceRow,
    CommandName,
    OutputFormat,
    StabilizeRow,
    SuiteResult,
    SweepRow,
    ThermalizeRow,
    WorkCostRow,
)
from config import ConfigInvalid, ExperimentConfig, load_config, resolve_tolerances, validate_config
from experiments import ExperimentRunner
from utils import FixtureUnreadable, ResultWriteError, emit_results
from verification import VerificationFailed, VerificationSuite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VERIFICATION = 4

ROW_TYPES = {
    CommandName.THERMALIZE: ThermalizeRow,
    CommandName.STABILIZE: StabilizeRow,
    CommandName.WORK_COST: WorkCostRow,
    CommandName.COHERENCE: CoherenceRow,
    CommandName.SWEEP: SweepRow,
    CommandName.VERIFY: SuiteResult,
}


def setup_logging(level: str = "INFO", log_file: Optional[str] = None):
    """设置日志：诊断信息只写 stderr（和可选的日志文件），结果数据走 stdout/输出文件"""
    logger.remove()  # 移除默认处理器

    # 添加控制台输出
    logger.add(
        sys.stderr,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        level=level,
    )

    # 添加文件输出
    if log_file:
        logger.add(
            log_file,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            level="DEBUG",
            rotation="1 day",
            retention="30 days",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coherence-cost",
        description="碰撞模型热化、相干性与维持相干所需做功的数值实验",
    )
    parser.add_argument("command", choices=[c.value for c in CommandName], help="子命令")
    parser.add_argument("--config", help="key=value 配置文件")
    parser.add_argument("--state", dest="state_source", help="态：预设名或 JSON 矩阵文件")
    parser.add_argument("--hamiltonian", help="系统哈密顿量：预设名或 JSON 矩阵文件")
    parser.add_argument("--theta", help="部分交换角（可写 pi/4）")
    parser.add_argument("--beta", help="逆温度（可写 ln2）")
    parser.add_argument("--steps", help="碰撞次数")
    parser.add_argument("--eps", help="平衡距离阈值")
    parser.add_argument("--seed", help="随机种子")
    parser.add_argument("--regularize", help="与 I/d 混合的权重 ε ∈ [0, 0.1]")
    parser.add_argument("--output", help="输出文件（- 为标准输出）")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], help="输出格式")
    parser.add_argument("--dims", help="维数列表，如 2,3")
    parser.add_argument("--trials", help="verify 每套件试验数")
    parser.add_argument("--theta-values", dest="theta_values", help="sweep 的 θ 列表")
    parser.add_argument("--beta-values", dest="beta_values", help="sweep 的 β 列表")
    parser.add_argument("--trials-per-cell", dest="trials_per_cell", help="sweep 每格试验数")
    parser.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE", help="容差覆盖，可重复")
    parser.add_argument("--log-level", dest="log_level", help="日志级别")
    parser.add_argument("--log-file", dest="log_file", help="日志文件")
    return parser


def _cli_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides = {k: v for k, v in vars(args).items() if k not in ("config", "tol") and v is not None}
    tolerances = {}
    for item in args.tol:
        if "=" not in item:
            raise ConfigInvalid([f"--tol 需要 KEY=VALUE 格式: {item!r}"])
        key, value = item.split("=", 1)
        tolerances[key.strip()] = value.strip()
    overrides["tolerance_overrides"] = tolerances
    return overrides


def dispatch(config: ExperimentConfig) -> List[Any]:
    """执行子命令并返回输出记录"""
    command = config.command
    if command == CommandName.VERIFY:
        return VerificationSuite(config).run()
    runner = ExperimentRunner(config)
    if command == CommandName.THERMALIZE:
        return runner.thermalize()
    if command == CommandName.STABILIZE:
        return runner.stabilize()
    if command == CommandName.WORK_COST:
        return runner.work_cost()
    if command == CommandName.COHERENCE:
        return runner.measure_coherence()
    return asyncio.run(runner.sweep())


def run(config: ExperimentConfig) -> int:
    """
    执行一次实验

    Args:
        config: 已加载的配置

    Returns:
        int: 退出码
    """
    previous = None
    try:
        if not validate_config(config):
            raise ConfigInvalid(["配置验证失败"])
        previous = configure(resolve_tolerances(config))

        rows = dispatch(config)
        emit_results(rows, config.format, config.output, row_type=ROW_TYPES[config.command])

        if config.command == CommandName.VERIFY:
            VerificationSuite.ensure_passed(rows)
        return EXIT_OK

    except ConfigInvalid as e:
        logger.error(f"{e.name}: {e}")
        return EXIT_CONFIG
    except VerificationFailed as e:
        logger.error(f"{e.name}: {e}")
        return EXIT_VERIFICATION
    except NumericalPreconditionError as e:
        measured = f" (measured {e.measured:.6g})" if e.measured is not None else ""
        logger.error(f"{e.name}: {e.message}{measured}")
        return EXIT_NUMERICAL
    except (FixtureUnreadable, ResultWriteError) as e:
        logger.error(f"{e.name}: {e}")
        return EXIT_NUMERICAL
    finally:
        if previous is not None:
            configure(previous)


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    args = build_parser().parse_args(argv)
    setup_logging()
    try:
        config = load_config(args.config, _cli_overrides(args))
    except ConfigInvalid as e:
        for error in e.errors:
            logger.error(f"ConfigInvalid: {error}")
        return EXIT_CONFIG
    setup_logging(config.log_level, config.log_file)
    return run(config)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("程序被用户中断")
        sys.exit(130)
