#!/usr/bin/env python3
"""
配置文件管理器
从环境变量、key=value配置文件和容差覆盖文件读取原始配置
"""

import os
from typing import Dict, Iterable

ENV_PREFIX = "COHERENCE_COST_"
TOL_OVERRIDES_ENV = "COHERENCE_COST_TOL_OVERRIDES"


def get_config_from_env(keys: Iterable[str]) -> Dict[str, str]:
    """从环境变量获取配置（COHERENCE_COST_<KEY>，未设置的键跳过）"""
    config = {}
    for key in keys:
        value = os.getenv(ENV_PREFIX + key.upper())
        if value is not None and value.strip():
            config[key] = value.strip()
    return config


def load_config_file(file_path: str) -> Dict[str, str]:
    """
    从配置文件加载配置

    每行一个 key=value，# 开头为注释，键名不区分大小写，
    连字符等同于下划线（theta-values == theta_values）

    Raises:
        OSError: 文件不存在或不可读
        ValueError: 存在无法解析的行
    """
    config = {}
    with open(file_path, 'r', encoding='utf-8') as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            if '=' not in line:
                raise ValueError(f"{file_path}:{number}: 缺少 '=': {line!r}")
            key, value = line.split('=', 1)
            config[key.strip().lower().replace('-', '_')] = value.strip()
    return config


def load_tolerance_overrides(file_path: str) -> Dict[str, str]:
    """加载容差覆盖文件（与配置文件同格式，键为容差名）"""
    return load_config_file(file_path)


def tolerance_overrides_path() -> str:
    """环境变量 COHERENCE_COST_TOL_OVERRIDES 指向的容差文件（未设置时为空串）"""
    return os.getenv(TOL_OVERRIDES_ENV, "").strip()
