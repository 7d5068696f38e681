"""
性能验证模块：verify 子命令的不变量套件

每个套件在自己的随机流上运行 (seed, 套件编号, 维数)，
输出一行：通过数 / 总数 / 最大误差 / 容差。报告中不含时间戳，同一种子逐字节可复现。
"""

import math
from typing import Callable, Iterable, List, Tuple

import numpy as np
from loguru import logger

from coherence_cost.coherence import (
    coherence,
    contraction_factor,
    is_time_translation_symmetric,
    l1_distance,
    predicted_coherence_after_step,
)
from coherence_cost.collision_channel import PartialSwapChannel, apply, apply_tensor, steps_to_equilibrium
from coherence_cost.ensembles import random_density_matrix, random_hamiltonian
from coherence_cost.gto_stabilizer import verify_proposition1
from coherence_cost.matrix_core import max_abs
from coherence_cost.presets import hamiltonian_preset, state_preset
from coherence_cost.tolerances import active
from coherence_cost.work_cost import work_closed_form, work_cross_term, work_direct
from coherence_types import SuiteResult
from config import ExperimentConfig

BETAS = (0.1, 1.0, 10.0)
THETA_MIN = 0.01
ZERO_LAW_STEPS = 200
EQUILIBRIUM_TRIALS = 20
EQUILIBRIUM_EPS = 1e-6
SYMMETRY_TRIALS = 5

TOL_DUAL_PATH = 1e-12
TOL_CONTRACTION = 1e-12
TOL_ZERO_LAW = 1e-10
TOL_GAUGE = 1e-12
TOL_CROSS = 1e-12
TOL_POSITIVITY = 1e-12
TOL_GIBBS_WORK = 1e-10
TOL_STABILIZATION = 1e-12
TOL_MONOTONICITY = 1e-10


class VerificationFailed(Exception):
    """至少一个验证套件未通过"""

    @property
    def name(self) -> str:
        return type(self).__name__


def _result(suite: str, dim: int, outcomes: Iterable[Tuple[bool, float]], tolerance: float) -> SuiteResult:
    outcomes = list(outcomes)
    passed = sum(1 for ok, _ in outcomes if ok)
    worst = max((err for _, err in outcomes), default=0.0)
    return SuiteResult(
        suite=suite,
        dim=dim,
        passed=passed,
        total=len(outcomes),
        max_error=float(worst),
        tolerance=tolerance,
        status="PASS" if passed == len(outcomes) else "FAIL",
    )


class VerificationSuite:
    """不变量验证"""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.trials = config.trials

    def _rng(self, suite_index: int, dim: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self.config.seed, suite_index, dim]))

    def _machine(self, dim: int, rng: np.random.Generator, theta_min: float = THETA_MIN, betas=BETAS) -> PartialSwapChannel:
        h_s = random_hamiltonian(dim, rng)
        theta = float(rng.uniform(theta_min, math.pi / 2))
        beta = float(rng.choice(betas))
        return PartialSwapChannel(theta=theta, beta=beta, h_s=h_s)

    # ------------------------------------------------------------------ 热化机

    def check_dual_path(self, dim: int) -> SuiteResult:
        """闭式与联合空间两条路径逐元素一致"""
        rng = self._rng(0, dim)
        outcomes = []
        for _ in range(self.trials):
            ch = self._machine(dim, rng)
            rho = random_density_matrix(dim, rng)
            err = max_abs(apply(ch, rho).matrix - apply_tensor(ch, rho).matrix)
            outcomes.append((err <= TOL_DUAL_PATH, err))
        return _result("channel_dual_path", dim, outcomes, TOL_DUAL_PATH)

    def check_zero_law(self, dim: int) -> SuiteResult:
        """D_l1(Φ^n ρ, ρ_β) ≤ cos(θ)^n · D_l1(ρ, ρ_β)，n ≤ 200"""
        rng = self._rng(1, dim)
        outcomes = []
        for _ in range(self.trials):
            ch = self._machine(dim, rng)
            rho = random_density_matrix(dim, rng)
            start = l1_distance(rho, ch.rho_beta, ch.h_s)
            worst = -math.inf
            state = rho
            for n in range(1, ZERO_LAW_STEPS + 1):
                state = apply(ch, state)
                excess = l1_distance(state, ch.rho_beta, ch.h_s) - ch.c ** n * start
                worst = max(worst, excess)
            outcomes.append((worst <= TOL_ZERO_LAW, max(worst, 0.0)))
        return _result("zero_law", dim, outcomes, TOL_ZERO_LAW)

    def check_steps_to_equilibrium(self, dim: int) -> SuiteResult:
        """steps_to_equilibrium 与逐步暴力循环结果完全一致"""
        rng = self._rng(2, dim)
        outcomes = []
        for _ in range(min(self.trials, EQUILIBRIUM_TRIALS)):
            ch = self._machine(dim, rng, theta_min=0.3)
            rho = random_density_matrix(dim, rng)
            brute = 0
            state = rho
            while l1_distance(state, ch.rho_beta, ch.h_s) > EQUILIBRIUM_EPS:
                state = apply(ch, state)
                brute += 1
            fast = steps_to_equilibrium(ch, rho, EQUILIBRIUM_EPS)
            outcomes.append((fast == brute, float(abs(fast - brute))))
        return _result("steps_to_equilibrium", dim, outcomes, 0.0)

    def check_contraction_prediction(self, dim: int) -> SuiteResult:
        """一步后的相干性与逐元素闭式预测一致，且不超过 cos θ · C(ρ)"""
        rng = self._rng(3, dim)
        outcomes = []
        for _ in range(self.trials):
            ch = self._machine(dim, rng)
            rho = random_density_matrix(dim, rng)
            after = coherence(apply(ch, rho), ch.h_s)
            err = max(
                abs(after - predicted_coherence_after_step(ch, rho)),
                after - ch.c * coherence(rho, ch.h_s),
            )
            outcomes.append((err <= TOL_CONTRACTION, max(err, 0.0)))
        return _result("contraction_prediction", dim, outcomes, TOL_CONTRACTION)

    def check_covariance(self, dim: int) -> SuiteResult:
        """热化机与 H_s 的时间平移对易"""
        rng = self._rng(4, dim)
        outcomes = []
        for _ in range(min(self.trials, SYMMETRY_TRIALS)):
            ch = self._machine(dim, rng)
            check = is_time_translation_symmetric(ch, ch.h_s, rng=rng)
            outcomes.append((check.is_symmetric, check.max_deviation))
        return _result("time_translation_symmetry", dim, outcomes, active().tol_symm)

    # ------------------------------------------------------------------ GTO

    def check_proposition(self, dim: int) -> List[SuiteResult]:
        """GTO 稳定化存在 ⟺ 目标态无相干"""
        seed = int(np.random.SeedSequence([self.config.seed, 5, dim]).generate_state(1)[0])
        report = verify_proposition1(dim, self.trials, seed)
        for note in report.notes:
            logger.info(f"dim={dim}: {note}")
        n = report.necessity_total

        def counted(suite: str, passed: int, total: int, error: float, tol: float) -> SuiteResult:
            return SuiteResult(
                suite=suite,
                dim=dim,
                passed=passed,
                total=total,
                max_error=float(error),
                tolerance=tol,
                status="PASS" if passed == total else "FAIL",
            )

        return [
            counted(
                "gto_sufficiency",
                report.sufficiency_passed,
                report.sufficiency_total,
                report.max_stabilization_error,
                TOL_STABILIZATION,
            ),
            counted(
                "contraction_strict",
                report.strict_decrease_count,
                n,
                max(report.max_bound_excess, 0.0),
                TOL_CONTRACTION,
            ),
            counted("gto_monotonicity", n - report.monotonicity_violations, n, 0.0, TOL_MONOTONICITY),
            counted("gto_no_stabilization", n - report.gto_stabilizations, n, 0.0, TOL_STABILIZATION),
            counted(
                "coherent_plan_signature",
                n - report.coherent_plan_failures,
                n,
                report.max_stationarity_norm,
                active().tol_gto,
            ),
        ]

    # ------------------------------------------------------------------ 做功

    def check_work(self, dim: int) -> List[SuiteResult]:
        """做功：直接计算 = 闭式、非负、规范无关、交叉项为零、∝ sin²θ"""
        rng = self._rng(6, dim)
        identity, positivity, gauge, cross, scaling = [], [], [], [], []
        tol_work = active().tol_work
        for _ in range(self.trials):
            ch = self._machine(dim, rng)
            rho = random_density_matrix(dim, rng)
            direct = work_direct(ch, rho)
            closed = work_closed_form(ch, rho)
            err = abs(direct - closed)
            identity.append((err < tol_work, err))
            positivity.append((closed >= -TOL_POSITIVITY, max(-closed, 0.0)))

            shift = float(rng.uniform(-5.0, 5.0))
            g = abs(work_direct(ch, rho, h_r_shift=shift) - direct)
            gauge.append((g < TOL_GAUGE, g))

            x = abs(work_cross_term(ch, rho))
            cross.append((x < TOL_CROSS, x))

            # relative error of W(θ1)/W(θ2) against sin²θ1/sin²θ2
            ch1, ch2 = (
                PartialSwapChannel(theta=float(rng.uniform(0.1, math.pi / 2)), beta=ch.beta, h_s=ch.h_s)
                for _ in range(2)
            )
            expected = ch1.s ** 2 / ch2.s ** 2
            r = abs(work_direct(ch1, rho) / work_direct(ch2, rho) / expected - 1.0)
            scaling.append((r < tol_work, r))

        return [
            _result("work_identity", dim, identity, tol_work),
            _result("work_positivity", dim, positivity, TOL_POSITIVITY),
            _result("work_gauge", dim, gauge, TOL_GAUGE),
            _result("work_cross_term", dim, cross, TOL_CROSS),
            _result("work_scaling", dim, scaling, tol_work),
        ]

    def check_gibbs_work(self, dim: int) -> SuiteResult:
        """目标为 ρ_β 时做功为零"""
        rng = self._rng(7, dim)
        outcomes = []
        for _ in range(self.trials):
            ch = self._machine(dim, rng, betas=(0.1, 1.0))
            w = abs(work_direct(ch, ch.rho_beta))
            outcomes.append((w <= TOL_GIBBS_WORK, w))
        return _result("work_zero_at_gibbs", dim, outcomes, TOL_GIBBS_WORK)

    # ------------------------------------------------------------------ 固定算例

    def check_qubit_fixture(self) -> SuiteResult:
        """H = diag(0,1), β = ln 2, θ = π/4, ρ = |+⟩⟨+| 的收缩因子为 √10/6"""
        h_s = hamiltonian_preset("ladder 2")
        ch = PartialSwapChannel(theta=math.pi / 4, beta=math.log(2.0), h_s=h_s)
        err = abs(contraction_factor(ch, state_preset("qubit-plus")) - math.sqrt(10.0) / 6.0)
        return _result("qubit_contraction_fixture", 2, [(err <= TOL_CONTRACTION, err)], TOL_CONTRACTION)

    # ------------------------------------------------------------------ 汇总

    def run(self) -> List[SuiteResult]:
        """按维数依次运行全部套件"""
        rows: List[SuiteResult] = [self.check_qubit_fixture()]
        per_dim: List[Callable[[int], object]] = [
            self.check_dual_path,
            self.check_zero_law,
            self.check_steps_to_equilibrium,
            self.check_contraction_prediction,
            self.check_covariance,
            self.check_proposition,
            self.check_work,
            self.check_gibbs_work,
        ]
        for dim in self.config.dims:
            for suite in per_dim:
                out = suite(dim)
                rows.extend(out if isinstance(out, list) else [out])

        for row in rows:
            mark = "✅" if row.ok else "❌"
            logger.info(f"{mark} {row.suite} (dim={row.dim}): {row.passed}/{row.total}, 最大误差 {row.max_error:.3e}")
        return rows

    @staticmethod
    def ensure_passed(rows: List[SuiteResult]) -> None:
        """
        Raises:
            VerificationFailed: 存在未通过的套件
        """
        failed = [f"{row.suite}(dim={row.dim})" for row in rows if not row.ok]
        if failed:
            raise VerificationFailed(f"{len(failed)} 个验证套件未通过: {', '.join(failed)}")
