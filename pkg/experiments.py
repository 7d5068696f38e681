"""
实验执行模块

每个子命令对应 ExperimentRunner 的一个方法，返回输出记录列表。
sweep 的各网格点并发执行，每个网格点拥有由 (seed, 网格编号) 派生的独立随机流，
结果按网格编号排序输出。
"""

import asyncio
from typing import List, Tuple

import numpy as np
from loguru import logger

from coherence_cost.coherence import (
    block_structure,
    coherence,
    contraction_factor,
    in_eigenbasis,
    l1_distance,
    predicted_coherence_after_step,
)
from coherence_cost.collision_channel import PartialSwapChannel, apply, iterate, steps_to_equilibrium, zero_law_bound
from coherence_cost.ensembles import random_density_matrix, random_hamiltonian
from coherence_cost.errors import DimensionMismatch, MaxStepsExceeded
from coherence_cost.gto_stabilizer import (
    StabilizerPlan,
    apply_plan,
    build_block_diagonal_stabilizer,
    build_coherent_stabilizer,
    check_gto,
)
from coherence_cost.thermo_states import DensityMatrix, Hamiltonian
from coherence_cost.tolerances import active
from coherence_cost.work_cost import work_of_plan, work_report
from coherence_types import (
    CoherenceRow,
    PlanKind,
    StabilizeRow,
    SweepRow,
    ThermalizeRow,
    WorkCostRow,
)
from config import ExperimentConfig
from utils import load_hamiltonian, load_state


class ExperimentRunner:
    """实验执行器"""

    def __init__(self, config: ExperimentConfig):
        self.config = config

    # ------------------------------------------------------------------ 输入

    def _system(self) -> Tuple[Hamiltonian, DensityMatrix]:
        """加载 H_s 与态，并检查维数一致"""
        h_s = load_hamiltonian(self.config.hamiltonian)
        rho = load_state(self.config.state_source, h_s=h_s, beta=self.config.beta, regularize_eps=self.config.regularize)
        if rho.dim != h_s.dim:
            raise DimensionMismatch(
                f"态的维数 {rho.dim} 与哈密顿量 {self.config.hamiltonian!r} 的维数 {h_s.dim} 不一致"
            )
        return h_s, rho

    def _channel(self, h_s: Hamiltonian) -> PartialSwapChannel:
        return PartialSwapChannel(theta=self.config.theta, beta=self.config.beta, h_s=h_s)

    # ------------------------------------------------------------------ 子命令

    def thermalize(self) -> List[ThermalizeRow]:
        """热化路径：每步到 ρ_β 的 l1 距离、相干性、零律上界和本征基下的布居"""
        h_s, rho = self._system()
        ch = self._channel(h_s)
        path = iterate(ch, rho, self.config.steps)

        rows = []
        for n, state in enumerate(path.states):
            populations = np.real(np.diag(in_eigenbasis(state, h_s)))
            rows.append(
                ThermalizeRow(
                    step=n,
                    distance=float(path.distances[n]),
                    coherence=float(path.coherences[n]),
                    zero_law_bound=zero_law_bound(ch, rho, n),
                    populations=[float(p) for p in populations],
                )
            )

        try:
            needed = steps_to_equilibrium(ch, rho, self.config.eps)
            logger.info(f"距离 ρ_β 不超过 {self.config.eps:g} 需要 {needed} 次碰撞")
        except MaxStepsExceeded as e:
            logger.warning(f"未能在步数上限内平衡: {e}")
        return rows

    def stabilize(self) -> List[StabilizeRow]:
        """
        热化 + 稳定化交替进行

        目标态无相干时用 GTO 交换方案（H_r = H_s），否则用有效哈密顿量的交换方案。
        """
        h_s, target = self._system()
        ch = self._channel(h_s)

        if coherence(target, h_s) <= active().tol_coh:
            plan: StabilizerPlan = build_block_diagonal_stabilizer(target, h_s)
            kind = PlanKind.GTO_SWAP
        else:
            plan = build_coherent_stabilizer(target, ch.beta, h_s)
            kind = PlanKind.COHERENT_SWAP
        diagnostics = check_gto(plan)
        logger.info(
            f"稳定化方案 {kind.value}: [U, H] = {diagnostics.energy_commutator_norm:.3e}, "
            f"[ρ_r, H_r] = {diagnostics.stationarity_commutator_norm:.3e}, GTO = {diagnostics.is_gto}"
        )

        rows = []
        rho = target
        for n in range(1, self.config.steps + 1):
            thermalized = apply(ch, rho)
            work = work_of_plan(plan, thermalized)
            rho = apply_plan(plan, thermalized)
            rows.append(
                StabilizeRow(
                    step=n,
                    plan=kind,
                    distance_before=l1_distance(thermalized, target, h_s),
                    distance_after=l1_distance(rho, target, h_s),
                    energy_commutator_norm=diagnostics.energy_commutator_norm,
                    stationarity_commutator_norm=diagnostics.stationarity_commutator_norm,
                    is_gto=bool(diagnostics.is_gto),
                    work=work,
                )
            )
        return rows

    def work_cost(self) -> List[WorkCostRow]:
        """一次稳定化的做功（联合空间直接计算与闭式对照）"""
        h_s, target = self._system()
        report = work_report(self._channel(h_s), target)
        logger.info(f"W = {report.w_closed:.12g}（偏差 {report.discrepancy:.3e}）")
        return [WorkCostRow(**report.to_dict())]

    def measure_coherence(self) -> List[CoherenceRow]:
        """相干性、能级分块，以及一次碰撞后的收缩"""
        h_s, rho = self._system()
        blocks = block_structure(h_s)
        amount = coherence(rho, h_s)
        row = CoherenceRow(
            dim=rho.dim,
            coherence=amount,
            block_count=len(blocks.blocks),
            blocks="|".join(" ".join(str(i) for i in block) for block in blocks.blocks),
            is_block_diagonal=amount <= active().tol_coh,
        )
        if not row.is_block_diagonal:
            ch = self._channel(h_s)
            row.contraction_factor = contraction_factor(ch, rho)
            row.predicted_after_step = predicted_coherence_after_step(ch, rho)
        return [row]

    # ------------------------------------------------------------------ 扫描

    def _sweep_cell(self, cell: int, dim: int, theta: float, beta: float) -> List[SweepRow]:
        rng = np.random.default_rng(np.random.SeedSequence([self.config.seed, cell]))
        rows = []
        for trial in range(self.config.trials_per_cell):
            h_s = random_hamiltonian(dim, rng)
            rho = random_density_matrix(dim, rng)
            report = work_report(PartialSwapChannel(theta=theta, beta=beta, h_s=h_s), rho)
            rows.append(
                SweepRow(
                    cell=cell,
                    trial=trial,
                    theta=theta,
                    beta=beta,
                    dim=dim,
                    seed=self.config.seed,
                    w_direct=report.w_direct,
                    w_closed=report.w_closed,
                    discrepancy=report.discrepancy,
                    d_symm=report.d_symm,
                    coherence=report.coherence,
                )
            )
        return rows

    async def sweep(self) -> List[SweepRow]:
        """(dim, θ, β) 网格上的做功扫描"""
        cells = self.config.sweep_grid().cells()
        logger.info(f"扫描 {len(cells)} 个网格点，每点 {self.config.trials_per_cell} 次试验")
        tasks = [
            asyncio.to_thread(self._sweep_cell, index, dim, theta, beta)
            for index, (dim, theta, beta) in enumerate(cells)
        ]
        results = await asyncio.gather(*tasks)
        rows = [row for cell_rows in results for row in cell_rows]
        worst = max((row.discrepancy for row in rows), default=0.0)
        logger.info(f"扫描完成: {len(rows)} 行, 最大偏差 {worst:.3e}")
        return rows
