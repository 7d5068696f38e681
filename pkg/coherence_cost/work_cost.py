"""
Work cost of stabilizing a state against the thermalizing machine.

The work done by a plan on system plus resource is the change of their
mean energy,

    W = Tr[(H_s + H_r) U (rho (x) rho_r) U^dagger] - Tr[(H_s + H_r) (rho (x) rho_r)]

evaluated after one collision, rho = Phi_beta(target). For the swap plan with
the effective Hamiltonian as H_r this reduces to

    W = (sin^2 theta / beta) * D_symm(target | rho_beta)

:func:`work_direct` evaluates the first form on the joint space and serves as
the oracle for :func:`work_closed_form`.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np
from loguru import logger

from .coherence import coherence
from .collision_channel import PartialSwapChannel, apply
from .errors import RankDeficient, SupportViolation, WorkDiscrepancy
from .gto_stabilizer import StabilizerPlan, build_block_diagonal_stabilizer, build_coherent_stabilizer
from .matrix_core import commutator, dagger, kron, mat_func, max_abs
from .thermo_states import BetaLike, DensityMatrix, Hamiltonian, as_beta, effective_hamiltonian, gibbs_state, validate_state
from .tolerances import active


def _support_projector(rho: DensityMatrix, eps_rank: float) -> np.ndarray:
    decomp = rho.spectrum
    v = decomp.eigenvectors[:, decomp.eigenvalues > eps_rank]
    return v @ dagger(v)


def relative_entropy(a: DensityMatrix, b: DensityMatrix) -> float:
    """
    ``D(a | b) = Tr[a log a] - Tr[a log b]`` in nats, with ``0 log 0 = 0``.

    Raises:
        SupportViolation: If support(a) is not inside support(b)
    """
    a = validate_state(a)
    b = validate_state(b)
    tol = active()
    pa = _support_projector(a, tol.eps_rank)
    residual = max_abs(pa - _support_projector(b, tol.eps_rank) @ pa)
    if residual > tol.tol_support:
        raise SupportViolation(
            f"support of the first state leaves the support of the second (residual {residual:.3e})",
            measured=residual,
        )

    lam = a.spectrum.eigenvalues
    lam = lam[lam > tol.eps_rank]
    a_log_a = float(np.sum(lam * np.log(lam)))

    mu = b.spectrum.eigenvalues
    keep = mu > tol.eps_rank
    v = b.spectrum.eigenvectors[:, keep]
    weights = np.real(np.einsum("ki,kl,li->i", v.conj(), a.matrix, v))
    a_log_b = float(np.sum(weights * np.log(mu[keep])))
    return a_log_a - a_log_b


def symm_relative_entropy(a: DensityMatrix, b: DensityMatrix) -> float:
    """``D(a | b) + D(b | a)``."""
    return relative_entropy(a, b) + relative_entropy(b, a)


def thermal_symm_relative_entropy(rho: DensityMatrix, h_s: Hamiltonian, beta: BetaLike) -> float:
    """
    ``D_symm(rho | rho_beta)`` with ``log rho_beta = -beta H_s - log Z`` taken from H_s.

    ``log Z`` drops out because both states have unit trace, so the value stays
    finite and accurate when rho_beta has eigenvalues far below eps_rank.

    Raises:
        RankDeficient: If rho is not full rank
    """
    rho = validate_state(rho)
    b = as_beta(beta)
    log_rho = mat_func(rho.matrix, "log", spectrum=rho.spectrum)
    rho_beta = gibbs_state(h_s, b).matrix
    return float(np.real(np.trace((rho.matrix - rho_beta) @ (log_rho + b * h_s.matrix))))


def work_of_plan(plan: StabilizerPlan, rho_in: DensityMatrix) -> float:
    """Mean-energy change of system plus resource when the plan acts on ``rho_in``."""
    rho_in = validate_state(rho_in)
    joint_h = plan.joint_hamiltonian()
    before = kron(rho_in.matrix, plan.rho_r.matrix)
    after = plan.u @ before @ dagger(plan.u)
    return float(np.real(np.trace(joint_h @ (after - before))))


def _require_full_rank(rho: DensityMatrix) -> None:
    eps_rank = active().eps_rank
    if not rho.is_full_rank(eps_rank):
        raise RankDeficient(
            f"target state is rank deficient (eigenvalue {rho.min_eigenvalue:.3e} <= {eps_rank:.1e}); "
            "use --regularize to mix in the maximally mixed state",
            measured=rho.min_eigenvalue,
        )


def work_direct(ch: PartialSwapChannel, rho_target: DensityMatrix, h_r_shift: float = 0.0) -> float:
    """
    Work of one stabilization step by the coherent swap plan, on the joint space.

    Args:
        ch: The thermalizing machine
        rho_target: Full-rank state being kept
        h_r_shift: Constant added to H_r; the result does not depend on it

    Raises:
        RankDeficient: If the target is not full rank
    """
    rho_target = validate_state(rho_target)
    _require_full_rank(rho_target)
    plan = build_coherent_stabilizer(rho_target, ch.beta, ch.h_s)
    if h_r_shift:
        plan = StabilizerPlan(u=plan.u, rho_r=plan.rho_r, h_r=plan.h_r.shifted(h_r_shift), h_s=plan.h_s)
    return work_of_plan(plan, apply(ch, rho_target))


def work_closed_form(ch: PartialSwapChannel, rho_target: DensityMatrix) -> float:
    """
    ``(sin^2 theta / beta) * D_symm(target | rho_beta)``.

    Raises:
        RankDeficient: If the target is not full rank
    """
    rho_target = validate_state(rho_target)
    _require_full_rank(rho_target)
    return ch.s ** 2 / ch.beta * thermal_symm_relative_entropy(rho_target, ch.h_s, ch.beta)


def work_cross_term(ch: PartialSwapChannel, rho_target: DensityMatrix) -> float:
    """
    Contribution of the ``i c s [rho_beta, rho]`` part of one collision to the work.

    Vanishes because H_s commutes with rho_beta and H_r with the target.
    """
    rho_target = validate_state(rho_target)
    h_r = effective_hamiltonian(rho_target, ch.beta)
    drift = -1j * ch.c * ch.s * commutator(ch.rho_beta.matrix, rho_target.matrix)
    return float(np.real(np.trace((ch.h_s.matrix - h_r.matrix) @ drift)))


@dataclass(frozen=True)
class WorkReport:
    """Both work evaluations for one (machine, target) pair."""

    w_direct: float
    w_closed: float
    discrepancy: float
    d_symm: float
    theta: float
    beta: float
    coherence: float
    w_gto_plan: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def work_report(ch: PartialSwapChannel, rho_target: DensityMatrix) -> WorkReport:
    """
    Evaluate the work both ways and compare.

    When the target has no coherence the zero-work GTO plan is evaluated as
    well (``w_gto_plan``); the swap plan still costs ``w_closed`` then.

    Raises:
        RankDeficient: If the target is not full rank
        WorkDiscrepancy: If the two evaluations differ by tol_work or more
    """
    rho_target = validate_state(rho_target)
    tol = active()
    w_direct = work_direct(ch, rho_target)
    d_symm = thermal_symm_relative_entropy(rho_target, ch.h_s, ch.beta)
    w_closed = ch.s ** 2 / ch.beta * d_symm
    discrepancy = abs(w_direct - w_closed)
    if discrepancy >= tol.tol_work:
        raise WorkDiscrepancy(
            f"direct work {w_direct:.12g} and closed form {w_closed:.12g} differ by {discrepancy:.3e}",
            measured=discrepancy,
        )
    amount = coherence(rho_target, ch.h_s)
    w_gto = None
    if amount <= tol.tol_coh:
        plan = build_block_diagonal_stabilizer(rho_target, ch.h_s)
        w_gto = work_of_plan(plan, apply(ch, rho_target))
        logger.debug(f"target without coherence: swap plan costs {w_closed:.6g}, GTO plan {w_gto:.3e}")
    return WorkReport(
        w_direct=w_direct,
        w_closed=w_closed,
        discrepancy=discrepancy,
        d_symm=d_symm,
        theta=ch.theta,
        beta=ch.beta,
        coherence=amount,
        w_gto_plan=w_gto,
    )

