"""
Coherence (asymmetry) with respect to a Hamiltonian.

All basis-dependent quantities are evaluated in the canonical eigenbasis of
the reference Hamiltonian: eigenvalues ascending, degenerate eigenvalues
grouped into blocks. Inputs and outputs stay in the computational basis.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, ZeroCoherenceInput
from .matrix_core import as_square, max_abs
from .thermo_states import DensityMatrix, Hamiltonian, validate_state
from .tolerances import active

if TYPE_CHECKING:
    from .collision_channel import PartialSwapChannel

DEFAULT_SAMPLE_TIMES = (0.37, 1.0, 2.5, math.pi)
DEFAULT_SYMMETRY_TRIALS = 20


@dataclass(frozen=True)
class BlockStructure:
    """Partition of eigen-indices into groups of (numerically) equal energy."""

    blocks: Tuple[Tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def is_degenerate(self) -> bool:
        return any(len(b) > 1 for b in self.blocks)

    def labels(self) -> np.ndarray:
        """Block label of every eigen-index."""
        out = np.empty(self.dim, dtype=int)
        for label, block in enumerate(self.blocks):
            out[list(block)] = label
        return out

    def cross_block_mask(self) -> np.ndarray:
        """Boolean mask of entries connecting different blocks."""
        labels = self.labels()
        return labels[:, None] != labels[None, :]


def group_eigenvalues(energies: np.ndarray, eps_degen: Optional[float] = None) -> BlockStructure:
    """
    Group ascending eigenvalues into degenerate blocks.

    An eigenvalue joins the current block when it lies within
    ``eps_degen * spectral_range`` of the block's first eigenvalue, so no block
    spreads wider than the threshold. A flat spectrum is a single block.
    """
    eps_degen = active().eps_degen if eps_degen is None else eps_degen
    energies = np.asarray(energies, dtype=float)
    threshold = eps_degen * float(energies[-1] - energies[0])
    blocks = []
    current = [0]
    for i in range(1, len(energies)):
        spread = energies[i] - energies[current[0]]
        if spread < threshold or spread == 0.0:
            current.append(i)
        else:
            blocks.append(tuple(current))
            current = [i]
    blocks.append(tuple(current))
    return BlockStructure(blocks=tuple(blocks))


def block_structure(h: Hamiltonian, eps_degen: Optional[float] = None) -> BlockStructure:
    """Degenerate blocks of the canonical eigenbasis of ``h``."""
    return group_eigenvalues(h.eigenvalues, eps_degen)


def _check_dims(a: np.ndarray, h: Hamiltonian) -> None:
    if a.shape[0] != h.dim:
        raise DimensionMismatch(f"operator dim {a.shape[0]} does not match Hamiltonian dim {h.dim}")


def _matrix_of(x: Any) -> np.ndarray:
    return x.matrix if isinstance(x, DensityMatrix) else as_square(x)


def in_eigenbasis(m: Any, h: Hamiltonian) -> np.ndarray:
    """Express ``m`` in the canonical eigenbasis of ``h``."""
    m = _matrix_of(m)
    _check_dims(m, h)
    return h.spectrum.to_eigenbasis(m)


def l1_distance(a: Any, b: Any, basis: Hamiltonian) -> float:
    """
    Entrywise l1 distance ``sum_ij |a_ij - b_ij|`` in the eigenbasis of ``basis``.

    Raises:
        DimensionMismatch: If the operands or the basis disagree in dimension
    """
    a = _matrix_of(a)
    b = _matrix_of(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot compare {a.shape[0]}- and {b.shape[0]}-dimensional operators")
    return float(np.sum(np.abs(in_eigenbasis(a - b, basis))))


def dephase(rho: DensityMatrix, h: Hamiltonian) -> DensityMatrix:
    """
    Block-diagonal part of ``rho`` in the eigenbasis of ``h``.

    Entries connecting distinct energy blocks are zeroed; within-block
    entries survive. The map is idempotent and trace preserving.
    """
    rho = validate_state(rho)
    local = in_eigenbasis(rho, h)
    local[block_structure(h).cross_block_mask()] = 0.0
    return DensityMatrix(h.spectrum.from_eigenbasis(local))


def coherence(rho: DensityMatrix, h: Hamiltonian) -> float:
    """
    l1 coherence ``C_H(rho) = D_l1(rho | dephase(rho))``.

    Equal to the sum of the moduli of the cross-block entries of ``rho`` in the
    eigenbasis of ``h``; zero exactly for block-diagonal states.
    """
    rho = validate_state(rho)
    local = in_eigenbasis(rho, h)
    return float(np.sum(np.abs(local[block_structure(h).cross_block_mask()])))


def contraction_factor(ch: "PartialSwapChannel", rho: DensityMatrix) -> float:
    """
    Ratio ``C(Phi_beta(rho)) / C(rho)`` in the eigenbasis of the channel's H_s.

    Bounded by cos(theta).

    Raises:
        ZeroCoherenceInput: If rho carries no coherence (ratio undefined)
    """
    rho = validate_state(rho)
    before = coherence(rho, ch.h_s)
    if before <= active().tol_coh:
        raise ZeroCoherenceInput(f"input coherence {before:.3e} is zero; contraction ratio undefined", measured=before)
    return coherence(ch.apply(rho), ch.h_s) / before


def predicted_coherence_after_step(ch: "PartialSwapChannel", rho: DensityMatrix) -> float:
    """
    Closed-form coherence of ``Phi_beta(rho)``.

    ``sum_{i != j} c |rho_ij| sqrt(c^2 + s^2 (p_i - p_j)^2)`` with ``p`` the
    thermal populations in the H_s eigenbasis.
    """
    rho = validate_state(rho)
    local = in_eigenbasis(rho, ch.h_s)
    p = np.real(np.diag(in_eigenbasis(ch.rho_beta, ch.h_s)))
    gap = p[:, None] - p[None, :]
    factor = ch.c * np.sqrt(ch.c ** 2 + ch.s ** 2 * gap ** 2)
    mask = block_structure(ch.h_s).cross_block_mask()
    return float(np.sum((factor * np.abs(local))[mask]))


@dataclass(frozen=True)
class SymmetryCheck:
    """Outcome of a time-translation covariance test."""

    is_symmetric: bool
    max_deviation: float


def is_time_translation_symmetric(
    channel: Callable[[DensityMatrix], Any],
    h: Hamiltonian,
    sample_times: Sequence[float] = DEFAULT_SAMPLE_TIMES,
    trials: int = DEFAULT_SYMMETRY_TRIALS,
    rng: Optional[np.random.Generator] = None,
    tol_symm: Optional[float] = None,
) -> SymmetryCheck:
    """
    Test ``e^{-iHt} Phi(rho) e^{iHt} == Phi(e^{-iHt} rho e^{iHt})`` on random states.

    Args:
        channel: Map taking a state (DensityMatrix) to a state or a matrix
        h: Hamiltonian generating the time translation
        sample_times: Times t to probe; must not be empty
        trials: Random states per time
        rng: Random generator (seeded with 0 when omitted)
        tol_symm: Accepted deviation (defaults to the active one)

    Returns:
        SymmetryCheck: Verdict and the largest entrywise deviation seen
    """
    from .ensembles import random_density_matrix

    if not sample_times:
        raise ValueError("sample_times must not be empty")
    tol_symm = active().tol_symm if tol_symm is None else tol_symm
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for t in sample_times:
        u = h.spectrum.apply(lambda e: np.exp(-1j * e * t))
        u_dag = u.conj().T
        for _ in range(trials):
            rho = random_density_matrix(h.dim, rng)
            lhs = u @ _matrix_of(channel(rho)) @ u_dag
            rhs = _matrix_of(channel(DensityMatrix(u @ rho.matrix @ u_dag)))
            worst = max(worst, max_abs(lhs - rhs))
    return SymmetryCheck(is_symmetric=worst < tol_symm, max_deviation=worst)
