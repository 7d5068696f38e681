"""
Seeded random ensembles.

- full-rank states: ``G G^dagger / Tr`` with complex Gaussian ``G``, mixed with a
  floor of ``I/d`` so the smallest eigenvalue stays away from zero
- Hamiltonians: ``(A + A^dagger) / 2`` with complex Gaussian ``A``
- unitaries: Haar measure via ``scipy.stats.unitary_group``
"""

import numpy as np
from scipy.stats import unitary_group

from .coherence import group_eigenvalues
from .matrix_core import SpectralDecomposition, check_factor_dim
from .thermo_states import DensityMatrix, Hamiltonian

DEFAULT_FLOOR = 1e-2


def complex_gaussian(shape, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_density_matrix(d: int, rng: np.random.Generator, floor: float = DEFAULT_FLOOR) -> DensityMatrix:
    """Full-rank random state; every eigenvalue is at least ``floor / d``."""
    d = check_factor_dim(int(d))
    g = complex_gaussian((d, d), rng)
    w = g @ g.conj().T
    w = w / np.trace(w).real
    return DensityMatrix((1.0 - floor) * w + floor * np.eye(d) / d)


def random_hamiltonian(d: int, rng: np.random.Generator, scale: float = 1.0) -> Hamiltonian:
    """Random Hermitian ``scale * (A + A^dagger) / 2``; non-degenerate with probability one."""
    d = check_factor_dim(int(d))
    a = complex_gaussian((d, d), rng)
    return Hamiltonian(scale * (a + a.conj().T) / 2)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``d x d`` unitary (a random phase for d = 1)."""
    if d == 1:
        return np.array([[np.exp(2j * np.pi * rng.uniform())]])
    return np.asarray(unitary_group.rvs(d, random_state=rng), dtype=complex)


def random_probabilities(d: int, rng: np.random.Generator, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    p = rng.dirichlet(np.ones(d))
    return (1.0 - floor) * p + floor / d


def random_block_diagonal_state(
    h: Hamiltonian, rng: np.random.Generator, floor: float = DEFAULT_FLOOR
) -> DensityMatrix:
    """Full-rank state diagonal in the eigenbasis of ``h`` (zero coherence)."""
    p = random_probabilities(h.dim, rng, floor)
    return DensityMatrix(h.spectrum.apply(lambda _: p))


def random_block_unitary(
    spectrum: SpectralDecomposition,
    rng: np.random.Generator,
    monomial: bool = False,
) -> np.ndarray:
    """
    Unitary commuting with the operator whose spectrum is given.

    Haar-random inside every degenerate block of the eigenbasis, zero across
    blocks.

    Args:
        spectrum: Spectral decomposition fixing the block structure
        rng: Random generator
        monomial: Restrict each block to a permutation times phases

    Returns:
        np.ndarray: The unitary in the computational basis
    """
    blocks = group_eigenvalues(spectrum.eigenvalues)
    local = np.zeros((spectrum.dim, spectrum.dim), dtype=complex)
    for block in blocks.blocks:
        idx = np.array(block)
        size = len(block)
        if monomial:
            perm = rng.permutation(size)
            phases = np.exp(2j * np.pi * rng.uniform(size=size))
            piece = np.zeros((size, size), dtype=complex)
            piece[perm, np.arange(size)] = phases
        else:
            piece = random_unitary(size, rng)
        local[np.ix_(idx, idx)] = piece
    return spectrum.from_eigenbasis(local)
