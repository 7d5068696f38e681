"""
Quantum states, Hamiltonians and Gibbs states.

``DensityMatrix`` and ``Hamiltonian`` validate on construction and cache their
spectral decomposition; both are immutable and safe to share across threads.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Union

import numpy as np

from .errors import InvalidParameter, NotHermitian, NotPSD, RankDeficient, TraceNotOne
from .matrix_core import (
    SpectralDecomposition,
    as_square,
    check_factor_dim,
    commutator,
    eigh,
    freeze,
    hermiticity_violation,
    max_abs,
)
from .tolerances import active


@dataclass(frozen=True)
class InverseTemperature:
    """Inverse temperature beta (1/energy, natural units)."""

    beta: float

    def __post_init__(self):
        beta = float(self.beta)
        if not math.isfinite(beta) or beta <= 0:
            raise InvalidParameter(f"beta must be positive and finite, got {self.beta}", measured=beta)
        object.__setattr__(self, "beta", beta)

    def __float__(self) -> float:
        return self.beta


BetaLike = Union[float, int, InverseTemperature]


def as_beta(beta: BetaLike) -> float:
    """Validate and unwrap an inverse temperature."""
    if isinstance(beta, InverseTemperature):
        return beta.beta
    return InverseTemperature(beta).beta


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Hermitian operator with its cached ascending spectrum."""

    matrix: np.ndarray
    spectrum: SpectralDecomposition = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = as_square(self.matrix, "hamiltonian")
        check_factor_dim(m.shape[0], "hamiltonian dim")
        spectrum = eigh(m)
        # keep the Hermitian part only; the anti-Hermitian residue is below tol_herm
        object.__setattr__(self, "matrix", freeze((m + m.conj().T) / 2))
        object.__setattr__(self, "spectrum", spectrum)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    def shifted(self, offset: float) -> "Hamiltonian":
        """Return ``H + offset * I``."""
        return Hamiltonian(self.matrix + offset * np.eye(self.dim))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Hermitian, positive semi-definite, unit-trace operator.

    Construction raises NotHermitian, TraceNotOne or NotPSD with the measured
    violation when an invariant fails.
    """

    matrix: np.ndarray
    spectrum: SpectralDecomposition = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tol = active()
        m = as_square(self.matrix, "state")
        check_factor_dim(m.shape[0], "state dim")
        violation = hermiticity_violation(m)
        if violation > tol.tol_herm:
            raise NotHermitian(f"state is not Hermitian (max |rho - rho^dagger| = {violation:.3e})", measured=violation)
        trace = float(np.trace(m).real)
        if abs(trace - 1.0) > tol.tol_trace:
            raise TraceNotOne(f"state trace is {trace:.12g}, expected 1", measured=trace)
        spectrum = eigh(m)
        smallest = float(spectrum.eigenvalues[0])
        if smallest < -tol.tol_psd:
            raise NotPSD(f"state has negative eigenvalue {smallest:.6g}", measured=smallest)
        object.__setattr__(self, "matrix", freeze((m + m.conj().T) / 2))
        object.__setattr__(self, "spectrum", spectrum)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def min_eigenvalue(self) -> float:
        return float(self.spectrum.eigenvalues[0])

    def is_full_rank(self, eps_rank: Optional[float] = None) -> bool:
        eps_rank = active().eps_rank if eps_rank is None else eps_rank
        return self.min_eigenvalue > eps_rank


def validate_state(m: Any) -> DensityMatrix:
    """
    Check the density-matrix invariants of ``m``.

    Args:
        m: Candidate matrix

    Returns:
        DensityMatrix: The validated state

    Raises:
        NotHermitian: Hermiticity violated beyond tol_herm
        TraceNotOne: |Tr - 1| beyond tol_trace
        NotPSD: Eigenvalue below -tol_psd
    """
    if isinstance(m, DensityMatrix):
        return m
    return DensityMatrix(m)


def partition_function(h: Hamiltonian, beta: BetaLike) -> float:
    """``Tr exp(-beta H)``."""
    b = as_beta(beta)
    return float(np.sum(np.exp(-b * h.eigenvalues)))


def gibbs_state(h: Hamiltonian, beta: BetaLike) -> DensityMatrix:
    """
    Thermal state ``exp(-beta H) / Z``.

    Computed from the cached spectrum with the ground energy factored out, so
    large beta does not underflow the normalization.
    """
    b = as_beta(beta)
    energies = h.eigenvalues
    weights = np.exp(-b * (energies - energies[0]))
    weights = weights / np.sum(weights)
    return DensityMatrix(h.spectrum.apply(lambda _: weights))


def effective_hamiltonian(rho: DensityMatrix, beta: BetaLike) -> Hamiltonian:
    """
    Resource Hamiltonian whose Gibbs state at ``beta`` is ``rho``.

    Gauge: ``H_r = -(1/beta) log rho`` shifted so its ground eigenvalue is 0.
    Any constant shift describes the same Gibbs state and the same work.

    Args:
        rho: Full-rank target state
        beta: Inverse temperature

    Returns:
        Hamiltonian: H_r, commuting with rho

    Raises:
        RankDeficient: If rho has an eigenvalue <= eps_rank
    """
    b = as_beta(beta)
    rho = validate_state(rho)
    eps_rank = active().eps_rank
    smallest = rho.min_eigenvalue
    if smallest <= eps_rank:
        raise RankDeficient(
            f"target state is rank deficient (eigenvalue {smallest:.3e} <= {eps_rank:.1e}); "
            "use --regularize to mix in the maximally mixed state",
            measured=smallest,
        )
    energies = -np.log(rho.spectrum.eigenvalues) / b
    energies = energies - np.min(energies)
    return Hamiltonian(rho.spectrum.apply(lambda _: energies))


def regularize(rho: DensityMatrix, eps: float) -> DensityMatrix:
    """Mix ``rho`` with the maximally mixed state: ``(1 - eps) rho + eps I/d``."""
    if not 0.0 <= eps <= 1.0:
        raise InvalidParameter(f"regularization weight must lie in [0, 1], got {eps}", measured=eps)
    rho = validate_state(rho)
    d = rho.dim
    return DensityMatrix((1.0 - eps) * rho.matrix + eps * np.eye(d) / d)


def commutator_norm(a: Any, b: Any) -> float:
    """max-abs entry of ``[a, b]``."""
    a = a.matrix if hasattr(a, "matrix") else np.asarray(a, dtype=complex)
    b = b.matrix if hasattr(b, "matrix") else np.asarray(b, dtype=complex)
    return max_abs(commutator(a, b))
