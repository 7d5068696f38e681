"""
The thermalizing machine.

A system with Hamiltonian H_s collides, one fresh bath copy at a time, with
copies of itself prepared in the Gibbs state. Each collision is the partial
swap ``P = cos(theta) I + i sin(theta) T`` followed by discarding the copy:

    Phi_beta(rho) = Tr_b[P (rho (x) rho_beta) P^dagger]
                  = c^2 rho + s^2 rho_beta + i c s [rho_beta, rho]

Both forms are implemented; :func:`apply` uses the closed form and
:func:`apply_tensor` the joint-space one.
"""

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from loguru import logger

from .coherence import coherence, l1_distance
from .errors import DimensionMismatch, InvalidParameter, MaxStepsExceeded
from .matrix_core import dagger, kron, partial_trace, swap_unitary
from .thermo_states import BetaLike, DensityMatrix, Hamiltonian, as_beta, gibbs_state, validate_state
from .tolerances import active


@dataclass(frozen=True, eq=False)
class PartialSwapChannel:
    """
    One collision of the thermalizing machine.

    Args:
        theta: Swap angle in (0, pi/2]
        beta: Inverse temperature of the bath copies
        h_s: System Hamiltonian (every bath copy carries the same one)
    """

    theta: float
    beta: float
    h_s: Hamiltonian
    c: float = field(init=False)
    s: float = field(init=False)
    rho_beta: DensityMatrix = field(init=False, repr=False)

    def __post_init__(self):
        theta = float(self.theta)
        if not (0.0 < theta <= math.pi / 2):
            raise InvalidParameter(f"theta must lie in (0, pi/2], got {self.theta}", measured=theta)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "beta", as_beta(self.beta))
        # theta = pi/2 is the full swap; pin c to zero instead of cos' 6e-17
        object.__setattr__(self, "c", 0.0 if theta == math.pi / 2 else math.cos(theta))
        object.__setattr__(self, "s", math.sin(theta))
        object.__setattr__(self, "rho_beta", gibbs_state(self.h_s, self.beta))

    @property
    def dim(self) -> int:
        return self.h_s.dim

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        return apply(self, rho)

    def __call__(self, rho: DensityMatrix) -> DensityMatrix:
        return apply(self, rho)


@dataclass(frozen=True, eq=False)
class ThermalizationPath:
    """States ``rho, Phi(rho), Phi^2(rho), ...`` with their distance to rho_beta and coherence."""

    states: Tuple[DensityMatrix, ...]
    distances: np.ndarray
    coherences: np.ndarray

    def __len__(self) -> int:
        return len(self.states)


def _check_dim(ch: PartialSwapChannel, rho: DensityMatrix) -> None:
    if rho.dim != ch.dim:
        raise DimensionMismatch(f"state dim {rho.dim} does not match H_s dim {ch.dim}")


def _step(ch: PartialSwapChannel, m: np.ndarray) -> np.ndarray:
    rb = ch.rho_beta.matrix
    return ch.c ** 2 * m + ch.s ** 2 * rb + 1j * ch.c * ch.s * (rb @ m - m @ rb)


def partial_swap_unitary(ch: PartialSwapChannel) -> np.ndarray:
    """``P = c I + i s T`` on the d^2-dimensional system (x) bath-copy space."""
    d = ch.dim
    return ch.c * np.eye(d * d) + 1j * ch.s * swap_unitary(d)


def apply(ch: PartialSwapChannel, rho: DensityMatrix) -> DensityMatrix:
    """
    One thermalization step in closed form.

    Raises:
        DimensionMismatch: If dim(rho) != dim(H_s)
    """
    rho = validate_state(rho)
    _check_dim(ch, rho)
    return DensityMatrix(_step(ch, rho.matrix))


def apply_tensor(ch: PartialSwapChannel, rho: DensityMatrix) -> DensityMatrix:
    """
    One thermalization step on the joint space: ``Tr_b[P (rho (x) rho_beta) P^dagger]``.

    Raises:
        DimensionMismatch: If dim(rho) != dim(H_s)
    """
    rho = validate_state(rho)
    _check_dim(ch, rho)
    p = partial_swap_unitary(ch)
    joint = p @ kron(rho.matrix, ch.rho_beta.matrix) @ dagger(p)
    return DensityMatrix(partial_trace(joint, (ch.dim, ch.dim), keep="first"))


def iterate(ch: PartialSwapChannel, rho0: DensityMatrix, n: int) -> ThermalizationPath:
    """
    Apply the channel ``n`` times, keeping every intermediate state.

    Distances are D_l1 to rho_beta in the canonical H_s eigenbasis.

    Raises:
        DimensionMismatch: If dim(rho0) != dim(H_s)
        MaxStepsExceeded: If n > max_steps
    """
    rho0 = validate_state(rho0)
    _check_dim(ch, rho0)
    n = int(n)
    if n < 0:
        raise InvalidParameter(f"step count must be non-negative, got {n}", measured=float(n))
    if n > active().max_steps:
        raise MaxStepsExceeded(f"{n} steps requested, max_steps is {active().max_steps}", measured=float(n))
    states = [rho0]
    for _ in range(n):
        states.append(apply(ch, states[-1]))
    distances = np.array([l1_distance(r, ch.rho_beta, ch.h_s) for r in states])
    coherences = np.array([coherence(r, ch.h_s) for r in states])
    return ThermalizationPath(states=tuple(states), distances=distances, coherences=coherences)


def steps_to_equilibrium(ch: PartialSwapChannel, rho0: DensityMatrix, eps: float) -> int:
    """
    Smallest ``n`` with ``D_l1(Phi^n(rho0) | rho_beta) <= eps``.

    Raises:
        InvalidParameter: If eps <= 0
        MaxStepsExceeded: If no n <= max_steps qualifies
    """
    if not eps > 0:
        raise InvalidParameter(f"eps must be positive, got {eps}", measured=float(eps))
    rho0 = validate_state(rho0)
    _check_dim(ch, rho0)
    max_steps = active().max_steps
    m = rho0.matrix
    n = 0
    while l1_distance(m, ch.rho_beta, ch.h_s) > eps:
        if n >= max_steps:
            raise MaxStepsExceeded(f"D_l1 still above {eps:.3e} after {max_steps} steps", measured=float(n))
        m = _step(ch, m)
        n += 1
    logger.debug(f"equilibrated within {eps:.3e} after {n} collisions")
    return n


def zero_law_bound(ch: PartialSwapChannel, rho0: DensityMatrix, n: int) -> float:
    """Upper bound ``cos(theta)^n * D_l1(rho0 | rho_beta)`` on the distance after n steps."""
    return ch.c ** int(n) * l1_distance(rho0, ch.rho_beta, ch.h_s)
