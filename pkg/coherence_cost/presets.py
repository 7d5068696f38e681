"""
Named states and Hamiltonians.

State presets:
    qubit-plus                  |+><+|
    qubit-sigma-z               |0><0| (the +1 eigenstate of sigma_z)
    maximally-mixed <d>         I/d
    random-full-rank <d> <seed> seeded full-rank random state
    gibbs                       thermal state of the given H_s at the given beta

Hamiltonian presets:
    qubit-sigma-z               Pauli sigma_z
    ladder <d>                  diag(0, 1, ..., d-1)
    random <d> <seed>           seeded (A + A^dagger)/2
"""

from typing import List, Optional

import numpy as np

from .errors import InvalidParameter
from .ensembles import random_density_matrix, random_hamiltonian
from .thermo_states import BetaLike, DensityMatrix, Hamiltonian, gibbs_state

STATE_PRESETS = ("qubit-plus", "qubit-sigma-z", "maximally-mixed", "random-full-rank", "gibbs")
HAMILTONIAN_PRESETS = ("qubit-sigma-z", "ladder", "random")


def _split(name: str) -> List[str]:
    return name.replace(":", " ").replace(",", " ").split()


def _int_arg(parts: List[str], index: int, name: str, minimum: int = 0) -> int:
    try:
        value = int(parts[index])
    except (IndexError, ValueError):
        raise InvalidParameter(f"preset {parts[0]!r} needs an integer {name}")
    if value < minimum:
        raise InvalidParameter(f"preset {parts[0]!r}: {name} must be >= {minimum}, got {value}", measured=float(value))
    return value


def is_state_preset(name: str) -> bool:
    parts = _split(name)
    return bool(parts) and parts[0] in STATE_PRESETS


def is_hamiltonian_preset(name: str) -> bool:
    parts = _split(name)
    return bool(parts) and parts[0] in HAMILTONIAN_PRESETS


def state_preset(name: str, h_s: Optional[Hamiltonian] = None, beta: Optional[BetaLike] = None) -> DensityMatrix:
    """
    Build a named state.

    Args:
        name: Preset name with its arguments, e.g. ``"maximally-mixed 3"``
        h_s: System Hamiltonian (needed by ``gibbs``)
        beta: Inverse temperature (needed by ``gibbs``)

    Returns:
        DensityMatrix: The preset state

    Raises:
        InvalidParameter: Unknown preset or missing arguments
    """
    parts = _split(name)
    kind = parts[0] if parts else ""
    if kind == "qubit-plus":
        plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
        return DensityMatrix(np.outer(plus, plus))
    if kind == "qubit-sigma-z":
        return DensityMatrix(np.diag([1.0, 0.0]))
    if kind == "maximally-mixed":
        d = _int_arg(parts, 1, "dimension", minimum=1)
        return DensityMatrix(np.eye(d) / d)
    if kind == "random-full-rank":
        d = _int_arg(parts, 1, "dimension", minimum=1)
        seed = _int_arg(parts, 2, "seed")
        return random_density_matrix(d, np.random.default_rng(seed))
    if kind == "gibbs":
        if h_s is None or beta is None:
            raise InvalidParameter("preset 'gibbs' needs a Hamiltonian and beta")
        return gibbs_state(h_s, beta)
    raise InvalidParameter(f"unknown state preset {name!r}; known: {', '.join(STATE_PRESETS)}")


def hamiltonian_preset(name: str) -> Hamiltonian:
    """Build a named Hamiltonian (see module docstring)."""
    parts = _split(name)
    kind = parts[0] if parts else ""
    if kind == "qubit-sigma-z":
        return Hamiltonian(np.diag([1.0, -1.0]))
    if kind == "ladder":
        d = _int_arg(parts, 1, "dimension", minimum=1)
        return Hamiltonian(np.diag(np.arange(d, dtype=float)))
    if kind == "random":
        d = _int_arg(parts, 1, "dimension", minimum=1)
        seed = _int_arg(parts, 2, "seed")
        return random_hamiltonian(d, np.random.default_rng(seed))
    raise InvalidParameter(f"unknown Hamiltonian preset {name!r}; known: {', '.join(HAMILTONIAN_PRESETS)}")
