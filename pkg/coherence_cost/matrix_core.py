"""
Dense complex linear algebra over small Hilbert spaces.

Operators are plain ``numpy`` complex arrays indexed ``(i, j)`` row-major.
Everything here is a pure function of its inputs; arrays stored inside the
frozen value types are marked read-only.
"""

from dataclasses import dataclass
from typing import Any, Dict, Literal, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la

from .errors import DimensionMismatch, DimensionTooLarge, InvalidParameter, NotHermitian, RankDeficient
from .tolerances import active


def freeze(m: np.ndarray) -> np.ndarray:
    """Return a read-only complex copy of ``m``."""
    out = np.array(m, dtype=complex, copy=True)
    out.flags.writeable = False
    return out


def as_square(m: Any, name: str = "matrix") -> np.ndarray:
    """
    Coerce ``m`` to a square complex array and enforce the dimension caps.

    Args:
        m: Array-like operator
        name: Name used in error messages

    Returns:
        np.ndarray: Complex dim x dim array

    Raises:
        DimensionMismatch: If ``m`` is not a non-empty square matrix
        DimensionTooLarge: If dim exceeds max_joint_dim
    """
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if arr.shape[0] > active().max_joint_dim:
        raise DimensionTooLarge(
            f"{name} has dim {arr.shape[0]} > {active().max_joint_dim}", measured=float(arr.shape[0])
        )
    return arr


def check_factor_dim(d: int, name: str = "dim") -> int:
    """Validate a single-system dimension against max_dim."""
    if d < 1:
        raise DimensionMismatch(f"{name} must be positive, got {d}")
    if d > active().max_dim:
        raise DimensionTooLarge(f"{name} {d} > {active().max_dim}", measured=float(d))
    return d


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def max_abs(m: np.ndarray) -> float:
    """Largest entry magnitude (0.0 for an empty array)."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def hermiticity_violation(m: np.ndarray) -> float:
    return max_abs(m - dagger(m))


def unitarity_violation(u: np.ndarray) -> float:
    """max-abs of U^dagger U - I."""
    u = as_square(u, "unitary")
    return max_abs(dagger(u) @ u - np.eye(u.shape[0]))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """
    Eigen-decomposition ``V diag(eigenvalues) V^dagger`` of a Hermitian matrix.

    Eigenvalues are real and ascending; eigenvectors are the columns of ``V``.
    Inside numerically degenerate clusters the basis is whatever the solver
    returned, so callers must only rely on cluster (block) structure.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)

    def apply(self, f) -> np.ndarray:
        """Return ``V diag(f(eigenvalues)) V^dagger``."""
        v = self.eigenvectors
        return (v * f(self.eigenvalues)) @ dagger(v)

    def to_eigenbasis(self, m: np.ndarray) -> np.ndarray:
        """Express operator ``m`` in this eigenbasis: ``V^dagger m V``."""
        v = self.eigenvectors
        return dagger(v) @ m @ v

    def from_eigenbasis(self, m: np.ndarray) -> np.ndarray:
        v = self.eigenvectors
        return v @ m @ dagger(v)

    @property
    def spectral_range(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[0])


def eigh(m: Any, tol_herm: Optional[float] = None) -> SpectralDecomposition:
    """
    Hermitian eigen-decomposition with ascending eigenvalues.

    Args:
        m: Hermitian matrix
        tol_herm: Hermiticity tolerance (defaults to the active one)

    Returns:
        SpectralDecomposition: Ascending eigenvalues and unitary eigenvectors

    Raises:
        NotHermitian: If max-abs of m - m^dagger exceeds tol_herm
    """
    m = as_square(m)
    tol_herm = active().tol_herm if tol_herm is None else tol_herm
    violation = hermiticity_violation(m)
    if violation > tol_herm:
        raise NotHermitian(f"matrix is not Hermitian (max |m - m^dagger| = {violation:.3e})", measured=violation)
    # symmetrize so the solver sees an exactly Hermitian input
    w, v = la.eigh((m + dagger(m)) / 2)
    w = np.array(w, dtype=float)
    w.flags.writeable = False
    return SpectralDecomposition(eigenvalues=w, eigenvectors=freeze(v))


def kron(a: Any, b: Any) -> np.ndarray:
    """
    Tensor product ``a (x) b``.

    ``out[i*db + k, j*db + l] = a[i, j] * b[k, l]``.
    """
    a = as_square(a, "a")
    b = as_square(b, "b")
    joint = a.shape[0] * b.shape[0]
    if joint > active().max_joint_dim:
        raise DimensionTooLarge(f"joint dimension {joint} > {active().max_joint_dim}", measured=float(joint))
    return np.kron(a, b)


def partial_trace(m: Any, dims: Tuple[int, int], keep: Literal["first", "second"] = "first") -> np.ndarray:
    """
    Partial trace over one factor of a bipartite operator.

    Args:
        m: Operator on the (d1 * d2)-dimensional joint space
        dims: (d1, d2)
        keep: Which factor survives

    Returns:
        np.ndarray: ``Tr_2(m)`` (d1 x d1) for keep="first", ``Tr_1(m)`` (d2 x d2) otherwise

    Raises:
        DimensionMismatch: If dim(m) != d1 * d2 or keep is unknown
    """
    m = as_square(m)
    d1, d2 = (int(d) for d in dims)
    if d1 < 1 or d2 < 1 or m.shape[0] != d1 * d2:
        raise DimensionMismatch(f"dims {dims} do not factor a {m.shape[0]}-dimensional operator")
    t = m.reshape(d1, d2, d1, d2)
    if keep == "first":
        return np.einsum("ikjk->ij", t)
    if keep == "second":
        return np.einsum("kikj->ij", t)
    raise DimensionMismatch(f"keep must be 'first' or 'second', got {keep!r}")


def mat_func(
    m: Any,
    f: Literal["exp", "log"],
    eps_rank: Optional[float] = None,
    spectrum: Optional[SpectralDecomposition] = None,
) -> np.ndarray:
    """
    Apply ``exp`` or ``log`` to a Hermitian matrix through its spectrum.

    Args:
        m: Hermitian matrix
        f: "exp" or "log"
        eps_rank: Smallest eigenvalue admitted by log (defaults to the active one)
        spectrum: Precomputed decomposition of ``m``, if the caller has one

    Returns:
        np.ndarray: ``V diag(f(lambda)) V^dagger``

    Raises:
        RankDeficient: If f is log and an eigenvalue is <= eps_rank
    """
    decomp = spectrum if spectrum is not None else eigh(m)
    if f == "exp":
        return decomp.apply(np.exp)
    if f == "log":
        eps_rank = active().eps_rank if eps_rank is None else eps_rank
        smallest = float(decomp.eigenvalues[0])
        if smallest <= eps_rank:
            raise RankDeficient(f"log undefined: eigenvalue {smallest:.3e} <= {eps_rank:.1e}", measured=smallest)
        return decomp.apply(np.log)
    raise InvalidParameter(f"unknown matrix function {f!r}")


def swap_unitary(d: int) -> np.ndarray:
    """
    Swap operator ``T`` on ``C^d (x) C^d`` with ``T|i>|j> = |j>|i>``.

    It is a real permutation matrix, hence unitary and an exact involution.
    """
    d = check_factor_dim(int(d))
    t = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            t[j * d + i, i * d + j] = 1.0
    return t


def matrix_to_json(m: Any) -> Dict[str, Any]:
    """Serialize to ``{"dim": d, "entries": [[re, im], ...]}`` (row-major)."""
    m = as_square(m)
    entries = [[float(z.real), float(z.imag)] for z in m.reshape(-1)]
    return {"dim": int(m.shape[0]), "entries": entries}


def matrix_from_json(payload: Dict[str, Any]) -> np.ndarray:
    """
    Parse the fixture format produced by :func:`matrix_to_json`.

    Raises:
        DimensionMismatch: If the entry count is not dim squared
    """
    dim = int(payload["dim"])
    entries: Sequence[Sequence[float]] = payload["entries"]
    if dim < 1 or len(entries) != dim * dim:
        raise DimensionMismatch(f"fixture declares dim {dim} but has {len(entries)} entries")
    flat = np.array([complex(float(re), float(im)) for re, im in entries], dtype=complex)
    return as_square(flat.reshape(dim, dim))
