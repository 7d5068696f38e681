"""
Numerical tolerances shared by every module of the library.

The defaults are the values the library is tested against. The CLI resolves
overrides once at start-up and installs them with :func:`configure`; library
functions read :func:`active` when no explicit value is passed.
"""

from pydantic import BaseModel, ConfigDict, Field


class Tolerances(BaseModel):
    """Tolerance and threshold set."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tol_herm: float = Field(1e-10, gt=0, description="max-abs of m - m^dagger accepted as Hermitian")
    tol_recon: float = Field(1e-10, gt=0, description="Frobenius residual of a spectral reconstruction")
    tol_trace: float = Field(1e-10, gt=0, description="|Tr(rho) - 1| accepted as unit trace")
    tol_psd: float = Field(1e-10, gt=0, description="most negative eigenvalue accepted as PSD")
    eps_rank: float = Field(1e-12, gt=0, description="eigenvalues at or below this count as zero")
    eps_degen: float = Field(1e-9, gt=0, description="relative gap (times spectral range) merging eigenvalues")
    tol_symm: float = Field(1e-9, gt=0, description="deviation accepted as time-translation symmetric")
    tol_gto: float = Field(1e-10, gt=0, description="commutator norm accepted as zero for GTO membership")
    tol_coh: float = Field(1e-12, gt=0, description="coherence accepted as block-diagonal")
    coh_warn: float = Field(1e-8, gt=0, description="upper end of the borderline-coherence warning band")
    tol_work: float = Field(1e-9, gt=0, description="accepted |w_direct - w_closed|")
    tol_support: float = Field(1e-9, gt=0, description="projector residual accepted for support inclusion")
    max_steps: int = Field(1_000_000, ge=0, description="iteration cap of the thermalizing machine")
    max_dim: int = Field(64, ge=1, description="largest single-system dimension")
    max_joint_dim: int = Field(4096, ge=1, description="largest joint-space dimension")


DEFAULT_TOLERANCES = Tolerances()

_active = DEFAULT_TOLERANCES


def active() -> Tolerances:
    """Return the tolerances currently in force."""
    return _active


def configure(tolerances: Tolerances) -> Tolerances:
    """
    Install a tolerance set for the whole process.

    Args:
        tolerances: The resolved tolerance set

    Returns:
        Tolerances: The previously active set, so callers can restore it
    """
    global _active
    previous = _active
    _active = tolerances
    return previous


def with_overrides(**overrides) -> Tolerances:
    """Return the active tolerances with some fields replaced (validated)."""
    return Tolerances(**{**_active.model_dump(), **overrides})
