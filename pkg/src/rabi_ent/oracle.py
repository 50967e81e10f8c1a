"""Brute-force ground truth in a truncated Fock space.

Builds the full two-qubit/oscillator Hamiltonian as a dense real symmetric
matrix, diagonalizes it, evolves the chosen initial state by spectral
phases (exactly unitary at every time), and extracts spin-sector
populations and two-qubit concurrence.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dynamics import TimeSeries, _as_times
from .errors import CapacityError, DomainError, TruncationWarning
from .params import ModelParams, SpinState, effective_kappa

SPIN_DIM = 4
TRUNCATION_MARGIN = 20

# composite spin basis order used throughout: |1,1>, |1,-1>, |1,0>, |0,0>
_SPIN_INDEX = {
    SpinState.J1M1: 0,
    SpinState.J1M_MINUS1: 1,
    SpinState.J1M0: 2,
    SpinState.J0M0: 3,
}

_SQRT_HALF = math.sqrt(0.5)

# (sz1 + sz2)/2 is diagonal in the composite basis with eigenvalues 1, -1, 0, 0
_SZ_HALF = np.diag([1.0, -1.0, 0.0, 0.0])

# sx1 + sx2 couples |1,0> to both |1,1> and |1,-1> with matrix element sqrt(2)
_SX_SUM = np.zeros((4, 4))
_SX_SUM[0, 2] = _SX_SUM[2, 0] = math.sqrt(2.0)
_SX_SUM[1, 2] = _SX_SUM[2, 1] = math.sqrt(2.0)

# sx1*sx2 swaps |1,1> <-> |1,-1> and is diagonal (+1, -1) on |1,0>, |0,0>
_SX_PROD = np.zeros((4, 4))
_SX_PROD[0, 1] = _SX_PROD[1, 0] = 1.0
_SX_PROD[2, 2] = 1.0
_SX_PROD[3, 3] = -1.0

# columns: composite states expressed in the product basis (uu, ud, du, dd)
_COMPOSITE_TO_PRODUCT = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, _SQRT_HALF, _SQRT_HALF],
        [0.0, 0.0, _SQRT_HALF, -_SQRT_HALF],
        [0.0, 1.0, 0.0, 0.0],
    ]
)

# sigma_y (x) sigma_y in the product basis, used by the spin-flip construction
_SYSY = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)


class HamiltonianVariant(Enum):
    """Reading of the qubit-sum operator that multiplies the oscillator coupling.

    HALF_SUM uses (sz1 + sz2)/2 with eigenvalues {-1, 0, 1}, displacing
    adjacent spin sectors by one coupling unit; PAULI_SUM uses the literal
    sz1 + sz2 with eigenvalues {-2, 0, 2}.
    """

    HALF_SUM = "half_sum"
    PAULI_SUM = "pauli_sum"


@dataclass(frozen=True)
class EDConfig:
    """Truncation and variant switches for the dense oracle."""

    n_max: int
    variant: HamiltonianVariant = HamiltonianVariant.HALF_SUM
    dim_ceiling: int = 8192

    def __post_init__(self) -> None:
        if isinstance(self.n_max, bool) or int(self.n_max) != self.n_max:
            raise DomainError(f"n_max must be an integer, got {self.n_max!r}")
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.n_max < 0:
            raise DomainError(f"n_max must be >= 0, got {self.n_max}")
        if not isinstance(self.variant, HamiltonianVariant):
            raise DomainError("variant must be a HamiltonianVariant member")

    @property
    def dim(self) -> int:
        return SPIN_DIM * (self.n_max + 1)


@dataclass(frozen=True)
class EDResult:
    """Eigendecomposition summary plus time-evolved observables.

    ``truncation_error`` is the sup-norm change of the population channels
    when n_max grows by TRUNCATION_MARGIN; None when the check was skipped.
    ``states`` optionally carries the evolved vectors, one column per time.
    """

    eigenvalues: np.ndarray
    populations: TimeSeries
    concurrence: TimeSeries
    truncation_error: float | None
    states: np.ndarray | None = None


def required_n_max(alpha_sq: float) -> int:
    """Smallest Fock cutoff admitted for a coherent state of mean alpha_sq."""
    return math.ceil(alpha_sq + 10.0 * math.sqrt(alpha_sq + 1.0))


def build_hamiltonian(params: ModelParams, config: EDConfig) -> np.ndarray:
    """Dense real symmetric Hamiltonian, basis (composite spin) x (Fock number).

    Blocks: oscillator energy, the sector-displacing coupling beta*(a + a^dag)
    weighted by the variant's qubit-sum operator, the transverse qubit term,
    and the inter-qubit coupling.  The |0,0> spin sector couples to nothing.
    """
    if config.dim > config.dim_ceiling:
        raise CapacityError(
            f"dimension {config.dim} exceeds the ceiling {config.dim_ceiling}"
        )
    n_osc = config.n_max + 1
    eye_osc = np.eye(n_osc)
    ladder = np.diag(np.sqrt(np.arange(1.0, n_osc)), 1)
    number_op = np.diag(np.arange(float(n_osc)))
    position = ladder + ladder.T
    sector_op = _SZ_HALF if config.variant is HamiltonianVariant.HALF_SUM else 2.0 * _SZ_HALF
    omega = params.omega
    h = omega * np.kron(np.eye(SPIN_DIM), number_op)
    h += omega * params.beta * np.kron(sector_op, position)
    h -= 0.5 * params.ratio_r * omega * np.kron(_SX_SUM, eye_osc)
    h -= effective_kappa(params) * omega * np.kron(_SX_PROD, eye_osc)
    return h


def eigendecompose(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a symmetric matrix.

    Verifies the reconstruction residual ||H v - lambda v|| <= 1e-9 ||H||
    for every pair before returning.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {h.shape}")
    if not np.allclose(h, h.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(h).max())):
        raise DomainError("matrix is not symmetric")
    try:
        evals, evecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure path
        raise RuntimeError(f"eigendecomposition failed to converge: {exc}") from exc
    norm = float(np.abs(evals).max()) if evals.size else 0.0
    if norm > 0.0:
        residuals = np.linalg.norm(h @ evecs - evecs * evals, axis=0)
        worst = float(residuals.max())
        if worst > 1e-9 * norm:
            raise RuntimeError(
                f"eigenpair residual {worst:.3e} exceeds 1e-9 * ||H|| = {1e-9 * norm:.3e}"
            )
    return evals, evecs


def coherent_amplitudes(alpha_sq: float, n_max: int) -> np.ndarray:
    """Fock amplitudes of |alpha> with alpha = sqrt(alpha_sq), real and positive."""
    if alpha_sq < 0.0:
        raise DomainError(f"alpha_sq must be >= 0, got {alpha_sq}")
    if alpha_sq == 0.0:
        amps = np.zeros(n_max + 1)
        amps[0] = 1.0
        return amps
    ns = np.arange(n_max + 1, dtype=float)
    log_amp = -0.5 * alpha_sq + 0.5 * ns * math.log(alpha_sq)
    log_amp -= 0.5 * np.array([math.lgamma(n + 1.0) for n in range(n_max + 1)])
    return np.exp(log_amp)


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix (product basis).

    Square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy), sorted
    descending; the concurrence is max(0, l1 - l2 - l3 - l4).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho.real)) or not np.all(np.isfinite(rho.imag)):
        raise DomainError("density matrix contains non-finite entries")
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise DomainError("density matrix is not Hermitian within 1e-10")
    if abs(np.trace(rho).real - 1.0) > 1e-10 or abs(np.trace(rho).imag) > 1e-10:
        raise DomainError("density matrix trace differs from 1 by more than 1e-10")
    if float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()) < -1e-10:
        raise DomainError("density matrix is not positive semidefinite within 1e-10")
    rho_tilde = _SYSY @ rho.conj() @ _SYSY
    eigs = np.linalg.eigvals(rho @ rho_tilde)
    lams = np.sort(np.sqrt(np.clip(eigs.real, 0.0, None)))[::-1]
    return float(min(1.0, max(0.0, lams[0] - lams[1] - lams[2] - lams[3])))


def _initial_vector(
    params: ModelParams,
    config: EDConfig,
    initial_spin: SpinState,
    initial_fock: int | None,
) -> np.ndarray:
    n_osc = config.n_max + 1
    psi0 = np.zeros(SPIN_DIM * n_osc)
    sector = _SPIN_INDEX[initial_spin]
    if initial_fock is None:
        if config.n_max < required_n_max(params.alpha_sq):
            raise DomainError(
                f"n_max={config.n_max} below the coherent-state requirement "
                f"{required_n_max(params.alpha_sq)} for alpha_sq={params.alpha_sq}"
            )
        amps = coherent_amplitudes(params.alpha_sq, config.n_max)
        norm = float(np.linalg.norm(amps))
        if norm < 1.0 - 1e-12:
            raise DomainError(
                f"truncated coherent-state norm {norm:.15f} below 1 - 1e-12"
            )
        psi0[sector * n_osc : (sector + 1) * n_osc] = amps
    else:
        if isinstance(initial_fock, bool) or int(initial_fock) != initial_fock:
            raise DomainError(f"initial_fock must be an integer, got {initial_fock!r}")
        initial_fock = int(initial_fock)
        if not 0 <= initial_fock <= config.n_max:
            raise DomainError(
                f"initial_fock={initial_fock} outside the truncated space [0, {config.n_max}]"
            )
        psi0[sector * n_osc + initial_fock] = 1.0
    return psi0


def _evolve_populations(
    params: ModelParams,
    config: EDConfig,
    times: np.ndarray,
    initial_spin: SpinState,
    initial_fock: int | None,
    keep_states: bool,
) -> tuple[np.ndarray, dict[str, np.ndarray], np.ndarray, np.ndarray | None]:
    h = build_hamiltonian(params, config)
    evals, evecs = eigendecompose(h)
    psi0 = _initial_vector(params, config, initial_spin, initial_fock)
    coeff0 = evecs.T @ psi0
    phases = np.exp(-1j * np.outer(evals, times))
    states = evecs @ (phases * coeff0[:, None])
    n_osc = config.n_max + 1
    sectors = states.reshape(SPIN_DIM, n_osc, times.size)
    pops = np.sum(np.abs(sectors) ** 2, axis=1)
    channels = {
        "P11": pops[0],
        "P1m1": pops[1],
        "P10": pops[2],
        "P00": pops[3],
    }
    conc = np.empty(times.size)
    for j in range(times.size):
        block = sectors[:, :, j]
        rho_composite = block @ block.conj().T
        rho = _COMPOSITE_TO_PRODUCT @ rho_composite @ _COMPOSITE_TO_PRODUCT.T
        # renormalize away the coherent-state truncation deficit (~1e-24)
        rho = rho / np.trace(rho).real
        conc[j] = concurrence(rho)
    return evals, channels, conc, states if keep_states else None


def evolve(
    params: ModelParams,
    config: EDConfig,
    times,
    *,
    initial_spin: SpinState = SpinState.J1M0,
    initial_fock: int | None = None,
    compute_truncation_error: bool = True,
    keep_states: bool = False,
) -> EDResult:
    """Evolve an initial state and report populations plus concurrence.

    By default the initial state is |1,0> (x) |alpha> with alpha =
    sqrt(alpha_sq) taken real; pass ``initial_fock`` to start from a bare
    number state instead.  Evolution is by spectral decomposition, exact
    up to the Fock truncation, whose effect is measured by re-running with
    n_max + 20 unless ``compute_truncation_error`` is off.
    """
    times = _as_times(times)
    evals, channels, conc, states = _evolve_populations(
        params, config, times, initial_spin, initial_fock, keep_states
    )
    truncation_error = None
    if compute_truncation_error:
        bigger = EDConfig(
            n_max=config.n_max + TRUNCATION_MARGIN,
            variant=config.variant,
            dim_ceiling=config.dim_ceiling + SPIN_DIM * TRUNCATION_MARGIN,
        )
        _, channels_big, _, _ = _evolve_populations(
            params, bigger, times, initial_spin, initial_fock, False
        )
        truncation_error = max(
            float(np.abs(channels[name] - channels_big[name]).max()) for name in channels
        )
        if truncation_error > 1e-6:
            warnings.warn(
                f"truncation error {truncation_error:.3e} exceeds 1e-6; "
                f"increase n_max beyond {config.n_max}",
                TruncationWarning,
                stacklevel=2,
            )
    return EDResult(
        eigenvalues=evals,
        populations=TimeSeries(times=times, channels=channels),
        concurrence=TimeSeries(times=times, channels={"C": conc}),
        truncation_error=truncation_error,
        states=states,
    )
