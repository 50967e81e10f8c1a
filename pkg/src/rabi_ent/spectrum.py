"""Closed-form three-level spectrum per photon number.

Within a fixed photon number N, the slow qubit pair mixes the three
displaced-sector states |1,1>|N_1>, |1,-1>|N_-1>, |1,0>|N_0>.  The
antisymmetric combination of the outer two decouples at energy ``e0``;
the symmetric combination and |1,0>|N_0> form a two-level system whose
branches sit at ``eplus``/``eminus`` and oscillate at ``rabi_freq``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .params import ModelParams, effective_kappa
from .specialfn import laguerre_sequence

_SQRT2 = math.sqrt(2.0)
_SQRT8 = math.sqrt(8.0)


@dataclass(frozen=True)
class AASpectrumRow:
    """One photon number's energies, eigenvector weights, and Rabi frequency.

    ``y_plus``/``y_minus`` are the bright-branch eigenvector ratios; they and
    the squared norms ``l2_plus``/``l2_minus`` are None when omega1N == 0,
    where the ratio is undefined.  ``weight`` is the transition-probability
    prefactor in its stable rational form omega1N^2 / (t0tilde^2 + 8 omega1N^2),
    which removes the 0/0 at Laguerre roots of omega1N.  ``degenerate`` marks
    the doubly singular point omega1N == 0 == t0tilde, where the weight is
    pinned to 0.
    """

    N: int
    omega1N: float
    omega2N: float
    t0tilde: float
    e0: float
    eplus: float
    eminus: float
    y_plus: float | None
    y_minus: float | None
    l2_plus: float | None
    l2_minus: float | None
    weight: float
    rabi_freq: float
    degenerate: bool = False


def omega_1N(N: int, params: ModelParams) -> float:
    """Coupling of |1,0>|N_0> to each outer displaced sector, in oscillator units.

    Equals -(ratio_r/sqrt(2)) * exp(-beta^2/2) * L_N(beta^2).
    """
    b2 = params.beta * params.beta
    return -(params.ratio_r / _SQRT2) * math.exp(-0.5 * b2) * _laguerre_single(N, b2)


def omega_2N(N: int, params: ModelParams) -> float:
    """Direct coupling between the two outer displaced sectors.

    Equals -kappa_eff * exp(-2 beta^2) * L_N(4 beta^2), with kappa_eff from
    :func:`effective_kappa`.
    """
    b2 = params.beta * params.beta
    return -effective_kappa(params) * math.exp(-2.0 * b2) * _laguerre_single(N, 4.0 * b2)


def _laguerre_single(N: int, x: float) -> float:
    return float(laguerre_sequence(N, x)[-1])


def _row_from_overlaps(N: int, lag1: float, lag2: float, params: ModelParams) -> AASpectrumRow:
    """Assemble a spectrum row from precomputed Laguerre values.

    ``lag1`` is L_N(beta^2) and ``lag2`` is L_N(4 beta^2); the displacement
    exponentials are applied here so batch and scalar paths share one code
    path for the branch algebra.
    """
    b2 = params.beta * params.beta
    k_eff = effective_kappa(params)
    om1 = -(params.ratio_r / _SQRT2) * math.exp(-0.5 * b2) * lag1
    om2 = -k_eff * math.exp(-2.0 * b2) * lag2
    t0 = -b2 + k_eff + om2
    radical = math.hypot(t0, _SQRT8 * om1)
    e0 = N - b2 - om2
    # the constant -k_eff offset shifts both bright branches equally and
    # cancels from rabi_freq; it matters only for printed spectra
    eplus = N - k_eff + 0.5 * (t0 + radical)
    eminus = N - k_eff + 0.5 * (t0 - radical)

    if om1 == 0.0:
        return AASpectrumRow(
            N=N,
            omega1N=om1,
            omega2N=om2,
            t0tilde=t0,
            e0=e0,
            eplus=eplus,
            eminus=eminus,
            y_plus=None,
            y_minus=None,
            l2_plus=None,
            l2_minus=None,
            weight=0.0,
            rabi_freq=radical,
            degenerate=(t0 == 0.0),
        )

    weight = (om1 * om1) / (t0 * t0 + 8.0 * om1 * om1)
    # quadratic roots of om1*y^2 + t0*y - 2*om1 = 0: evaluate the
    # non-cancelling branch directly, recover the other from y+ * y- = -2
    if t0 > 0.0:
        y_minus = (-t0 - radical) / (2.0 * om1)
        y_plus = -2.0 / y_minus
    else:
        y_plus = (-t0 + radical) / (2.0 * om1)
        y_minus = -2.0 / y_plus
    return AASpectrumRow(
        N=N,
        omega1N=om1,
        omega2N=om2,
        t0tilde=t0,
        e0=e0,
        eplus=eplus,
        eminus=eminus,
        y_plus=y_plus,
        y_minus=y_minus,
        l2_plus=y_plus * y_plus + 2.0,
        l2_minus=y_minus * y_minus + 2.0,
        weight=weight,
        rabi_freq=radical,
    )


def aa_row(N: int, params: ModelParams) -> AASpectrumRow:
    """Spectrum row for a single photon number."""
    if isinstance(N, bool) or N != int(N):
        raise DomainError(f"N must be a nonnegative integer, got {N!r}")
    N = int(N)
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    b2 = params.beta * params.beta
    lag1 = _laguerre_single(N, b2)
    lag2 = _laguerre_single(N, 4.0 * b2)
    return _row_from_overlaps(N, lag1, lag2, params)


def aa_rows(params: ModelParams, n_max: int, n_min: int = 0) -> list[AASpectrumRow]:
    """Spectrum rows for N = n_min .. n_max, sharing one recurrence pass."""
    if n_min < 0 or n_max < n_min:
        raise DomainError(f"need 0 <= n_min <= n_max, got [{n_min}, {n_max}]")
    b2 = params.beta * params.beta
    lag1 = laguerre_sequence(n_max, b2)
    lag2 = laguerre_sequence(n_max, 4.0 * b2)
    return [
        _row_from_overlaps(N, float(lag1[N]), float(lag2[N]), params)
        for N in range(n_min, n_max + 1)
    ]
