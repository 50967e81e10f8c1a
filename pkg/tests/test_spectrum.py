import math

import numpy as np
import pytest
from scipy.linalg import expm

from rabi_ent import (
    AdiabaticRegimeWarning,
    DomainError,
    KappaConvention,
    ModelParams,
    aa_row,
    aa_rows,
    effective_kappa,
    omega_1N,
    omega_2N,
)

SQRT2 = math.sqrt(2.0)


def random_params(rng):
    return ModelParams(
        ratio_r=float(rng.uniform(0.01, 0.3)),
        beta=float(rng.uniform(0.0, 0.6)),
        kappa0=float(rng.uniform(-1.0, 1.0)),
        alpha_sq=float(rng.uniform(0.0, 50.0)),
    )


def test_omega_1N_at_zero_coupling():
    params = ModelParams(ratio_r=0.2, beta=0.0)
    assert omega_1N(0, params) == pytest.approx(-0.2 / SQRT2, rel=1e-15)
    assert omega_1N(37, params) == pytest.approx(-0.2 / SQRT2, rel=1e-15)


def test_omega_1N_vanishes_with_qubit_frequency():
    with pytest.warns(AdiabaticRegimeWarning):
        params = ModelParams(ratio_r=0.0, beta=0.4)
    for n in (0, 5, 40):
        assert omega_1N(n, params) == 0.0


def test_omega_1N_against_displacement_oracle():
    # brute-force <N|D(beta)|N> via matrix exponentiation, cutoff 160
    beta = 0.4193
    ladder = np.diag(np.sqrt(np.arange(1.0, 161.0)), 1)
    overlap = expm(beta * (ladder.T - ladder))[16, 16]
    params = ModelParams(ratio_r=0.12, beta=beta, kappa0=0.02, alpha_sq=106.0)
    expected = -(0.12 / SQRT2) * overlap
    assert expected == pytest.approx(0.031003248518354, rel=1e-9)  # frozen
    assert omega_1N(16, params) == pytest.approx(expected, rel=1e-10)


def test_omega_2N_zero_kappa():
    params = ModelParams(ratio_r=0.12, beta=0.4193, kappa0=0.0)
    for n in (0, 10, 106):
        assert omega_2N(n, params) == 0.0


def test_omega_2N_ground_state():
    params = ModelParams(ratio_r=0.23, beta=0.0, kappa0=0.1)
    assert effective_kappa(params) == pytest.approx(0.023, rel=1e-15)
    assert omega_2N(0, params) == pytest.approx(-0.023, rel=1e-15)


def test_uncoupled_limit_row():
    params = ModelParams(ratio_r=0.2, beta=0.0, kappa0=0.0)
    row = aa_row(3, params)
    assert row.t0tilde == 0.0
    assert row.weight == 0.125  # exact: omega1^2 / (8 omega1^2)
    assert row.rabi_freq == pytest.approx(2.0 * 0.2, rel=1e-14)
    assert row.e0 == pytest.approx(3.0, rel=1e-15)
    # symmetric splitting about the dark level
    assert row.eplus - row.e0 == pytest.approx(row.e0 - row.eminus, abs=1e-14)
    assert not row.degenerate


def test_zero_coupling_row_is_flagged_absent():
    # omega1N == 0 with t0tilde != 0: weight vanishes, ratios undefined
    with pytest.warns(AdiabaticRegimeWarning):
        params = ModelParams(ratio_r=0.0, beta=0.3, kappa0=0.0)
    row = aa_row(4, params)
    assert row.omega1N == 0.0
    assert row.t0tilde != 0.0
    assert row.weight == 0.0
    assert row.y_plus is None and row.y_minus is None
    assert row.l2_plus is None and row.l2_minus is None
    assert not row.degenerate


def test_doubly_singular_row_is_degenerate():
    with pytest.warns(AdiabaticRegimeWarning):
        params = ModelParams(ratio_r=0.0, beta=0.0, kappa0=0.0)
    row = aa_row(2, params)
    assert row.degenerate
    assert row.weight == 0.0
    assert row.rabi_freq == 0.0


def test_branch_ordering_and_weight_bound():
    rng = np.random.default_rng(7)
    for _ in range(500):
        row = aa_row(int(rng.integers(0, 201)), random_params(rng))
        assert row.eplus >= row.eminus
        assert row.rabi_freq >= 0.0
        assert 0.0 <= row.weight <= 0.125 + 1e-16
        assert row.eplus - row.eminus == pytest.approx(row.rabi_freq, rel=1e-12)


def test_root_identities():
    rng = np.random.default_rng(11)
    for _ in range(500):
        row = aa_row(int(rng.integers(0, 201)), random_params(rng))
        if row.omega1N == 0.0:
            continue
        assert row.y_plus * row.y_minus == pytest.approx(-2.0, abs=1e-10)
        assert row.y_plus - row.y_minus == pytest.approx(
            row.rabi_freq / row.omega1N, rel=1e-10
        )
        # eigenvector normalization holds exactly by construction
        assert (2.0 + row.y_plus**2) / row.l2_plus == 1.0
        assert (2.0 + row.y_minus**2) / row.l2_minus == 1.0


def test_stable_weight_equals_ratio_form():
    rng = np.random.default_rng(13)
    for _ in range(500):
        row = aa_row(int(rng.integers(0, 201)), random_params(rng))
        if row.omega1N == 0.0:
            continue
        ratio_form = row.y_plus**2 / row.l2_plus**2
        assert abs(row.weight - ratio_form) <= 1e-12


def test_batch_rows_match_scalar_rows():
    params = ModelParams(ratio_r=0.12, beta=0.4193, kappa0=0.02, alpha_sq=106.0)
    batch = aa_rows(params, 40)
    for n in (0, 1, 17, 40):
        assert batch[n] == aa_row(n, params)
    window = aa_rows(params, 40, n_min=30)
    assert [r.N for r in window] == list(range(30, 41))
    assert window[0] == batch[30]


def test_energy_fields():
    params = ModelParams(ratio_r=0.12, beta=0.4193, kappa0=0.02, alpha_sq=106.0)
    row = aa_row(106, params)
    b2 = 0.4193**2
    assert row.t0tilde == pytest.approx(-b2 + effective_kappa(params) + row.omega2N, rel=1e-13)
    assert row.e0 == pytest.approx(106.0 - b2 - row.omega2N, rel=1e-13)
    mid = 106.0 - effective_kappa(params) + 0.5 * row.t0tilde
    assert 0.5 * (row.eplus + row.eminus) == pytest.approx(mid, rel=1e-13)


def test_preserved_regime_weight_window():
    # at the preserved operating point the weight stays far below its 1/8
    # ceiling across the whole photon window carrying the coherent state
    params = ModelParams(ratio_r=0.12, beta=0.4193, kappa0=0.02, alpha_sq=106.0)
    rows = aa_rows(params, 126, n_min=86)
    weights = [row.weight for row in rows]
    assert max(weights) < 0.011  # vs 0.125 ceiling; frozen from this implementation
    assert rows[106 - 86].weight < 1e-9  # node of the bright-branch coupling


def test_suppression_mechanism_at_poisson_peak():
    # negative coupling makes both kappa_eff and omega2N negative near the
    # peak, pushing the weight toward zero over a wide window around alpha_sq
    params = ModelParams(ratio_r=0.2, beta=0.4717, kappa0=-0.7, alpha_sq=250.0)
    rows = aa_rows(params, 300)
    assert effective_kappa(params) < 0.0
    assert rows[250].omega2N < 0.0
    window_min = min(r.weight for r in rows[240:261])
    assert window_min < 1e-6
    assert window_min < rows[210].weight
    assert window_min < rows[290].weight


def test_aa_energies_match_displaced_subspace_oracle():
    # independent oracle: build the fixed-N three-state block numerically
    # from expm displacement overlaps and diagonalize it with numpy
    params = ModelParams(ratio_r=0.12, beta=0.4193, kappa0=0.02, alpha_sq=106.0)
    beta = params.beta
    k_eff = effective_kappa(params)
    ladder = np.diag(np.sqrt(np.arange(1.0, 200.0)), 1)
    d_one = expm(beta * (ladder.T - ladder))
    d_two = expm(2.0 * beta * (ladder.T - ladder))
    for n in (0, 5, 57, 106):
        ov1 = d_one[n, n]
        ov2 = d_two[n, n]
        om1 = -(params.ratio_r / SQRT2) * ov1
        om2 = -k_eff * ov2
        block = np.array(
            [
                [n - beta**2, om2, om1],
                [om2, n - beta**2, om1],
                [om1, om1, n - k_eff],
            ]
        )
        evals = np.linalg.eigvalsh(block)
        row = aa_row(n, params)
        assert sorted([row.e0, row.eplus, row.eminus]) == pytest.approx(
            evals.tolist(), rel=1e-10, abs=1e-10
        )


def test_row_input_validation():
    params = ModelParams(ratio_r=0.2, beta=0.1)
    with pytest.raises(DomainError):
        aa_row(-1, params)
    with pytest.raises(DomainError):
        aa_row(2.5, params)
    with pytest.raises(DomainError):
        aa_rows(params, 3, n_min=5)


def test_kappa_convention_changes_bright_branches():
    base = dict(ratio_r=0.2, beta=0.4717, kappa0=-0.7, alpha_sq=250.0)
    row_omega0 = aa_row(250, ModelParams(**base))
    row_omega = aa_row(
        250, ModelParams(**base, kappa_convention=KappaConvention.OMEGA_SCALED)
    )
    assert row_omega.t0tilde != row_omega0.t0tilde
    assert row_omega.weight < row_omega0.weight
