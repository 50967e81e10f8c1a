import pytest

from rabi_ent import (
    AxisRange,
    CapacityError,
    DomainError,
    KappaConvention,
    ModelParams,
    ScanSpec,
    grid_scan,
    objective,
    refine,
)

FIG3_FIXED = {"ratio_r": 0.12, "kappa0": 0.02, "alpha_sq": 106.0}


def test_objective_zero_coupling_envelope():
    # weight 1/8 and a single frequency 2r: the envelope tops out at 1/4
    params = ModelParams(ratio_r=0.2, beta=0.0, kappa0=0.0, alpha_sq=9.0)
    value = objective(params, horizon=20.0, time_points=2000)
    assert value == pytest.approx(0.25, abs=1e-4)


def test_objective_validation():
    params = ModelParams(ratio_r=0.2, beta=0.1)
    with pytest.raises(DomainError):
        objective(params, horizon=0.0)
    with pytest.raises(DomainError):
        objective(params, horizon=10.0, time_points=1)


def test_axis_range_validation():
    with pytest.raises(DomainError):
        AxisRange(0.5, 0.3, 5)
    with pytest.raises(DomainError):
        AxisRange(0.3, 0.5, 1)
    assert AxisRange(0.3, 0.5, 3).grid() == pytest.approx([0.3, 0.4, 0.5])


def test_scan_spec_partition_checks():
    with pytest.raises(DomainError):
        ScanSpec(ranges={}, fixed={"beta": 0.1}, horizon=10.0)  # missing params
    with pytest.raises(DomainError):
        ScanSpec(
            ranges={"beta": AxisRange(0.1, 0.2, 2)},
            fixed={"beta": 0.1, "ratio_r": 0.2, "kappa0": 0.0, "alpha_sq": 4.0},
            horizon=10.0,
        )
    with pytest.raises(DomainError):
        ScanSpec(
            ranges={"gamma": AxisRange(0.1, 0.2, 2)},
            fixed={"beta": 0.1, "ratio_r": 0.2, "kappa0": 0.0, "alpha_sq": 4.0},
            horizon=10.0,
        )


def test_grid_scan_degenerate_single_point():
    spec = ScanSpec(
        ranges={},
        fixed={"beta": 0.0, "ratio_r": 0.2, "kappa0": 0.0, "alpha_sq": 9.0},
        horizon=20.0,
        time_points=500,
    )
    result = grid_scan(spec)
    assert result.objectives.shape == (1,)
    params = ModelParams(ratio_r=0.2, beta=0.0, kappa0=0.0, alpha_sq=9.0)
    assert result.best_objective == objective(params, 20.0, 500)
    assert result.best_point == {}


def test_grid_scan_best_is_minimum():
    spec = ScanSpec(
        ranges={"beta": AxisRange(0.0, 0.4, 5), "kappa0": AxisRange(-0.2, 0.2, 3)},
        fixed={"ratio_r": 0.2, "alpha_sq": 9.0},
        horizon=40.0,
        time_points=300,
    )
    result = grid_scan(spec)
    assert result.objectives.shape == (15,)
    assert result.points.shape == (15, 2)
    assert result.best_objective <= result.objectives.min() + 0.0
    assert result.axis_names == ("beta", "kappa0")
    # best point actually evaluates to the reported objective
    params = ModelParams(
        ratio_r=0.2, alpha_sq=9.0, kappa_convention=spec.kappa_convention, **result.best_point
    )
    assert objective(params, 40.0, 300) == result.best_objective


def test_grid_scan_ceiling():
    spec = ScanSpec(
        ranges={"beta": AxisRange(0.0, 0.4, 50), "alpha_sq": AxisRange(1.0, 20.0, 50)},
        fixed={"ratio_r": 0.2, "kappa0": 0.0},
        horizon=10.0,
        grid_ceiling=100,
    )
    with pytest.raises(CapacityError):
        grid_scan(spec)


def test_kappa_convention_inert_at_zero_kappa():
    kwargs = dict(
        ranges={"beta": AxisRange(0.0, 0.5, 6)},
        fixed={"ratio_r": 0.2, "kappa0": 0.0, "alpha_sq": 9.0},
        horizon=30.0,
        time_points=300,
    )
    a = grid_scan(ScanSpec(**kwargs))
    b = grid_scan(ScanSpec(**kwargs, kappa_convention=KappaConvention.OMEGA_SCALED))
    assert a.objectives == pytest.approx(b.objectives, abs=0.0)


def test_negative_kappa_reduces_objective_toward_fig4_point():
    objectives = []
    for kappa0 in (0.0, -0.35, -0.7):
        params = ModelParams(ratio_r=0.2, beta=0.4717, kappa0=kappa0, alpha_sq=250.0)
        objectives.append(objective(params, horizon=600.0, time_points=1200))
    assert objectives[0] > objectives[1] > objectives[2]


def test_refine_converges_on_synthetic_quadratic():
    calls = []

    def quad(point):
        calls.append(dict(point))
        return (point["beta"] - 0.4) ** 2 + (point["alpha_sq"] - 16.0) ** 2

    result = refine(
        {"beta": 0.55, "alpha_sq": 18.0},
        {"beta": 0.05, "alpha_sq": 0.5},
        max_iters=400,
        ftol=1e-14,
        objective_fn=quad,
    )
    assert result.best_point["beta"] == pytest.approx(0.4, abs=1e-4)
    assert result.best_point["alpha_sq"] == pytest.approx(16.0, abs=1e-4)
    assert result.metadata["converged"]
    assert calls  # the seam was exercised


def test_refine_trace_strictly_improving():
    def quad(point):
        return (point["beta"] - 0.1) ** 2

    result = refine(
        {"beta": 0.8}, {"beta": 0.1}, max_iters=100, ftol=1e-12, objective_fn=quad
    )
    values = [v for _, v in result.trace]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[-1] <= values[0]


def test_refine_clamps_to_bounds():
    # unconstrained minimum at beta = -0.2 sits outside the box
    def quad(point):
        return (point["beta"] + 0.2) ** 2

    result = refine(
        {"beta": 0.5},
        {"beta": 0.2},
        max_iters=200,
        ftol=1e-12,
        bounds={"beta": (0.0, 1.0)},
        objective_fn=quad,
    )
    assert 0.0 <= result.best_point["beta"] <= 1.0
    assert result.best_point["beta"] == pytest.approx(0.0, abs=1e-6)


def test_refine_rejects_start_outside_bounds():
    with pytest.raises(DomainError):
        refine(
            {"beta": 2.0},
            {"beta": 0.1},
            bounds={"beta": (0.0, 1.0)},
            objective_fn=lambda point: 0.0,
        )


def test_refine_requires_an_objective():
    with pytest.raises(DomainError):
        refine({"beta": 0.5}, {"beta": 0.1})


def test_refine_descent_contract_on_model_objective():
    spec = ScanSpec(
        ranges={"beta": AxisRange(0.3, 0.5, 2)},
        fixed=FIG3_FIXED,
        horizon=100.0,
        time_points=400,
    )
    start = {"beta": 0.4193}
    start_value = objective(
        ModelParams(beta=0.4193, **FIG3_FIXED), horizon=100.0, time_points=400
    )
    result = refine(
        start, {"beta": 0.01}, max_iters=40, bounds={"beta": (0.3, 0.5)}, spec=spec
    )
    assert result.best_objective <= start_value
    assert 0.3 <= result.best_point["beta"] <= 0.5
