"""Smoke tests for the Python bindings on the bundled Peru data."""

import math

import pytest

import mortkit


@pytest.fixture(scope="module")
def female():
    q = mortkit.load_q_csv(mortkit.data_dir() / "peru_female_q.csv")
    params = mortkit.load_params_csv(mortkit.data_dir() / "peru_params_female.csv")
    m = mortkit.impute_open_group(mortkit.q_to_m(q), params.alpha[-1],
                                  params.beta[-1], params.k)
    return q, params, m


def test_load_and_shape(female):
    q, params, m = female
    assert q.n_ages == 18
    assert q.n_periods == 14
    assert q.open_placeholder
    assert not m.open_placeholder
    assert q.at(0, 0) == pytest.approx(0.15044)
    assert len(params.k) == 14


def test_fit_matches_reference(female):
    _, _, m = female
    fit = mortkit.fit_lc(m)
    assert fit.explained == pytest.approx(0.9873, abs=2e-3)
    assert sum(fit.beta) == pytest.approx(1.0, abs=1e-9)
    assert sum(fit.k) == pytest.approx(0.0, abs=1e-9)
    assert fit.k[0] == pytest.approx(15.826, abs=0.05)


def test_forecast_and_projection(female):
    _, params, _ = female
    model = mortkit.fit_rw2(params.k)
    assert model.sigma == pytest.approx(0.605, abs=3e-3)

    forecast = mortkit.forecast_k(model, 6)
    assert forecast.khat[0] == pytest.approx(-15.740, abs=5e-3)
    assert forecast.se[5] == pytest.approx(5.770, abs=5e-3)

    e = mortkit.project_life_expectancy(params, forecast, params.grid())
    assert e[0][0] == pytest.approx(78.07, abs=0.05)

    lo, hi = mortkit.le_confidence_interval(params, forecast, params.grid(), 0.95)
    assert lo[0][0] == pytest.approx(77.33, abs=0.1)
    assert hi[0][0] == pytest.approx(78.79, abs=0.1)


def test_life_table_identities():
    grid = mortkit.AgeGrid.from_labels(["75-79", "80+"])
    table = mortkit.build_life_table([0.03664, 0.10717], grid)
    assert table.e[0] == pytest.approx(12.345, abs=1e-3)
    assert table.e[1] == pytest.approx(1.0 / 0.10717)
    # Round trip between the probability and rate identities.
    q = mortkit.q_from_m(0.02, 5.0, 2.5)
    assert mortkit.q_to_m_cell(q, 5.0, 2.5) == pytest.approx(0.02, rel=1e-12)


def test_errors_map_to_python_types():
    with pytest.raises(ValueError):
        mortkit.parse_abridged_table("age,1990\n0,abc\n1+,1.0\n")
    with pytest.raises(OSError):
        mortkit.load_q_csv("/no/such/file.csv")
    with pytest.raises(ValueError):
        mortkit.normal_quantile(2.0)


def test_report_bundle(female):
    _, params, _ = female
    forecast = mortkit.forecast_k(mortkit.fit_rw2(params.k), 3)
    report = mortkit.make_projection_report(params, forecast, params.grid(), 0.95,
                                            "smoke")
    assert report.periods == ["2020-25", "2025-30", "2030-35"]
    assert len(report.rates) == 18
    assert all(lo < e < hi for lo, e, hi in
               zip(report.ci_lo[0], report.life_expectancy[0], report.ci_hi[0]))
    assert math.isfinite(report.rates[17][2])
