import numpy as np
import pytest
from scipy import integrate

from phasesep import CapabilityError, DoubleWell


def quadrature_theta(w, r):
    value, _ = integrate.quad(lambda t: np.sqrt(w.evaluate(t)), 0.0, r,
                              limit=200)
    return value


def test_quartic_point_values(quartic):
    assert quartic.evaluate(0.5, 0) == pytest.approx(0.0625, abs=1e-15)
    assert quartic.evaluate(1.0, 0) == 0.0
    assert quartic.evaluate(0.0, 0) == 0.0
    assert quartic.evaluate(0.5, 1) == pytest.approx(0.0, abs=1e-15)


def test_quartic_array_evaluation(quartic):
    ts = np.linspace(-1, 2, 7)
    np.testing.assert_allclose(quartic.evaluate(ts), ts**2 * (1 - ts) ** 2,
                               rtol=1e-15)


def test_first_integral_closed_form(quartic):
    assert quartic.first_integral(0.0) == 0.0
    assert quartic.first_integral(0.5) == pytest.approx(0.5**2 / 2 - 0.5**3 / 3,
                                                        abs=1e-15)
    assert quartic.first_integral(1.0) == pytest.approx(1.0 / 6.0, abs=1e-15)


def test_first_integral_matches_quadrature_oracle(quartic):
    for r in np.linspace(-2.0, 3.0, 26):
        assert quartic.first_integral(r) == pytest.approx(
            quadrature_theta(quartic, r), abs=1e-9)


def test_tension_constant(quartic):
    k = quartic.tension_constant()
    assert k == pytest.approx(1.0 / 6.0, abs=1e-15)
    assert k == quartic.first_integral(1.0)
    assert 2.0 * k == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_reflection_symmetry(quartic, rng):
    ts = rng.uniform(-3.0, 4.0, size=1000)
    np.testing.assert_allclose(quartic.evaluate(ts), quartic.evaluate(1.0 - ts),
                               atol=1e-14, rtol=1e-12)


def test_first_integral_monotone(quartic, rng):
    pairs = rng.uniform(-2.0, 3.0, size=(200, 2))
    for r1, r2 in pairs:
        lo, hi = min(r1, r2), max(r1, r2)
        assert quartic.first_integral(hi) >= quartic.first_integral(lo)


def test_growth_bounds(quartic, rng):
    assert quartic.growth_exponent == 4.0
    assert quartic.growth_constant == 0.125
    assert quartic.growth_threshold == 2.0
    ts = np.concatenate([rng.uniform(2.0, 10.0, 300),
                         rng.uniform(-10.0, -2.0, 300)])
    assert quartic.check_growth(ts)


def test_nonfinite_argument_rejected(quartic):
    with pytest.raises(ValueError):
        quartic.evaluate(np.nan)
    with pytest.raises(ValueError):
        quartic.first_integral(np.inf)
    with pytest.raises(ValueError):
        quartic.evaluate(0.5, order=2)


def test_optimal_profile_is_logistic(quartic):
    profile = quartic.optimal_profile()
    ts = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(profile(ts), 1.0 / (1.0 + np.exp(-ts)),
                               rtol=1e-14)
    assert profile(0.0) == pytest.approx(0.5)


def _quartic_table(n=4001, lo=-2.0, hi=3.0):
    ts = np.linspace(lo, hi, n)
    # make sure the wells are exact knots
    ts = np.unique(np.concatenate([ts, [0.0, 1.0]]))
    return ts, ts**2 * (1 - ts) ** 2


def test_tabulated_from_file_roundtrip(tmp_path, quartic):
    ts, ws = _quartic_table()
    path = tmp_path / "well.txt"
    path.write_text("# t W\n" + "\n".join(f"{t:.17g} {v:.17g}"
                                          for t, v in zip(ts, ws)) + "\n")
    tab = DoubleWell.from_file(path)
    assert tab.kind == "tabulated"
    for t in (0.0, 0.25, 0.5, 1.0):
        assert tab.evaluate(t) == pytest.approx(quartic.evaluate(t), abs=1e-7)
    # table interpolation biases the integral up by O(knot spacing squared)
    assert tab.tension_constant() == pytest.approx(1.0 / 6.0, abs=1e-5)


def test_tabulated_has_no_derivative():
    ts, ws = _quartic_table(n=101)
    tab = DoubleWell.tabulated(ts, ws)
    with pytest.raises(CapabilityError):
        tab.evaluate(0.5, order=1)


def test_tabulated_profile_close_to_logistic(quartic):
    ts, ws = _quartic_table()
    tab = DoubleWell.tabulated(ts, ws)
    profile = tab.optimal_profile()
    logistic = quartic.optimal_profile()
    xs = np.linspace(-4, 4, 17)
    np.testing.assert_allclose(profile(xs), logistic(xs), atol=5e-3)


def test_tabulated_validation():
    with pytest.raises(ValueError):
        DoubleWell.tabulated([0.0, 0.5, 0.5, 1.0], [0.0, 1.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        DoubleWell.tabulated([0.0, 0.5, 1.0], [0.0, -1.0, 0.0])
    with pytest.raises(ValueError):
        DoubleWell.tabulated([0.0, 0.5, 1.0], [0.5, 1.0, 0.0])
    with pytest.raises(ValueError):
        DoubleWell.tabulated([0.2, 0.5, 1.0], [0.0, 1.0, 0.0])


def test_tabulated_range_enforced():
    ts, ws = _quartic_table(n=101, lo=-0.5, hi=1.5)
    tab = DoubleWell.tabulated(ts, ws)
    with pytest.raises(ValueError):
        tab.evaluate(2.0)
    with pytest.raises(ValueError):
        tab.first_integral(-1.0)


def test_bad_table_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0.0 0.0 7\n1.0 0.0\n")
    with pytest.raises(ValueError, match="line 1"):
        DoubleWell.from_file(path)
