import numpy as np
import pytest

from tradeoff.optimizer import (
    TradeoffCurve,
    compute_curves,
    critical_rate,
    minimize_profile,
    qct_curve,
)
from tradeoff.profiles import ClassicalChannel, entropic_profile
from tradeoff.states import ensemble_stats

# Pinned outputs of deterministic runs on the |0>/|+> pair (multistarts=16,
# seed=0, resolution=40); cross-checked against the exhaustive channel grid.
FROZEN_OBJECTIVE_XC = {0.5: 0.5000000000069709, 1.0: 0.6008760366928562,
                       2.0: 0.6008760366928561}
FROZEN_OBJECTIVE_XBC = {1.0: 0.9999999999987366}
FROZEN_QCT = {0.25: 0.4460719628466642, 0.5: 0.2938365879293,
              0.75: 0.1439357476715407}
FROZEN_RSP = {0.7: 0.4397629726817988, 0.85: 0.2078234995704327}
FROZEN_HC = 0.013174026769327716


def test_mu_zero_answered_analytically(zero_plus):
    stats = ensemble_stats(zero_plus)
    channel, prof = minimize_profile(zero_plus, 0.0)
    np.testing.assert_allclose(channel.matrix[:, :2], np.eye(2))
    assert prof.SBgC == pytest.approx(stats.Sbar, abs=1e-12)
    assert prof.SXC == pytest.approx(stats.H, abs=1e-12)


def test_scalarized_minimum_pinned(zero_plus):
    for mu, expected in FROZEN_OBJECTIVE_XC.items():
        _, prof = minimize_profile(zero_plus, mu, "XC", multistarts=16, seed=0)
        assert prof.SBgC + mu * prof.SXC == pytest.approx(expected, abs=1e-9)
    for mu, expected in FROZEN_OBJECTIVE_XBC.items():
        _, prof = minimize_profile(zero_plus, mu, "XBC", multistarts=16, seed=0)
        assert prof.SBgC + mu * prof.SXBC == pytest.approx(expected, abs=1e-9)


def test_minimize_profile_validation(zero_plus):
    with pytest.raises(ValueError):
        minimize_profile(zero_plus, -0.5)
    with pytest.raises(ValueError):
        minimize_profile(zero_plus, float("nan"))
    with pytest.raises(ValueError):
        minimize_profile(zero_plus, 1.0, kind="XB")
    with pytest.raises(ValueError):
        minimize_profile(zero_plus, 1.0, multistarts=0)


def test_frozen_curve_values(zp_curves):
    for R, expected in FROZEN_QCT.items():
        assert zp_curves.qct.value(R) == pytest.approx(expected, abs=1e-3)
    for R, expected in FROZEN_RSP.items():
        assert zp_curves.rsp.value(R) == pytest.approx(expected, abs=1e-3)


def test_curves_match_exhaustive_channel_grid(zp_curves, zp_oracle):
    # Both the solver and the grid give upper bounds on the true curves, so
    # they must agree within the combined discretization error.
    for R in (0.1, 0.3, 0.5, 0.7, 0.9):
        assert abs(zp_curves.qct.value(R) - zp_oracle.qct_value(R)) <= 8e-3
    for R in (0.65, 0.75, 0.85, 0.95):
        assert abs(zp_curves.rsp.value(R) - zp_oracle.rsp_value(R)) <= 8e-3


def test_curve_endpoints(zp_curves):
    stats = zp_curves.stats
    assert zp_curves.qct.domain == (0.0, pytest.approx(stats.H))
    assert zp_curves.qct.value(0.0) == pytest.approx(stats.S, abs=1e-9)
    assert zp_curves.qct.value(stats.H) == pytest.approx(stats.Sbar, abs=1e-9)
    assert zp_curves.rsp.domain[0] == pytest.approx(stats.chi)
    assert zp_curves.rsp.value(stats.chi) == pytest.approx(stats.S, abs=1e-6)
    assert zp_curves.rsp.value(stats.H) == pytest.approx(stats.Sbar, abs=1e-9)


def test_value_outside_domain(zp_curves):
    stats = zp_curves.stats
    assert zp_curves.rsp.value(0.0) is None
    assert zp_curves.rsp.value(stats.chi - 1.0) is None
    assert zp_curves.qct.value(stats.H + 5.0) == pytest.approx(stats.Sbar)
    assert zp_curves.qct.value(-1.0) is None


def test_vertex_channels_reproduce_their_rates(zp_curves, zero_plus):
    # Every stored vertex channel must spend its classical budget: the
    # recomputed constraint matches the vertex rate on the decreasing part.
    stats = zp_curves.stats
    for curve, attr in ((zp_curves.qct, "SXC"), (zp_curves.rsp, "SXBC")):
        for (R, value), channel in zip(curve.samples, curve.channels):
            prof = entropic_profile(zero_plus, channel, stats)
            constraint = min(max(getattr(prof, attr), curve.domain[0]), stats.H)
            assert abs(constraint - R) <= 1e-2
            assert abs(prof.SBgC - value) <= 1e-2


def test_qubit_rate_reachable_on_ebit_curve(zp_curves):
    # Trading the quantum register for entanglement: the point
    # (R + Q*(R) - Sbar, Q*(R)) lies on the ebit curve past the kink.
    stats, hc = zp_curves.stats, zp_curves.critical.Hc
    for R in np.linspace(hc, stats.H, 10):
        q = zp_curves.qct.value(float(R))
        e = zp_curves.rsp.value(float(R) + q - stats.Sbar)
        assert e is not None and abs(e - q) <= 2e-2


def test_ebit_rate_reachable_on_qubit_curve(zp_curves):
    stats = zp_curves.stats
    for R in np.linspace(stats.chi, stats.H, 10):
        e = zp_curves.rsp.value(float(R))
        q = zp_curves.qct.value(float(R) - e + stats.Sbar)
        assert q is not None and abs(q - e) <= 2e-2


def test_critical_rate_orthonormal(ortho_curves):
    assert ortho_curves.critical.found
    assert ortho_curves.critical.Hc == pytest.approx(1.0, abs=1e-2)


def test_critical_rate_zero_plus(zp_curves):
    assert zp_curves.critical.found
    assert zp_curves.critical.Hc == pytest.approx(FROZEN_HC, abs=2e-3)


def test_critical_rate_requires_qct(zp_curves):
    with pytest.raises(ValueError):
        critical_rate(zp_curves.rsp, zp_curves.stats.S)


def test_critical_rate_matches_oracle_departure(zp_curves, zp_oracle):
    # Cross-check against the brute-force grid: Hc must sit within 5e-2 of
    # the rate where the oracle curve departs the slope -1 line Q = S - R.
    stats = zp_curves.stats
    grid = np.linspace(0.0, stats.H, 101)
    departure = 0.0
    for r in grid:
        if abs(zp_oracle.qct_value(float(r)) - (stats.S - float(r))) > 5e-3:
            break
        departure = float(r)
    assert abs(zp_curves.critical.Hc - departure) <= 5e-2


def test_curve_constructor_validation():
    with pytest.raises(ValueError):
        TradeoffCurve(kind="QCT", samples=(), domain=(0.0, 1.0), floor=0.0,
                      channels=())
    with pytest.raises(ValueError):
        TradeoffCurve(kind="QCT", samples=((0.0, 1.0), (0.0, 0.5)),
                      domain=(0.0, 1.0), floor=0.0, channels=(None, None))
    with pytest.raises(ValueError):
        TradeoffCurve(kind="QCT", samples=((0.0, 0.2), (1.0, 0.8)),
                      domain=(0.0, 1.0), floor=0.0, channels=(None, None))
    with pytest.raises(ValueError):  # concave kink
        TradeoffCurve(kind="QCT",
                      samples=((0.0, 1.0), (0.5, 0.9), (1.0, 0.0)),
                      domain=(0.0, 1.0), floor=0.0,
                      channels=(None, None, None))


def test_resolution_validation(zero_plus):
    with pytest.raises(ValueError):
        qct_curve(zero_plus, resolution=1)
    with pytest.raises(ValueError):
        qct_curve(zero_plus, multistarts=0)


def test_iteration_cap_reported(zero_plus):
    curve = qct_curve(zero_plus, resolution=5, multistarts=2, max_iter=1)
    assert curve.diagnostics
    assert "iteration cap" in curve.diagnostics[0]


def test_seed_and_worker_determinism(zero_plus):
    a = compute_curves(zero_plus, resolution=8, multistarts=4, seed=3)
    b = compute_curves(zero_plus, resolution=8, multistarts=4, seed=3)
    c = compute_curves(zero_plus, resolution=8, multistarts=4, seed=3,
                       workers=2)
    assert a.qct.samples == b.qct.samples == c.qct.samples
    assert a.rsp.samples == b.rsp.samples == c.rsp.samples
    other = compute_curves(zero_plus, resolution=8, multistarts=4, seed=4)
    assert a.qct.samples != other.qct.samples
