import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqzcomb.comb import (
    CombConfig,
    comb_energy,
    s_to_squeeze_db,
    squeeze_db_to_s,
    tooth_amplitudes,
)
from sqzcomb.errors import DomainError, NotModeledError
from sqzcomb.numerics import bessel_j


def test_squeeze_conversion():
    assert squeeze_db_to_s(13.0) == pytest.approx(1.4967, abs=1e-4)
    assert math.exp(2 * squeeze_db_to_s(13.0)) == pytest.approx(19.95, rel=1e-3)
    assert math.exp(2 * squeeze_db_to_s(15.0)) == pytest.approx(31.62, rel=1e-3)
    with pytest.raises(DomainError):
        squeeze_db_to_s(-1.0)


@given(st.floats(0.0, 60.0))
def test_squeeze_round_trip(db):
    assert s_to_squeeze_db(squeeze_db_to_s(db)) == pytest.approx(db, rel=1e-12, abs=1e-12)


def test_amplitudes_and_parity():
    comb = CombConfig(carrier_nu=6534.36, depth=2.0, n_teeth=33)
    amps = tooth_amplitudes(comb)
    assert [a.n for a in amps] == list(range(17))
    for a in amps:
        assert a.amplitude == bessel_j(a.n, 2.0)
        assert a.lower_amplitude == bessel_j(-a.n, 2.0)
        assert abs(a.amplitude) <= 1.0


@given(st.floats(0.0, 12.0))
def test_energy_conserved_with_enough_teeth(m):
    comb = CombConfig(carrier_nu=1.0, depth=m, n_teeth=81)
    assert comb_energy(tooth_amplitudes(comb)) == pytest.approx(1.0, abs=1e-12)


def test_kappa():
    comb = CombConfig(carrier_nu=1.0, depth=2.0, alpha_mag=3.0, beta_mag=5.0, eta_d=0.64)
    assert comb.kappa(1) == pytest.approx(0.8 * 15 * bessel_j(1, 2.0))
    # J_0(3) < 0 but kappa stays non-negative
    assert bessel_j(0, 3.0) < 0
    assert CombConfig(carrier_nu=1.0, depth=3.0).kappa(0) == pytest.approx(-1e6 * bessel_j(0, 3.0))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_teeth": 32},
        {"n_teeth": 0},
        {"n_teeth": 1027},
        {"depth": -1.0},
        {"eta_d": 0.0},
        {"eta_d": 1.1},
        {"squeeze_s": -0.1},
        {"carrier_nu": 0.0},
        {"omega_mod_hz": 0.0},
        {"alpha_mag": -1.0},
    ],
)
def test_config_validation(kwargs):
    params = {"carrier_nu": 6534.36, **kwargs}
    with pytest.raises(DomainError):
        CombConfig(**params)


def test_squeeze_angle_not_modelled():
    with pytest.raises(NotModeledError):
        CombConfig(carrier_nu=1.0, squeeze_theta=0.1)
