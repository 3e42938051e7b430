from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from dsoclink.quantities import (AU, DecibelLoss, LengthM, PhotonEnergyJ, PowerW, db_to_linear,
                                 linear_to_db, photon_energy)


@pytest.mark.parametrize("db, expected", [(0.0, 1.0), (10.0, 0.1), (365.22, 3.005e-37)])
def test_db_to_linear_examples(db, expected):
    assert db_to_linear(db) == pytest.approx(expected, rel=1e-3)


def test_db_to_linear_rejects_non_finite():
    with pytest.raises(ValueError):
        db_to_linear(float("nan"))


@given(st.floats(min_value=-400, max_value=400))
def test_db_round_trip(db):
    assert linear_to_db(db_to_linear(db)) == pytest.approx(db, rel=1e-12, abs=1e-12)


def test_linear_to_db_rejects_non_positive():
    with pytest.raises(ValueError):
        linear_to_db(0.0)


@pytest.mark.parametrize("nm, joules", [(1550, 1.2816e-19), (1064, 1.8669e-19)])
def test_photon_energy_by_hand(nm, joules):
    # h c / lambda evaluated independently with the exact SI constants
    by_hand = 6.62607015e-34 * 299792458 / (nm * 1e-9)
    assert photon_energy(nm * 1e-9) == pytest.approx(by_hand, rel=1e-15)
    assert photon_energy(nm * 1e-9) == pytest.approx(joules, rel=1e-4)


@given(st.floats(min_value=1e-8, max_value=1e-4))
def test_photon_energy_halves_when_wavelength_doubles(lam):
    assert photon_energy(2 * lam) == pytest.approx(photon_energy(lam) / 2, rel=1e-14)


@given(st.floats(min_value=1e-8, max_value=1e-4), st.floats(min_value=1.001, max_value=10))
def test_photon_energy_decreasing(lam, k):
    assert photon_energy(lam * k) < photon_energy(lam)


@pytest.mark.parametrize("bad", [0.0, -1e-9])
def test_photon_energy_rejects_non_positive(bad):
    with pytest.raises(ValueError):
        photon_energy(bad)


def test_value_types_validate():
    with pytest.raises(ValueError):
        PowerW(-1.0)
    with pytest.raises(ValueError):
        LengthM(-1.0)
    with pytest.raises(ValueError):
        PhotonEnergyJ(0.0)
    with pytest.raises(ValueError):
        PowerW(math.inf)
    assert PowerW(2.0) * 2 == 4.0


def test_length_conversions():
    assert LengthM.from_au(1).value == AU == 149_597_870_700.0
    assert LengthM.from_km(225e6) == 225e9
    assert LengthM(AU * 2).au == pytest.approx(2.0)


def test_decibel_loss_linear():
    assert DecibelLoss(3.0).linear == pytest.approx(0.501187, rel=1e-5)
