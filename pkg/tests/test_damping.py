import math
from dataclasses import replace

import pytest

from qpcavity import damping


def test_gamma_sc_scaling(scales):
    g = damping.gamma_sc_1d(scales)
    assert g == pytest.approx(0.5, rel=1.0)
    assert damping.gamma_sc_1d(scales, 2 * scales.line_density) == pytest.approx(4 * g)
    assert damping.gamma_sc_1d(scales, 0.0) == 0


def test_gamma_sc_formula(scales):
    x = scales.line_density * scales.scattering_length**2 / scales.transverse_length
    expect = 72 * math.sqrt(3) * math.log(4 / 3) ** 2 * scales.transverse_frequency * x * x
    assert damping.gamma_sc_1d(scales) == pytest.approx(expect, rel=1e-14)


def test_three_body(cfg):
    assert damping.gamma_three_body(cfg.species, 1e20) == pytest.approx(0.174)
    assert damping.gamma_three_body(4e-42, 1e20) == pytest.approx(0.12)
    assert damping.gamma_three_body(cfg.species, 0.0) == 0
    assert damping.gamma_three_body(4e-42, 2e20) == pytest.approx(0.48)


def test_budget():
    r = damping.budget(0.5, 0.5)
    assert r.margins["gamma_sc_1d"] == 0.25 and r.ok
    assert damping.budget(0.0, 0.5).margins["gamma_sc_1d"] == 0
    assert not damping.budget(2.0, 0.5).ok
    with pytest.raises(ValueError):
        damping.budget(-1.0, 0.5)
