import sys
import warnings

import pytest

from qpcavity import kernels
from qpcavity.config import load_preset
from qpcavity.ground import ideal_box_ground_state, solve_ground_state
from qpcavity.params import IdealBox


@pytest.fixture(scope="session")
def cfg():
    return load_preset()


@pytest.fixture(scope="session")
def scales(cfg):
    return cfg.scales()


@pytest.fixture(scope="session")
def tanh_ground(cfg, scales):
    return solve_ground_state(cfg.trap, scales, cfg.grid.grid(scales), cfg.grid.options())


@pytest.fixture(scope="session")
def box_ground(cfg, scales):
    box = cfg.with_wall(IdealBox())
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return solve_ground_state(box.trap, scales, cfg.grid.grid(scales), cfg.grid.options())


@pytest.fixture(scope="session")
def ideal_ground(scales):
    return ideal_box_ground_state(scales)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
