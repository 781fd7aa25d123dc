import time

import pytest

from chordspectra.cutjoin import solve_connected, tables_from_parts
from chordspectra.oracle import count_table
from chordspectra.series import Truncation
from chordspectra.spectra import Mode

# Sectors with sum i*b_i <= 8 and at most two backbones.
SWEEP = {
    Mode.ORIENTED: Truncation(k_max=4, b_max=2, v_max=8, vertex_max=8),
    Mode.NON_ORIENTED: Truncation(k_max=3, b_max=2, v_max=8, vertex_max=8),
}

ACCEPTANCE_LINES: list[str] = []


class Sweep:
    """Recursion and oracle tables over the acceptance sectors of one mode."""

    def __init__(self, mode: Mode):
        self.mode = mode
        self.truncation = SWEEP[mode]
        start = time.perf_counter()
        self.parts = solve_connected(self.truncation, mode)
        self.recursion = tables_from_parts(self.parts, mode)
        self.oracle = {key: count_table(key[0], key[1], mode) for key in self.recursion}
        self.seconds = time.perf_counter() - start


_sweeps: dict[Mode, Sweep] = {}


def get_sweep(mode: Mode) -> Sweep:
    if mode not in _sweeps:
        _sweeps[mode] = Sweep(mode)
    return _sweeps[mode]


@pytest.fixture(scope="session")
def oriented_sweep() -> Sweep:
    return get_sweep(Mode.ORIENTED)


@pytest.fixture(scope="session")
def nonoriented_sweep() -> Sweep:
    return get_sweep(Mode.NON_ORIENTED)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
