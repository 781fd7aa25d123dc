import pytest

from chordspectra.errors import TooManyChords
from chordspectra.oracle import (
    count_table,
    enumerate_diagrams,
    expected_total,
    is_connected,
    perfect_matchings,
    untwisted_restriction,
)
from chordspectra.spectra import BackboneSpectrum, Mode, Spectrum, catalan, double_factorial
from chordspectra.tracer import Diagram

E = BackboneSpectrum.unit
SECTORS = [E(2), E(4), E(5), BackboneSpectrum((0, 1, 0, 1)), BackboneSpectrum((0, 0, 2)), BackboneSpectrum((0, 2, 1))]


@pytest.mark.parametrize("n", range(5))
def test_perfect_matchings(n):
    matchings = list(perfect_matchings(list(range(2 * n))))
    assert len(matchings) == double_factorial(2 * n - 1)
    assert len({tuple(m) for m in matchings}) == len(matchings)


@pytest.mark.parametrize("b, k, mode, n", [(E(2), 1, Mode.ORIENTED, 1), (E(4), 2, Mode.ORIENTED, 3),
                                           (E(2), 1, Mode.NON_ORIENTED, 2)])
def test_diagram_counts(b, k, mode, n):
    assert len(list(enumerate_diagrams(b, k, mode))) == n == expected_total(b, k, mode)


@pytest.mark.parametrize("b", SECTORS, ids=str)
@pytest.mark.parametrize("mode", list(Mode))
def test_enumeration_is_exhaustive_and_unique(b, mode):
    for k in range(min(b.vertices // 2, 3) + 1):
        seen = [(d.backbones, d.twisted) for d in enumerate_diagrams(b, k, mode)]
        assert len(seen) == len(set(seen)) == expected_total(b, k, mode)


def test_too_many_chords():
    with pytest.raises(TooManyChords):
        list(enumerate_diagrams(E(2), 2))
    with pytest.raises(TooManyChords):
        count_table(E(2), 2)


def test_is_connected():
    assert is_connected(Diagram.from_chords([1, 1], [((0, 0), (1, 0))]))
    assert not is_connected(Diagram.from_chords([1, 1], []))
    assert is_connected(Diagram.from_chords([4], [((0, 0), (0, 3))]))


def test_four_vertex_table():
    table = count_table(E(4), 2)
    got = {(c.euler_index, c.spectrum): n for c, n in table.entries.items()}
    assert got == {
        (0, Spectrum.from_counts({(0,): 1, (0, 0): 2})): 1,
        (0, Spectrum.from_counts({(0,): 2, (0, 0, 0): 1})): 1,
        (1, Spectrum.from_counts({(0, 0, 0, 0, 0): 1})): 1,
    }


def test_two_vertex_nonoriented_table():
    table = count_table(E(2), 1, Mode.NON_ORIENTED)
    got = {(c.euler_index, c.spectrum): n for c, n in table.entries.items()}
    assert got == {
        (0, Spectrum.from_counts({(0,): 1, (0, 0): 1})): 1,
        (1, Spectrum.from_counts({(0, 0, 0): 1})): 1,
    }


@pytest.mark.parametrize("k", range(1, 5))
def test_single_backbone_classical_counts(k):
    table = count_table(E(2 * k), k)
    assert table.total == double_factorial(2 * k - 1)
    assert sum(n for c, n in table.entries.items() if c.euler_index == 0) == catalan(k)


def test_connected_only_filters_disconnected_diagrams():
    b = BackboneSpectrum((0, 1, 1))
    full = count_table(b, 1, connected_only=False)
    assert full.total == expected_total(b, 1)
    connected = count_table(b, 1)
    # two chord placements join the backbones, the rainbow on the 2-vertex backbone does not
    assert connected.total == 2 * len(b.arrangements())
    assert all(c.surfaces == 1 for c in connected.entries)
    assert {c.surfaces for c in full.entries} == {1, 2}


def test_parallel_matches_serial():
    b = BackboneSpectrum((0, 1, 0, 2))
    assert count_table(b, 3, Mode.NON_ORIENTED, workers=3) == count_table(b, 3, Mode.NON_ORIENTED)


@pytest.mark.parametrize("b", SECTORS, ids=str)
def test_untwisted_restriction_is_oriented_table(b):
    for k in range(min(b.vertices // 2, 3) + 1):
        assert untwisted_restriction(b, k) == count_table(b, k, Mode.ORIENTED)
        assert count_table(b, k, Mode.NON_ORIENTED).total == 2 ** k * count_table(b, k).total
