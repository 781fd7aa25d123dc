import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chordspectra.errors import DanglingChord
from chordspectra.spectra import CyclicPolicy, Mode, Spectrum, validate_class
from chordspectra.tracer import Diagram, classify, surface_count, trace


def spectrum(d: dict) -> Spectrum:
    return Spectrum.from_counts(d)


@pytest.mark.parametrize("i", [0, 1, 3])
def test_bare_backbone(i):
    d = Diagram.from_chords([i], [])
    comps = trace(d)
    assert len(comps) == 1
    assert comps[0].clusters == (i,) and str(comps[0]) == f"[{i}] U0"
    cls = classify(d)
    assert (cls.euler_index, cls.l, cls.spectrum) == (0, i, spectrum({(i,): 1}))


def test_rainbow():
    cls = classify(Diagram.from_chords([2], [((0, 0), (0, 1))]))
    assert cls.euler_index == 0
    assert cls.spectrum == spectrum({(0,): 1, (0, 0): 1})


def test_twisted_rainbow():
    d = Diagram.from_chords([2], [((0, 0), (0, 1))], twisted=[True], mode=Mode.NON_ORIENTED)
    comps = trace(d)
    assert len(comps) == 1 and comps[0].length == 3
    cls = classify(d)
    assert cls.euler_index == 1 and cls.spectrum == spectrum({(0, 0, 0): 1})


@pytest.mark.parametrize(
    "chords, genus, classes",
    [
        ([((0, 0), (0, 2)), ((0, 1), (0, 3))], 1, {(0, 0, 0, 0, 0): 1}),
        ([((0, 0), (0, 1)), ((0, 2), (0, 3))], 0, {(0,): 2, (0, 0, 0): 1}),
        ([((0, 0), (0, 3)), ((0, 1), (0, 2))], 0, {(0,): 1, (0, 0): 2}),
    ],
    ids=["crossing", "side-by-side", "nested"],
)
def test_four_vertex_diagrams(chords, genus, classes):
    cls = classify(Diagram.from_chords([4], chords))
    assert cls.euler_index == genus and cls.spectrum == spectrum(classes)
    assert validate_class(cls) == []


def test_chord_between_two_backbones():
    cls = classify(Diagram.from_chords([1, 1], [((0, 0), (1, 0))]))
    assert cls.euler_index == 0 and cls.spectrum == spectrum({(0, 0, 0, 0): 1})


def test_marked_points_land_in_clusters():
    # marked point between the ends of a rainbow sits on the inner boundary
    cls = classify(Diagram.from_chords([3], [((0, 0), (0, 2))]))
    assert cls.spectrum == spectrum({(1,): 1, (0, 0): 1})
    # marked points outside the rainbow sit on the outer boundary
    cls = classify(Diagram.from_chords([4], [((0, 1), (0, 2))]))
    assert cls.spectrum == spectrum({(0,): 1, (1, 1): 1})


def test_disconnected_diagram():
    d = Diagram.from_chords([2, 1], [((0, 0), (0, 1))])
    assert surface_count(d) == 2
    cls = classify(d)
    assert (cls.surfaces, cls.euler_index) == (2, 0)
    assert cls.spectrum == spectrum({(0,): 1, (1,): 1, (0, 0): 1})
    assert validate_class(cls) == []


def test_malformed_incidence():
    with pytest.raises(DanglingChord):
        Diagram.from_chords([2], [((0, 0), (0, 2))])
    with pytest.raises(DanglingChord):
        Diagram.from_chords([2], [((0, 0), (0, 0))])
    with pytest.raises(DanglingChord):
        trace(Diagram(((0, None),), (False,)))
    with pytest.raises(DanglingChord):
        trace(Diagram(((0, 0),), (True,), Mode.ORIENTED))


@st.composite
def diagrams(draw):
    sizes = draw(st.lists(st.integers(0, 5), min_size=1, max_size=3))
    slots = [(j, v) for j, s in enumerate(sizes) for v in range(s)]
    slots = draw(st.permutations(slots))
    k = draw(st.integers(0, len(slots) // 2))
    chords = [(slots[2 * c], slots[2 * c + 1]) for c in range(k)]
    mode = draw(st.sampled_from(list(Mode)))
    twisted = [draw(st.booleans()) and mode is Mode.NON_ORIENTED for _ in range(k)]
    return Diagram.from_chords(sizes, chords, twisted, mode)


def mirror(d: Diagram) -> Diagram:
    return Diagram(tuple(tuple(reversed(b)) for b in reversed(d.backbones)), d.twisted, d.mode)


@settings(max_examples=300, deadline=None)
@given(diagrams())
def test_traced_classes_satisfy_identities(d):
    cls = classify(d)
    assert validate_class(cls) == []
    comps = trace(d)
    assert sum(c.length for c in comps) == 2 * d.k + len(d.backbones)
    assert sum(c.marks for c in comps) == d.marked


@settings(max_examples=200, deadline=None)
@given(diagrams())
def test_mirror_image_has_same_class_up_to_reflection(d):
    a, b = classify(d), classify(mirror(d))
    assert a.euler_index == b.euler_index and a.spectrum == b.spectrum
    if d.mode is Mode.NON_ORIENTED:
        return  # boundaries of a twisted surface carry no coherent direction
    # on an oriented surface the mirror image reverses every boundary walk
    ra = classify(d, CyclicPolicy.ROTATION)
    rb = classify(mirror(d), CyclicPolicy.ROTATION)
    reversed_b = Spectrum.from_counts({r[::-1]: m for r, m in rb.spectrum.items}, CyclicPolicy.ROTATION)
    assert ra.spectrum == reversed_b
