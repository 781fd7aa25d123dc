"""Boundary tracing on the fattened surface of a partial chord diagram.

Ribbon model.  Every backbone is thickened to a rectangle whose top side is
cut by the chord attachments into *top arcs*; the marked points sit on the
top arcs.  The remaining part of the rectangle boundary (right end, bottom,
left end) is the single *underside* of the backbone.  Each chord is a band
with two sides.  The boundary of the surface is therefore a 2-regular graph
on "ports" whose edges alternate between top arcs and length elements
(chord sides and undersides); its cycles are the boundary components.

Ports of a backbone ``j`` are ``("L", j)`` and ``("R", j)`` at its two ends
and ``("l", j, v)``/``("r", j, v)`` just left/right of a chord end at vertex
``v``.  An untwisted band joins the left port of one end to the right port
of the other (for both sides), a twisted band joins left to left and right
to right.  Walks start on a top arc heading right-to-left, which keeps the
surface on the left-hand side in the oriented case.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import DanglingChord, NonIntegerGenus
from .spectra import (
    DEFAULT_POLICY,
    BackboneSpectrum,
    CyclicPolicy,
    DiagramClass,
    Mode,
    Spectrum,
    canonical_tuple,
    class_key,
)

Role = Union[int, None]  # None is a marked point, an int is a chord id
Port = tuple


@dataclass(frozen=True)
class ChordSide:
    chord: int
    side: str  # "+" or "-"

    def __str__(self) -> str:
        return f"C{self.chord}{self.side}"


@dataclass(frozen=True)
class Underside:
    backbone: int

    def __str__(self) -> str:
        return f"U{self.backbone}"


LengthElement = Union[ChordSide, Underside]


@dataclass(frozen=True)
class Diagram:
    """A concrete partial chord diagram.

    ``backbones[j][v]`` is ``None`` for a marked point or the id of the chord
    ending there.  Chord ids are ``0..k-1`` and ``twisted[c]`` flags chord
    ``c``; in oriented mode every flag must be false.
    """

    backbones: tuple[tuple[Role, ...], ...]
    twisted: tuple[bool, ...] = ()
    mode: Mode = Mode.ORIENTED

    @classmethod
    def from_chords(
        cls,
        sizes: Sequence[int],
        chords: Iterable[tuple[tuple[int, int], tuple[int, int]]],
        twisted: Sequence[bool] | None = None,
        mode: Mode = Mode.ORIENTED,
    ) -> "Diagram":
        """Build a diagram from backbone sizes and chord endpoints ``((j, v), (j', v'))``."""
        roles: list[list[Role]] = [[None] * s for s in sizes]
        chords = list(chords)
        for cid, ends in enumerate(chords):
            for j, v in ends:
                if not (0 <= j < len(roles) and 0 <= v < len(roles[j])):
                    raise DanglingChord(f"chord {cid} ends outside the diagram at {(j, v)}")
                if roles[j][v] is not None:
                    raise DanglingChord(f"vertex {(j, v)} carries two chord ends")
                roles[j][v] = cid
        tw = tuple(bool(t) for t in twisted) if twisted is not None else (False,) * len(chords)
        return cls(tuple(tuple(r) for r in roles), tw, mode)

    @property
    def k(self) -> int:
        return len(self.twisted)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.backbones)

    @property
    def marked(self) -> int:
        return sum(1 for b in self.backbones for r in b if r is None)

    def chord_ends(self) -> list[list[tuple[int, int]]]:
        """Endpoints of every chord in left-to-right order; raises on malformed incidence."""
        ends: list[list[tuple[int, int]]] = [[] for _ in self.twisted]
        for j, bb in enumerate(self.backbones):
            for v, role in enumerate(bb):
                if role is None:
                    continue
                if not (isinstance(role, int) and 0 <= role < len(ends)):
                    raise DanglingChord(f"unknown chord id {role!r} at {(j, v)}")
                ends[role].append((j, v))
        for cid, e in enumerate(ends):
            if len(e) != 2:
                raise DanglingChord(f"chord {cid} has {len(e)} ends")
        if self.mode is Mode.ORIENTED and any(self.twisted):
            raise DanglingChord("twisted chord in an oriented diagram")
        return ends


@dataclass(frozen=True)
class BoundaryComponent:
    """One boundary cycle: ``clusters[i]`` marked points precede ``elements[i]``."""

    clusters: tuple[int, ...]
    elements: tuple[LengthElement, ...]

    @property
    def length(self) -> int:
        return len(self.elements)

    @property
    def marks(self) -> int:
        return sum(self.clusters)

    def canonical(self, policy: CyclicPolicy = DEFAULT_POLICY) -> tuple[int, ...]:
        return canonical_tuple(self.clusters, policy)

    def __str__(self) -> str:
        return " ".join(f"[{c}] {e}" for c, e in zip(self.clusters, self.elements))


def _boundary_graph(d: Diagram):
    ends = d.chord_ends()
    arc_of: dict[Port, tuple[Port, int]] = {}
    element_of: dict[Port, tuple[Port, LengthElement]] = {}

    def link_arc(a: Port, b: Port, marks: int) -> None:
        arc_of[a] = (b, marks)
        arc_of[b] = (a, marks)

    def link_element(a: Port, b: Port, el: LengthElement) -> None:
        element_of[a] = (b, el)
        element_of[b] = (a, el)

    for j, bb in enumerate(d.backbones):
        prev: Port = ("L", j)
        marks = 0
        for v, role in enumerate(bb):
            if role is None:
                marks += 1
                continue
            link_arc(prev, ("l", j, v), marks)
            prev, marks = ("r", j, v), 0
        link_arc(prev, ("R", j), marks)
        link_element(("R", j), ("L", j), Underside(j))

    for cid, ((ja, va), (jb, vb)) in enumerate(ends):
        if d.twisted[cid]:
            link_element(("l", ja, va), ("l", jb, vb), ChordSide(cid, "+"))
            link_element(("r", ja, va), ("r", jb, vb), ChordSide(cid, "-"))
        else:
            link_element(("l", ja, va), ("r", jb, vb), ChordSide(cid, "+"))
            link_element(("r", ja, va), ("l", jb, vb), ChordSide(cid, "-"))
    return arc_of, element_of


def trace(d: Diagram, policy: CyclicPolicy = DEFAULT_POLICY) -> list[BoundaryComponent]:
    """Boundary components of the surface of ``d``, sorted by canonical class."""
    arc_of, element_of = _boundary_graph(d)
    seen: set[Port] = set()
    components = []
    # arcs are entered at their east (right-hand) port
    east_ports = [p for p in arc_of if p[0] in ("l", "R")]
    east_ports.sort(key=lambda p: (p[1], p[2] if len(p) > 2 else (-1 if p[0] == "L" else 1 << 30)))
    for start in east_ports:
        if start in seen:
            continue
        clusters, elements = [], []
        port = start
        while True:
            seen.add(port)
            west, marks = arc_of[port]
            seen.add(west)
            clusters.append(marks)
            port, el = element_of[west]
            elements.append(el)
            if port == start:
                break
        components.append(BoundaryComponent(tuple(clusters), tuple(elements)))
    components.sort(key=lambda c: (class_key(c.canonical(policy)), str(c)))
    return components


def surface_count(d: Diagram) -> int:
    """Number of connected pieces of the fattened surface (backbones linked by chords)."""
    parent = list(range(len(d.backbones)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (ja, _), (jb, _) in d.chord_ends():
        parent[find(ja)] = find(jb)
    return len({find(j) for j in range(len(parent))})


def classify(d: Diagram, policy: CyclicPolicy = DEFAULT_POLICY) -> DiagramClass:
    """Full type of ``d``.  For a disconnected diagram the Euler index is the
    sum of the genera (or cross-cap numbers) of its pieces."""
    comps = trace(d, policy)
    spectrum = Spectrum.from_tuples((c.clusters for c in comps), policy)
    b, k, n = len(d.backbones), d.k, len(comps)
    c = surface_count(d)
    deficit = 2 * c - (b - k + n)
    if d.mode is Mode.ORIENTED:
        if deficit % 2:
            raise NonIntegerGenus(f"odd 2c-b+k-n={deficit} for an oriented diagram")
        index = deficit // 2
    else:
        index = deficit
    return DiagramClass(
        mode=d.mode,
        euler_index=index,
        k=k,
        l=d.marked,
        backbones=BackboneSpectrum.from_sizes(d.sizes),
        spectrum=spectrum,
        surfaces=c,
    )
