"""Brute-force enumeration and tabulation of partial chord diagrams.

This is the ground truth the cut-and-join engine is checked against, so it
deliberately uses nothing but the boundary tracer.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations, product
from typing import Iterator, Sequence

from .errors import TooManyChords
from .spectra import DEFAULT_POLICY, BackboneSpectrum, CountTable, CyclicPolicy, Mode
from .tracer import Diagram, classify, surface_count


def perfect_matchings(points: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    """Pair up ``points`` in every possible way (least unmatched point first)."""
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for idx, partner in enumerate(rest):
        remaining = rest[:idx] + rest[idx + 1:]
        for tail in perfect_matchings(remaining):
            yield [(first, partner)] + tail


def _build(sizes: tuple[int, ...], pairs, twists, mode: Mode) -> Diagram:
    locate = [(j, v) for j, s in enumerate(sizes) for v in range(s)]
    roles: list[list] = [[None] * s for s in sizes]
    for cid, (a, b) in enumerate(pairs):
        for g in (a, b):
            j, v = locate[g]
            roles[j][v] = cid
    return Diagram(tuple(tuple(r) for r in roles), tuple(twists), mode)


def _check(b: BackboneSpectrum, k: int) -> None:
    if k < 0:
        raise ValueError("negative chord count")
    if 2 * k > b.vertices:
        raise TooManyChords(f"{k} chords need {2 * k} vertices but the backbones carry {b.vertices}")


def _tasks(b: BackboneSpectrum, k: int) -> list[tuple[tuple[int, ...], tuple[int, int] | None]]:
    """Disjoint search subtrees: one per backbone arrangement and first chord."""
    V = b.vertices
    tasks = []
    for sizes in b.arrangements():
        if k == 0:
            tasks.append((sizes, None))
        else:
            tasks.extend((sizes, (u, v)) for u in range(V) for v in range(u + 1, V))
    return tasks


def _enumerate_task(sizes, first, k: int, mode: Mode) -> Iterator[Diagram]:
    twist_choices = list(product((False, True), repeat=k)) if mode is Mode.NON_ORIENTED else [(False,) * k]
    V = sum(sizes)
    if first is None:
        yield _build(sizes, [], (), mode)
        return
    u, v = first
    pool = [w for w in range(u + 1, V) if w != v]
    for others in combinations(pool, 2 * k - 2):
        for matching in perfect_matchings(list(others)):
            pairs = [(u, v)] + matching
            for twists in twist_choices:
                yield _build(sizes, pairs, twists, mode)


def enumerate_diagrams(b: BackboneSpectrum, k: int, mode: Mode = Mode.ORIENTED) -> Iterator[Diagram]:
    """Yield every diagram with backbone spectrum ``b`` and ``k`` chords exactly once.

    Backbones are ordered along the line, so every distinct arrangement of
    the backbone sizes is enumerated.
    """
    _check(b, k)
    for sizes, first in _tasks(b, k):
        yield from _enumerate_task(sizes, first, k, mode)


def expected_total(b: BackboneSpectrum, k: int, mode: Mode = Mode.ORIENTED) -> int:
    arrangements = math.factorial(b.total)
    for c in b.counts:
        arrangements //= math.factorial(c)
    V = b.vertices
    count = arrangements * math.comb(V, 2 * k) * math.prod(range(1, 2 * k, 2))
    return count * (2 ** k if mode is Mode.NON_ORIENTED else 1)


def is_connected(d: Diagram) -> bool:
    return surface_count(d) == 1


def _count_task(args) -> Counter:
    sizes, first, k, mode, connected_only, policy = args
    out: Counter = Counter()
    for d in _enumerate_task(sizes, first, k, mode):
        if connected_only and not is_connected(d):
            continue
        out[classify(d, policy)] += 1
    return out


def count_table(
    b: BackboneSpectrum,
    k: int,
    mode: Mode = Mode.ORIENTED,
    connected_only: bool = True,
    policy: CyclicPolicy = DEFAULT_POLICY,
    workers: int = 1,
) -> CountTable:
    """Classify every (optionally connected) diagram and tabulate exact counts."""
    _check(b, k)
    jobs = [(sizes, first, k, mode, connected_only, policy) for sizes, first in _tasks(b, k)]
    total: Counter = Counter()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_count_task, jobs, chunksize=max(1, len(jobs) // (4 * workers))):
                total.update(part)
    else:
        for job in jobs:
            total.update(_count_task(job))
    return CountTable(mode, policy, k, b, dict(total))


def untwisted_restriction(b: BackboneSpectrum, k: int, policy: CyclicPolicy = DEFAULT_POLICY) -> CountTable:
    """Non-oriented table restricted to all-untwisted chords, relabelled as oriented (h = 2g)."""
    out = CountTable(Mode.ORIENTED, policy, k, b)
    for sizes, first in _tasks(b, k):
        for d in _enumerate_task(sizes, first, k, Mode.ORIENTED):
            if not is_connected(d):
                continue
            nd = Diagram(d.backbones, d.twisted, Mode.NON_ORIENTED)
            c = classify(nd, policy)
            if c.euler_index % 2:
                raise AssertionError("untwisted diagram with odd cross-cap number")
            out.add(type(c)(Mode.ORIENTED, c.euler_index // 2, c.k, c.l, c.backbones, c.spectrum))
    return out
