"""JSON/CSV serialisation of count tables and the on-disk table cache."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterator

from . import __version__
from .spectra import BackboneSpectrum, CountTable, CyclicPolicy, DiagramClass, Mode, Spectrum, canonical_tuple

SCHEMA = 1
ENGINE_VERSION = __version__


class CacheCorruption(Exception):
    def __init__(self, path: Path, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path


def table_to_dict(table: CountTable) -> dict:
    entries = []
    for cls, count in table.sorted_entries():
        entry = {
            "euler_index": cls.euler_index,
            "spectrum": [{"tuple": list(rep), "mult": mult} for rep, mult in cls.spectrum.items],
            "text": str(cls.spectrum),
            "count": str(count),
        }
        if cls.surfaces != 1:
            entry["surfaces"] = cls.surfaces
        entries.append(entry)
    return {
        "schema": SCHEMA,
        "mode": table.mode.value,
        "policy": table.policy.value,
        "k": table.k,
        "backbones": list(table.backbones.counts),
        "l": table.l,
        "entries": entries,
    }


def table_from_dict(data: dict) -> CountTable:
    if data.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {data.get('schema')!r}")
    mode, policy = Mode(data["mode"]), CyclicPolicy(data["policy"])
    b = BackboneSpectrum(tuple(data["backbones"]))
    k = int(data["k"])
    table = CountTable(mode, policy, k, b)
    if int(data["l"]) != table.l:
        raise ValueError(f"l={data['l']} inconsistent with backbones and k")
    for e in data["entries"]:
        items = []
        for part in e["spectrum"]:
            rep = tuple(int(d) for d in part["tuple"])
            if canonical_tuple(rep, policy) != rep:
                raise ValueError(f"non-canonical class {rep}")
            items.append((rep, int(part["mult"])))
        count = int(e["count"])
        if count <= 0:
            raise ValueError(f"non-positive count {count}")
        spectrum = Spectrum._from_canonical(dict(items), policy)
        surfaces = int(e.get("surfaces", 1))
        table.add(DiagramClass(mode, int(e["euler_index"]), k, table.l, b, spectrum, surfaces), count)
    return table


def dumps(table: CountTable) -> str:
    return json.dumps(table_to_dict(table), sort_keys=True, indent=2) + "\n"


def to_csv(tables: list[CountTable]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["schema", "mode", "policy", "k", "backbones", "l", "surfaces", "euler_index", "spectrum", "count"])
    for table in tables:
        for cls, count in table.sorted_entries():
            writer.writerow([
                SCHEMA, table.mode.value, table.policy.value, table.k,
                " ".join(map(str, table.backbones.counts)), table.l, cls.surfaces, cls.euler_index, str(cls.spectrum), count,
            ])
    return buf.getvalue()


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cache_key(mode: Mode, policy: CyclicPolicy, backbones: BackboneSpectrum, k: int,
              engine: str = ENGINE_VERSION) -> str:
    payload = json.dumps(
        {"mode": mode.value, "policy": policy.value, "backbones": list(backbones.counts), "k": k, "engine": engine},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:24]


class TableCache:
    """Directory of tables keyed by a content hash of their parameters and engine version."""

    def __init__(self, root: Path | str):
        self.root = Path(root)

    def path_for(self, mode: Mode, policy: CyclicPolicy, backbones: BackboneSpectrum, k: int) -> Path:
        return self.root / f"{cache_key(mode, policy, backbones, k)}.json"

    def put(self, table: CountTable) -> Path:
        path = self.path_for(table.mode, table.policy, table.backbones, table.k)
        data = table_to_dict(table)
        data["engine"] = ENGINE_VERSION
        atomic_write(path, json.dumps(data, sort_keys=True, indent=2) + "\n")
        return path

    def _load(self, path: Path) -> CountTable | None:
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise CacheCorruption(path, f"unreadable JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise CacheCorruption(path, "not a table object")
        if data.get("engine") != ENGINE_VERSION:
            return None  # stale entries are ignored, never reused
        try:
            table = table_from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise CacheCorruption(path, f"invalid table ({exc})") from exc
        if path.stem != cache_key(table.mode, table.policy, table.backbones, table.k):
            raise CacheCorruption(path, "content does not match its cache key")
        return table

    def get(self, mode: Mode, policy: CyclicPolicy, backbones: BackboneSpectrum, k: int) -> CountTable | None:
        path = self.path_for(mode, policy, backbones, k)
        return self._load(path) if path.exists() else None

    def scan(self) -> Iterator[tuple[Path, CountTable]]:
        if not self.root.is_dir():
            return
        for path in sorted(self.root.glob("*.json")):
            table = self._load(path)
            if table is not None:
                yield path, table
