"""Exhaustive census of Szym classes of relations on small sets.

Every relation on ``n <= 5`` points is reduced to its quotient by the
compiled kernel; distinct quotients are labelled canonically by certificate
and merged into a catalog of classes.
"""

from __future__ import annotations

import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from . import _fastpath
from .canon import canonize, is_canonical
from .relcore import Rel
from .szymiso import (
    Certificate,
    brute_force_szym_iso,
    certificate,
    classifying_graph,
    classifying_graphs_isomorphic,
)

__all__ = [
    "CatalogRecord",
    "CensusReport",
    "CensusLevel",
    "NotCoveredError",
    "CatalogIntegrityError",
    "run_census",
    "write_catalog",
    "load_catalog",
    "catalog_lookup",
    "verify_catalog",
    "find_incompleteness_witnesses",
    "N_MAX",
]

N_MAX = 5
FORMAT_VERSION = 1
HEADER_PREFIX = "#szymrel-catalog"
COLUMNS = (
    "class_id",
    "n_canonical",
    "certificate",
    "canonical_matrix",
    "component_periods",
    "classifying_graph",
    "first_seen_source",
    "preimage_counts",
)


class NotCoveredError(LookupError):
    """The catalog does not contain the class of the queried relation."""


class CatalogIntegrityError(ValueError):
    """A catalog record violates a catalog invariant."""


@dataclass(frozen=True)
class CatalogRecord:
    class_id: int
    n_canonical: int
    certificate: Certificate
    canonical_matrix: str
    component_periods: tuple[int, ...]
    classifying_graph: str
    first_seen_source: Optional[str] = None  # "n:bits"
    preimage_counts: Optional[tuple[int, ...]] = None  # indexed by exact source n

    def rel(self) -> Rel:
        n = self.n_canonical
        bits = self.canonical_matrix
        return Rel(n, [sum(1 << j for j in range(n) if bits[i * n + j] == "1") for i in range(n)])

    def to_line(self) -> str:
        counts = "-" if self.preimage_counts is None else ",".join(map(str, self.preimage_counts))
        return "\t".join(
            [
                str(self.class_id),
                str(self.n_canonical),
                self.certificate.hex(),
                self.canonical_matrix or "-",
                ",".join(map(str, self.component_periods)) or "-",
                self.classifying_graph or "-",
                self.first_seen_source or "-",
                counts,
            ]
        )

    @classmethod
    def from_line(cls, line: str) -> "CatalogRecord":
        parts = line.rstrip("\n").split("\t")
        if len(parts) != len(COLUMNS):
            raise CatalogIntegrityError(f"expected {len(COLUMNS)} fields, got {len(parts)}")
        cid, n, cert, matrix, periods, graph, src, counts = parts
        try:
            return cls(
                class_id=int(cid),
                n_canonical=int(n),
                certificate=Certificate.from_hex(cert),
                canonical_matrix="" if matrix == "-" else matrix,
                component_periods=() if periods == "-" else tuple(int(q) for q in periods.split(",")),
                classifying_graph="" if graph == "-" else graph,
                first_seen_source=None if src == "-" else src,
                preimage_counts=None if counts == "-" else tuple(int(c) for c in counts.split(",")),
            )
        except ValueError as exc:
            raise CatalogIntegrityError(f"record {cid}: {exc}") from exc


@dataclass(frozen=True)
class CensusLevel:
    n: int
    object_count: int
    scanned: int
    new_class_count: int
    cumulative_class_count: int


@dataclass
class CensusReport:
    levels: list[CensusLevel]
    wall_time: float
    workers: int
    records: list[CatalogRecord] = field(default_factory=list, repr=False)

    @property
    def cumulative(self) -> list[int]:
        return [lv.cumulative_class_count for lv in self.levels]

    def summary(self) -> str:
        lines = ["n\tobjects\tnew_classes\tcumulative_classes"]
        for lv in self.levels:
            lines.append(f"{lv.n}\t{lv.object_count}\t{lv.new_class_count}\t{lv.cumulative_class_count}")
        lines.append(f"cumulative classes: {self.levels[-1].cumulative_class_count}")
        return "\n".join(lines) + "\n"


def _matrix_string(r: Rel) -> str:
    return "".join(
        "1" if (r.rows[i] >> j) & 1 else "0" for i in range(r.n) for j in range(r.n)
    )


def _scan_shard(args):
    n, start, stop, prune = args
    return _fastpath.scan_range(n, start, stop, prune)


def _shards(n: int, pieces: int) -> list[tuple[int, int]]:
    total = 1 << (n * n)
    # shard on high-order bits: equal power-of-two slices
    bits = 0
    while (1 << bits) < pieces and bits < n * n:
        bits += 1
    step = total >> bits
    return [(i * step, (i + 1) * step) for i in range(1 << bits)]


def run_census(
    n_max: int,
    workers: int = 1,
    catalog_out=None,
    prune_symmetry: bool = False,
    progress=sys.stderr,
) -> CensusReport:
    if not 0 <= n_max <= N_MAX:
        raise ValueError(f"n_max must be between 0 and {N_MAX}")
    if workers < 1:
        raise ValueError("workers must be positive")
    t0 = time.perf_counter()
    # certificate -> [n_canonical, canonical rel, first (n, code), counts per n]
    classes: dict[Certificate, list] = {}
    levels = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for n in range(n_max + 1):
            total = 1 << (n * n)
            if pool is not None and n >= 3:
                shards = _shards(n, 4 * workers)
                results = list(pool.map(_scan_shard, [(n, a, b, prune_symmetry) for a, b in shards]))
            else:
                results = [_fastpath.scan_range(n, 0, total, prune_symmetry)]
            merged: dict[int, list[int]] = {}
            for res in results:
                for key, (cnt, code) in res.items():
                    if key in merged:
                        merged[key][0] += cnt
                        merged[key][1] = min(merged[key][1], code)
                    else:
                        merged[key] = [cnt, code]
            scanned = 0
            new = 0
            for key in sorted(merged):
                cnt, code = merged[key]
                scanned += cnt
                q = _fastpath.key_to_rel(key)
                cert = certificate(q)
                entry = classes.get(cert)
                if entry is None:
                    entry = [q.n, cert.to_rel(), (n, code), [0] * (n_max + 1)]
                    classes[cert] = entry
                    new += 1
                elif (n, code) < entry[2]:
                    entry[2] = (n, code)
                entry[3][n] += cnt
            levels.append(CensusLevel(n, total, scanned, new, len(classes)))
            if progress is not None:
                print(f"n={n} scanned={scanned} classes={len(classes)}", file=progress, flush=True)
    finally:
        if pool is not None:
            pool.shutdown()

    records = []
    for cid, cert in enumerate(sorted(classes, key=lambda c: (classes[c][0], c))):
        n_can, rel, (sn, scode), counts = classes[cert]
        graph = classifying_graph(rel)
        records.append(
            CatalogRecord(
                class_id=cid,
                n_canonical=n_can,
                certificate=cert,
                canonical_matrix=_matrix_string(rel),
                component_periods=tuple(sorted(graph.periods)),
                classifying_graph=graph.to_line(),
                first_seen_source=f"{sn}:{format(scode, f'0{sn * sn}b') if sn else ''}",
                preimage_counts=None if prune_symmetry else tuple(counts),
            )
        )
    report = CensusReport(levels, time.perf_counter() - t0, workers, records)
    if catalog_out is not None:
        write_catalog(catalog_out, records, n_max)
    return report


def write_catalog(path, records: Iterable[CatalogRecord], n_max: int) -> None:
    lines = [f"{HEADER_PREFIX}\tversion={FORMAT_VERSION}\tn_max={n_max}", "#" + "\t".join(COLUMNS)]
    lines += [rec.to_line() for rec in records]
    Path(path).write_text("\n".join(lines) + "\n")


def load_catalog(path) -> tuple[int, list[CatalogRecord]]:
    """Covered ``n_max`` and the records of a catalog file."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or not lines[0].startswith(HEADER_PREFIX):
        raise CatalogIntegrityError("missing catalog header")
    meta = dict(f.split("=", 1) for f in lines[0].split("\t")[1:])
    if int(meta.get("version", -1)) != FORMAT_VERSION:
        raise CatalogIntegrityError(f"unsupported catalog version {meta.get('version')}")
    n_max = int(meta["n_max"])
    records = [CatalogRecord.from_line(line) for line in lines[1:] if line and not line.startswith("#")]
    return n_max, records


def catalog_lookup(catalog, r: Rel) -> CatalogRecord:
    n_max, records = load_catalog(catalog)
    obj, _ = canonize(r)
    if obj.n > n_max:
        raise NotCoveredError(f"canonical form has {obj.n} points; catalog covers n <= {n_max}")
    cert = certificate(obj)
    for rec in records:
        if rec.certificate == cert:
            return rec
    raise NotCoveredError("class not found in catalog")


@dataclass
class VerifyReport:
    records: int
    checked: int
    oracle_pairs: int

    def __str__(self) -> str:
        return f"records={self.records} checked={self.checked} oracle_pairs={self.oracle_pairs} ok"


def verify_catalog(catalog, sample: int = 50, seed: int = 0) -> VerifyReport:
    _, records = load_catalog(catalog)
    seen = {}
    for i, rec in enumerate(records):
        if rec.class_id != i:
            raise CatalogIntegrityError(f"record {rec.class_id}: class ids are not dense")
        if rec.certificate in seen:
            raise CatalogIntegrityError(
                f"record {rec.class_id}: certificate duplicates record {seen[rec.certificate]}"
            )
        seen[rec.certificate] = rec.class_id
    rng = random.Random(seed)
    chosen = records if sample >= len(records) else rng.sample(records, sample)
    for rec in chosen:
        if len(rec.canonical_matrix) != rec.n_canonical ** 2:
            raise CatalogIntegrityError(f"record {rec.class_id}: matrix size mismatch")
        rel = rec.rel()
        check = is_canonical(rel)
        if not check:
            raise CatalogIntegrityError(f"record {rec.class_id}: not canonical ({check.detail})")
        if certificate(rel) != rec.certificate:
            raise CatalogIntegrityError(f"record {rec.class_id}: certificate mismatch")
        graph = classifying_graph(rel)
        if graph.to_line() != rec.classifying_graph:
            raise CatalogIntegrityError(f"record {rec.class_id}: classifying graph mismatch")
        if tuple(sorted(graph.periods)) != rec.component_periods:
            raise CatalogIntegrityError(f"record {rec.class_id}: component periods mismatch")
    small = [rec for rec in records if rec.n_canonical <= 2]
    pairs = 0
    for i, a in enumerate(small):
        for b in small[i + 1:]:
            pairs += 1
            if brute_force_szym_iso(a.rel(), b.rel()):
                raise CatalogIntegrityError(
                    f"records {a.class_id} and {b.class_id} are isomorphic"
                )
    return VerifyReport(len(records), len(chosen), pairs)


def find_incompleteness_witnesses(records: Iterable[CatalogRecord]) -> list[tuple[int, int]]:
    """Pairs of distinct classes whose classifying graphs are label-isomorphic."""
    groups: dict[tuple, list] = {}
    for rec in records:
        graph = classifying_graph(rec.rel())
        key = (tuple(sorted(graph.periods)), tuple(sorted(l for _, _, l in graph.edges)))
        groups.setdefault(key, []).append((rec.class_id, graph))
    out = []
    for members in groups.values():
        for i, (ca, ga) in enumerate(members):
            for cb, gb in members[i + 1:]:
                if classifying_graphs_isomorphic(ga, gb):
                    out.append((ca, cb))
    return sorted(out)
