import random

import pytest

from conftest import R1, R3, RA, RB, random_rel
from szymrel._fastpath import decode
from szymrel.census import (
    CatalogIntegrityError,
    NotCoveredError,
    catalog_lookup,
    find_incompleteness_witnesses,
    load_catalog,
    run_census,
    verify_catalog,
)
from szymrel.relcore import Rel
from szymrel.szymiso import brute_force_szym_iso, certificate


def test_small_census_counts(tmp_path):
    report = run_census(1, catalog_out=tmp_path / "c1.tsv", progress=None)
    assert [lv.object_count for lv in report.levels] == [1, 2]
    assert report.cumulative == [1, 2]
    report = run_census(3, progress=None)
    assert report.cumulative[-1] == 14
    assert [lv.new_class_count for lv in report.levels] == [1, 1, 3, 9]
    assert all(lv.scanned == lv.object_count for lv in report.levels)


def test_cap_and_worker_validation():
    with pytest.raises(ValueError):
        run_census(6)
    with pytest.raises(ValueError):
        run_census(2, workers=0)


def test_progress_lines(capsys):
    import sys

    run_census(2, progress=sys.stderr)
    err = capsys.readouterr().err.splitlines()
    assert err == ["n=0 scanned=1 classes=1", "n=1 scanned=2 classes=2", "n=2 scanned=16 classes=5"]


def test_catalog2_classes_pairwise_distinct(catalog2):
    report, path = catalog2
    rels = [rec.rel() for rec in report.records]
    assert len(rels) == 5
    for i, a in enumerate(rels):
        for b in rels[i + 1:]:
            assert not brute_force_szym_iso(a, b)
    assert str(verify_catalog(path)).endswith("ok")


def test_catalog_round_trip(catalog2):
    report, path = catalog2
    n_max, records = load_catalog(path)
    assert n_max == 2
    assert records == report.records
    assert [r.class_id for r in records] == list(range(5))
    assert records[0].n_canonical == 0 and records[0].preimage_counts == (1, 1, 3)


def test_tampered_certificate_detected(catalog2, tmp_path):
    _, path = catalog2
    lines = path.read_text().splitlines()
    fields = lines[3].split("\t")
    cert = bytearray(bytes.fromhex(fields[2]))
    cert[-1] ^= 0x40
    fields[2] = cert.hex()
    lines[3] = "\t".join(fields)
    bad = tmp_path / "bad.tsv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(CatalogIntegrityError):
        verify_catalog(bad, sample=10)


def test_lookup(census5):
    _, path, _ = census5
    assert catalog_lookup(path, R1).class_id == catalog_lookup(path, R3).class_id
    assert catalog_lookup(path, Rel.empty(4)).class_id == 0
    assert catalog_lookup(path, RA).class_id != catalog_lookup(path, RB).class_id
    big = Rel(6, [1 << ((i + 1) % 6) for i in range(6)])
    with pytest.raises(NotCoveredError):
        catalog_lookup(path, big)


def test_catalog_invariants(census5):
    report, path, _ = census5
    verify_catalog(path, sample=len(report.records))
    certs = [rec.certificate for rec in report.records]
    assert len(set(certs)) == 192
    for rec in report.records:
        assert certificate(rec.rel()) == rec.certificate
        assert sum(rec.preimage_counts) >= 1
        n, bits = rec.first_seen_source.split(":")
        src = decode(int(bits, 2), int(n)) if bits else Rel.empty(0)
        assert certificate(__import__("szymrel").canonize(src)[0]) == rec.certificate
    per_n = [sum(rec.preimage_counts[n] for rec in report.records) for n in range(6)]
    assert per_n == [1, 2, 16, 512, 65536, 33554432]


def test_permutation_closure(census5):
    _, path, _ = census5
    rng = random.Random(61)
    for _ in range(100):
        n = rng.randint(1, 5)
        r = random_rel(rng, n)
        p = list(range(n))
        rng.shuffle(p)
        assert catalog_lookup(path, r).class_id == catalog_lookup(path, r.relabel(p)).class_id


def test_symmetry_pruned_census_agrees(tmp_path):
    plain = run_census(4, progress=None)
    pruned = run_census(4, prune_symmetry=True, progress=None)
    assert pruned.cumulative == plain.cumulative
    assert [r.certificate for r in pruned.records] == [r.certificate for r in plain.records]
    assert all(r.preimage_counts is None for r in pruned.records)


def test_classifying_graphs_distinct_up_to_five(census5):
    report, _, _ = census5
    assert find_incompleteness_witnesses(report.records) == []
