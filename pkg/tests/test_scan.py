"""Segmented scanning, checkpointing, and structured enumeration."""

import json
import math
import random
from fractions import Fraction

import pytest

from friendly.arith import factorize, sigma
from friendly.scan import (
    Checkpoint,
    CheckpointCorruptError,
    CheckpointMismatchError,
    CheckpointVersionError,
    checkpoint_load,
    checkpoint_save,
    config_fingerprint,
    enumerate_structured,
    read_records,
    scan,
    scan_range,
    segment_grid,
)
from friendly.sieve import SieveBudgetError, sigma_range


def divisor_sum(n):
    total = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            total += d
            if d != n // d:
                total += n // d
    return total


# --- the sieve ----------------------------------------------------------------


def test_sigma_range_matches_divisor_enumeration():
    values = sigma_range(1, 2001)
    for n in range(1, 2001):
        assert int(values[n - 1]) == divisor_sum(n), n


def test_sigma_range_offset_segment():
    values = sigma_range(995, 1015)
    for n in range(995, 1015):
        assert int(values[n - 995]) == divisor_sum(n)


def test_sigma_range_budget():
    with pytest.raises(SieveBudgetError):
        sigma_range(1, 1000, max_elements=100)
    with pytest.raises(ValueError):
        sigma_range(0, 10)


def test_sieve_agrees_with_factorization_path():
    rng = random.Random(99)
    values = sigma_range(1, 10 ** 6)
    for _ in range(1000):
        n = rng.randrange(1, 10 ** 6)
        assert int(values[n - 1]) == sigma(factorize(n))


# --- scan_range -----------------------------------------------------------------


def test_scan_range_perfect_numbers():
    record = scan_range(1, 100, Fraction(2))
    assert record.hits == (6, 28)
    assert record.scanned_count == 99
    assert record.checksum == sum(divisor_sum(n) for n in range(1, 100)) % 2 ** 64


def test_scan_range_only_ten_shares_its_index():
    record = scan_range(1, 10 ** 6, Fraction(9, 5))
    assert record.hits == (10,)


def test_scan_range_rejects_empty_or_bad_ranges():
    with pytest.raises(ValueError):
        scan_range(2, 2, Fraction(2))
    with pytest.raises(ValueError):
        scan_range(0, 5, Fraction(2))
    with pytest.raises(ValueError):
        scan_range(1, 10, Fraction(-1, 2))


def test_scan_range_hits_carry_the_target_index():
    record = scan_range(1, 500, Fraction(3, 2))
    for h in record.hits:
        assert sigma(factorize(h)) * 2 == 3 * h


# --- the driver -------------------------------------------------------------------


def test_segment_grid_covers_exactly():
    grid = segment_grid(10 ** 6 + 17, 2 ** 16)
    assert grid[0][0] == 1
    assert grid[-1][1] == 10 ** 6 + 17
    for (a_lo, a_hi), (b_lo, b_hi) in zip(grid, grid[1:]):
        assert a_hi == b_lo
    with pytest.raises(ValueError):
        segment_grid(1, 2 ** 16)


def test_scan_deterministic_across_worker_counts():
    solo = scan(200_000, Fraction(9, 5), workers=1, segment_size=1 << 15)
    multi = scan(200_000, Fraction(9, 5), workers=3, segment_size=1 << 15)
    assert solo.hits == multi.hits == (10,)
    assert solo.checksum == multi.checksum
    assert solo.scanned_count == multi.scanned_count == 199_999
    strip = lambda recs: [(r.lo, r.hi, r.hits, r.checksum, r.scanned_count) for r in recs]
    assert strip(sorted(solo.new_records, key=lambda r: r.lo)) == strip(
        sorted(multi.new_records, key=lambda r: r.lo)
    )


def test_scan_coverage_has_no_gaps_or_overlap():
    outcome = scan(300_000, Fraction(2), segment_size=1 << 15)
    records = sorted(outcome.new_records, key=lambda r: r.lo)
    edge = 1
    for rec in records:
        assert rec.lo == edge
        edge = rec.hi
    assert edge == 300_000
    assert outcome.complete
    assert outcome.hits == (6, 28, 496, 8128)


# --- checkpointing -----------------------------------------------------------------


def test_checkpoint_round_trip(tmp_path):
    cp = Checkpoint(
        version=1,
        target_index=Fraction(9, 5),
        bound=10 ** 6,
        segment_size=1 << 20,
        frontier=2 ** 20 + 1,
        pending=((2 ** 20 + 1, 10 ** 6),),
        fingerprint=config_fingerprint(Fraction(9, 5), 10 ** 6, 1 << 20),
    )
    path = tmp_path / "scan.checkpoint"
    checkpoint_save(path, cp)
    assert checkpoint_load(path) == cp


def test_checkpoint_truncated_file_reports_offset(tmp_path):
    path = tmp_path / "scan.checkpoint"
    cp = Checkpoint(
        version=1,
        target_index=Fraction(2),
        bound=100,
        segment_size=10,
        frontier=1,
        pending=(),
        fingerprint="x",
    )
    checkpoint_save(path, cp)
    whole = path.read_text()
    path.write_text(whole[: len(whole) // 2])
    with pytest.raises(CheckpointCorruptError) as info:
        checkpoint_load(path)
    assert isinstance(info.value.offset, int)
    assert "byte" in str(info.value)


def test_checkpoint_unknown_version_refused(tmp_path):
    path = tmp_path / "scan.checkpoint"
    path.write_text(json.dumps({"version": 99}))
    with pytest.raises(CheckpointVersionError):
        checkpoint_load(path)


def test_checkpoint_missing_field_is_corrupt(tmp_path):
    path = tmp_path / "scan.checkpoint"
    path.write_text(json.dumps({"version": 1, "bound": "10"}))
    with pytest.raises(CheckpointCorruptError):
        checkpoint_load(path)


def test_resume_refuses_mismatched_parameters(tmp_path):
    path = tmp_path / "scan.checkpoint"
    scan(100_000, Fraction(9, 5), segment_size=1 << 14, checkpoint_path=path)
    with pytest.raises(CheckpointMismatchError):
        scan(200_000, Fraction(9, 5), segment_size=1 << 14, checkpoint_path=path)
    with pytest.raises(CheckpointMismatchError):
        scan(100_000, Fraction(2), segment_size=1 << 14, checkpoint_path=path)


def test_resume_rescans_nothing_below_frontier(tmp_path):
    path = tmp_path / "scan.checkpoint"
    bound, seg = 2 ** 21, 1 << 18
    first = scan(bound, Fraction(9, 5), segment_size=seg, checkpoint_path=path, max_segments=3)
    assert not first.complete
    assert first.frontier == 1 + 3 * seg
    second = scan(bound, Fraction(9, 5), segment_size=seg, checkpoint_path=path)
    assert second.complete
    assert all(rec.lo >= first.frontier for rec in second.new_records)
    assert second.hits == (10,)
    assert second.scanned_count == bound - 1
    # combined coverage is seamless
    cp = checkpoint_load(path)
    assert cp.pending == () and cp.frontier == bound


def test_resumed_totals_match_a_fresh_run(tmp_path):
    path = tmp_path / "scan.checkpoint"
    bound, seg = 300_000, 1 << 15
    scan(bound, Fraction(2), segment_size=seg, checkpoint_path=path, max_segments=4)
    resumed = scan(bound, Fraction(2), segment_size=seg, checkpoint_path=path)
    fresh = scan(bound, Fraction(2), segment_size=seg)
    assert resumed.hits == fresh.hits
    assert resumed.checksum == fresh.checksum
    assert resumed.scanned_count == fresh.scanned_count


def test_records_file_is_jsonl_with_decimal_strings(tmp_path):
    path = tmp_path / "scan.checkpoint"
    outcome = scan(50_000, Fraction(9, 5), segment_size=1 << 14, checkpoint_path=path)
    records_path = tmp_path / "scan.checkpoint.records"
    assert records_path.exists()
    lines = [json.loads(l) for l in records_path.read_text().splitlines() if l]
    assert len(lines) == outcome.segments_total
    for doc in lines:
        assert set(doc) == {"lo", "hi", "target_index", "hits", "scanned_count", "elapsed", "checksum"}
        for key in ("lo", "hi", "scanned_count", "elapsed", "checksum"):
            assert isinstance(doc[key], str) and doc[key].isdigit()
        assert all(isinstance(h, str) and h.isdigit() for h in doc["hits"])
        assert doc["target_index"] == "9/5"
    loaded = read_records(records_path)
    assert [r.hits for r in loaded if r.hits] == [(10,)]


# --- structured enumeration ---------------------------------------------------------


def test_enumerate_examples():
    assert [c.value for c in enumerate_structured(625)] == [25, 625]
    values = [c.value for c in enumerate_structured(1225)]
    assert values == [25, 625, 1225]
    by_value = {c.value: c for c in enumerate_structured(1225)}
    assert by_value[1225].a == 1 and by_value[1225].q == 7


def test_enumerate_bound_validation():
    with pytest.raises(ValueError):
        list(enumerate_structured(24))


def test_enumerate_matches_double_loop_oracle():
    bound = 10 ** 6
    expected = []
    a = 1
    while 25 ** a <= bound:
        q = 1
        while 25 ** a * q * q <= bound:
            if q % 2 == 1 and q % 3 != 0 and q % 5 != 0:
                expected.append(25 ** a * q * q)
            q += 1
        a += 1
    got = [c.value for c in enumerate_structured(bound)]
    assert sorted(expected) == got
    assert len(got) == 67


def test_enumerate_is_ascending_and_duplicate_free():
    values = [c.value for c in enumerate_structured(5 * 10 ** 6)]
    assert values == sorted(values)
    assert len(values) == len(set(values))
    for c in enumerate_structured(10 ** 5):
        assert c.value <= 10 ** 5
        assert c.q % 2 == 1 and c.q % 3 != 0 and c.q % 5 != 0
