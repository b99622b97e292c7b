"""Tests for the fundamental-outcome census and the empty-degree sweeps."""

import itertools
import json
import random
from functools import cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chipsplit.enumeration import (
    EnumerationReport,
    SweepCertificate,
    anchored_candidates,
    candidate_bound,
    canonical_key,
    check_conjecture,
    classify_candidate,
    enumerate_fundamental,
    sign_survivor_search,
    sweep_no_valid_outcomes,
)
import chipsplit.enumeration as enumeration
from chipsplit.grid import ChipConfiguration, act, grid_points
from chipsplit.hyperfield import hyperfield_excludes
from chipsplit.models import is_fundamental
from chipsplit.pascal import is_outcome

# The published census through five positive entries: cell (n, d) counts
# fundamental outcomes with n + 1 positive points and degree d.
CENSUS_TABLE_N4 = {
    (1, 1): 1,
    (2, 2): 3,
    (2, 3): 1,
    (3, 3): 12,
    (3, 4): 4,
    (3, 5): 2,
    (4, 4): 82,
    (4, 5): 38,
    (4, 6): 10,
    (4, 7): 4,
}
ROW_TOTALS = {1: 1, 2: 4, 3: 18, 4: 134}

# The complete classification with at most three positive entries.
SMALL_OUTCOMES = [
    {(0, 0): -1, (0, 1): 1, (1, 0): 1},
    {(0, 0): -1, (0, 1): 1, (1, 1): 1, (2, 0): 1},
    {(0, 0): -1, (1, 0): 1, (0, 2): 1, (1, 1): 1},
    {(0, 0): -1, (0, 2): 1, (1, 1): 2, (2, 0): 1},
    {(0, 0): -1, (0, 3): 1, (1, 1): 3, (3, 0): 1},
]

# The two degree-seven outcomes that slip past every hand argument.
EXCEPTIONAL_SEVEN = [
    {(0, 0): -2, (0, 7): 2, (1, 5): 7, (1, 1): 7, (5, 1): 7, (7, 0): 2},
    {(0, 0): -1, (0, 7): 1, (1, 3): 7, (3, 3): 7, (3, 1): 7, (7, 0): 1},
]

# Supports the sign test cannot rule out, per degree, for four positive
# entries; the invertibility criterion finishes each of them.
SIGN_SURVIVORS_D6 = [
    frozenset({(0, 3), (1, 5), (4, 1), (6, 0)}),
    frozenset({(0, 5), (1, 1), (3, 3), (6, 0)}),
    frozenset({(0, 6), (1, 1), (3, 3), (5, 0)}),
    frozenset({(0, 6), (1, 1), (3, 3), (6, 0)}),
    frozenset({(0, 6), (1, 4), (3, 0), (5, 1)}),
]
SIGN_SURVIVORS_D7 = [
    frozenset({(0, 7), (1, 1), (3, 3), (7, 0)}),
    frozenset({(0, 7), (1, 3), (5, 1), (7, 0)}),
    frozenset({(0, 7), (1, 5), (3, 1), (7, 0)}),
]

# Sign-survivor counts for five positive entries on the first swept degrees.
SIGN_SURVIVOR_COUNTS_5 = {8: 792, 9: 882, 10: 950}


@cache
def census(d_max, n_max):
    return enumerate_fundamental(d_max, n_max)


def entry_dicts(outcomes):
    return [dict(w) for w in outcomes]


class TestAnchoredCandidates:
    @pytest.mark.parametrize("n,d", [(1, 1), (2, 3), (3, 3), (3, 4)])
    def test_matches_brute_force_filter(self, n, d):
        points = [p for p in grid_points(d) if p != (0, 0)]
        brute = set()
        for combo in itertools.combinations(points, n + 1):
            tops = sum(1 for i, j in combo if i + j == d)
            row = any(j == 0 and i >= 1 for i, j in combo)
            column = any(i == 0 and j >= 1 for i, j in combo)
            if tops >= 2 and row and column:
                brute.add(frozenset(combo))
        assert set(anchored_candidates(n, d)) == brute

    def test_candidates_are_distinct(self):
        supports = list(anchored_candidates(3, 4))
        assert len(supports) == len(set(supports))

    @pytest.mark.parametrize("n,d", [(2, 2), (3, 4), (4, 5)])
    def test_bound_dominates_actual_count(self, n, d):
        actual = sum(1 for _ in anchored_candidates(n, d))
        assert actual <= candidate_bound(n, d)

    def test_every_candidate_is_anchored(self):
        for support in anchored_candidates(3, 5):
            assert len(support) == 4
            assert (0, 0) not in support
            assert sum(1 for i, j in support if i + j == 5) >= 2
            assert any(j == 0 for i, j in support)
            assert any(i == 0 for i, j in support)

    def test_empty_cells(self):
        assert list(anchored_candidates(0, 3)) == []
        assert candidate_bound(1, 0) == 0


class TestCensusSmall:
    def test_small_support_classification(self):
        report = census(3, 2)
        assert report.table == {(1, 1): 1, (2, 2): 3, (2, 3): 1}
        assert entry_dicts(report.outcomes) == SMALL_OUTCOMES

    def test_brute_force_equality_through_degree_four(self):
        # Re-derive the census with no anchors and no pruning: run the
        # exact fundamentality test on every support of each size.
        found = []
        for d in range(1, 5):
            points = [p for p in grid_points(d) if p != (0, 0)]
            for size in range(2, 6):
                for combo in itertools.combinations(points, size):
                    if max(i + j for i, j in combo) != d:
                        continue
                    if is_fundamental(combo, d):
                        support = frozenset(combo)
                        stage, outcome = classify_candidate(support, d)
                        assert stage == "fundamental"
                        found.append(outcome)
        found.sort(key=canonical_key)
        report = census(4, 4)
        assert entry_dicts(found) == entry_dicts(report.outcomes)

    def test_prunes_are_sound(self):
        # Anything the sign or invertibility stage discards must also
        # fail the exact test; spot-check a sample from two cells.
        rng = random.Random(7)
        for n, d in ((3, 5), (4, 6)):
            pruned = {"signs": [], "invertibility": []}
            for support in anchored_candidates(n, d):
                stage, _ = classify_candidate(support, d)
                if stage in pruned:
                    pruned[stage].append(support)
            for stage, sample_pool in pruned.items():
                assert sample_pool, f"expected some {stage} prunes at ({n}, {d})"
                for support in rng.sample(sample_pool, min(40, len(sample_pool))):
                    assert not is_fundamental(support, d)

    def test_outcomes_really_are_outcomes(self):
        for w in census(5, 3).outcomes:
            assert is_outcome(w)
            assert is_fundamental(w.positive_support, w.degree)


class TestCensusTable:
    def test_counts_through_four_positive_entries(self):
        assert census(7, 4).table == CENSUS_TABLE_N4

    def test_row_totals(self):
        report = census(7, 4)
        for n, expected in ROW_TOTALS.items():
            total = sum(c for (m, _), c in report.table.items() if m == n)
            assert total == expected

    def test_exceptional_degree_seven_outcomes_present(self):
        have = entry_dicts(census(7, 4).outcomes)
        for exceptional in EXCEPTIONAL_SEVEN:
            assert exceptional in have

    def test_transposition_closure(self):
        report = census(7, 4)
        have = {frozenset(dict(w).items()) for w in report.outcomes}
        for w in report.outcomes:
            mirrored = act("(12)", w, w.degree)
            assert frozenset(dict(mirrored).items()) in have

    def test_conjecture_and_equality_counts(self):
        conjecture = check_conjecture(census(7, 4))
        assert conjecture.holds
        assert conjecture.equality_counts == {1: 1, 2: 1, 3: 2, 4: 4}

    def test_json_round_trip(self):
        report = census(7, 4)
        clone = EnumerationReport.from_json(report.to_json())
        assert clone.table == report.table
        assert entry_dicts(clone.outcomes) == entry_dicts(report.outcomes)

    def test_matches_committed_golden(self):
        from pathlib import Path

        with open(Path(__file__).parent / "golden" / "census-n4-d7.json") as fh:
            golden = json.load(fh)
        payload = json.loads(json.dumps(census(7, 4).to_json()))
        assert payload == golden

    def test_parallel_run_is_byte_identical(self):
        serial = json.dumps(census(7, 4).to_json(), sort_keys=True)
        parallel = json.dumps(
            enumerate_fundamental(7, 4, jobs=2).to_json(), sort_keys=True
        )
        assert serial == parallel


@cache
def wide_census():
    """The committed five-positive-entry census; loading revalidates it."""
    from pathlib import Path

    with open(Path(__file__).parent / "golden" / "census-n5-d9.json") as fh:
        return EnumerationReport.from_json(json.load(fh))


class TestCensusGoldenWide:
    """Validate the committed wide census without rerunning it.

    Regenerating the file takes minutes (the degree-nine cell alone scans
    about eight million candidate supports), so the full run lives behind
    the long-run flag and these checks work from the committed artifact.
    """

    def test_report_revalidates_on_load(self):
        report = wide_census()
        assert report.stats["d_max"] == 9
        assert report.stats["n_max"] == 5

    def test_wide_row_counts(self):
        report = wide_census()
        row = {d: c for (n, d), c in report.table.items() if n == 5}
        assert row == {5: 602, 6: 254, 7: 88, 8: 24, 9: 2}
        for cell, count in CENSUS_TABLE_N4.items():
            assert report.table[cell] == count

    def test_total_outcome_count(self):
        report = wide_census()
        assert len(report.outcomes) == 1127
        assert sum(report.table.values()) == 1127

    def test_conjecture_and_equality(self):
        conjecture = check_conjecture(wide_census())
        assert conjecture.holds
        assert conjecture.equality_counts == {1: 1, 2: 1, 3: 2, 4: 4, 5: 2}

    def test_transposition_closure(self):
        report = wide_census()
        have = {frozenset(dict(w).items()) for w in report.outcomes}
        for w in report.outcomes:
            assert frozenset(dict(act("(12)", w, w.degree)).items()) in have

    def test_sampled_outcomes_are_fundamental(self):
        report = wide_census()
        rng = random.Random(5)
        for w in rng.sample(report.outcomes, 12):
            assert is_outcome(w, w.degree)
            assert is_fundamental(w.positive_support, w.degree)


class TestLongRunGate:
    def test_big_cells_are_skipped_without_the_flag(self, monkeypatch):
        monkeypatch.setattr(enumeration, "LONG_RUN_CELL_BOUND", 25)
        report = enumerate_fundamental(3, 2)
        assert report.stats["skipped_cells"] == [[2, 3]]
        assert (2, 3) not in report.table
        assert (2, 2) in report.table

    def test_flag_admits_big_cells_with_a_warning(self, monkeypatch):
        monkeypatch.setattr(enumeration, "LONG_RUN_CELL_BOUND", 25)
        with pytest.warns(RuntimeWarning, match="hours"):
            report = enumerate_fundamental(3, 2, long_run=True)
        assert report.stats["skipped_cells"] == []
        assert report.table == {(1, 1): 1, (2, 2): 3, (2, 3): 1}

    def test_bad_bounds_are_rejected(self):
        with pytest.raises(ValueError):
            enumerate_fundamental(0, 1)
        with pytest.raises(ValueError):
            enumerate_fundamental(3, 0)


class TestCellCache:
    def test_resume_writes_and_reads_cells(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CHIPSPLIT_CACHE_DIR", str(tmp_path))
        first = enumerate_fundamental(3, 2, resume=True)
        files = sorted(tmp_path.glob("census-*.json"))
        assert files
        # Drop one outcome from the degree-two cell on disk; a resumed
        # run must reflect the tampered cache, proving it was read.
        target = next(
            f for f in files if json.loads(f.read_text())["outcomes"]
            and json.loads(f.read_text())["d"] == 2
        )
        payload = json.loads(target.read_text())
        payload["outcomes"] = payload["outcomes"][:-1]
        target.write_text(json.dumps(payload))
        resumed = enumerate_fundamental(3, 2, resume=True)
        assert resumed.table[(2, 2)] == first.table[(2, 2)] - 1
        # Without resume the cache is ignored and the census is whole.
        fresh = enumerate_fundamental(3, 2)
        assert fresh.table == first.table

    def test_cache_root_honors_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CHIPSPLIT_CACHE_DIR", str(tmp_path / "elsewhere"))
        assert enumeration.cache_root() == tmp_path / "elsewhere"


class TestReportValidation:
    def build(self, entries_list, table):
        outcomes = tuple(
            ChipConfiguration(entries) for entries in entries_list
        )
        return EnumerationReport(table, outcomes, {})

    def test_rejects_unsorted_outcomes(self):
        with pytest.raises(ValueError, match="sorted"):
            self.build(
                [SMALL_OUTCOMES[1], SMALL_OUTCOMES[0]],
                {(1, 1): 1, (2, 2): 1},
            )

    def test_rejects_imprimitive_outcomes(self):
        doubled = {p: 2 * v for p, v in SMALL_OUTCOMES[0].items()}
        with pytest.raises(ValueError, match="primitive"):
            self.build([doubled], {(1, 1): 1})

    def test_rejects_invalid_outcomes(self):
        flipped = {(0, 0): 1, (0, 1): -1, (1, 0): 1}
        with pytest.raises(ValueError, match="valid"):
            self.build([flipped], {(1, 1): 1})

    def test_rejects_wrong_table(self):
        with pytest.raises(ValueError, match="table"):
            self.build([SMALL_OUTCOMES[0]], {(1, 1): 2})


class TestConjectureCheck:
    def test_degree_violation_is_reported(self):
        rogue = ChipConfiguration({(0, 0): -1, (1, 0): 1, (2, 1): 1})
        report = EnumerationReport({(1, 3): 1}, (rogue,), {})
        conjecture = check_conjecture(report)
        assert not conjecture.holds
        assert conjecture.degree_violations == (rogue,)
        assert conjecture.support_violations == ()

    def test_support_violation_is_reported(self):
        rogue = ChipConfiguration(
            {(0, 0): -1, (1, 0): 1, (0, 1): 1, (1, 1): 1, (2, 0): 1}
        )
        report = EnumerationReport({(3, 2): 1}, (rogue,), {})
        conjecture = check_conjecture(report)
        assert not conjecture.holds
        assert conjecture.support_violations == (rogue,)


class TestSignSurvivorSearch:
    @pytest.mark.parametrize(
        "d,size",
        [(5, 3), (6, 4), (7, 3)],
    )
    def test_agrees_with_direct_sign_test(self, d, size):
        survivors, _ = sign_survivor_search(d, size)
        points = [p for p in grid_points(d) if p != (0, 0)]
        brute = {
            frozenset(combo)
            for combo in itertools.combinations(points, size)
            if not hyperfield_excludes(combo, d).excluded
        }
        assert set(survivors) == brute

    def test_survivors_come_out_sorted(self):
        survivors, nodes = sign_survivor_search(6, 4)
        assert nodes > 0
        keys = [tuple(sorted(s)) for s in survivors]
        assert keys == sorted(keys)


class TestSweep:
    def test_width_four_survivors_and_exclusions(self):
        certificates = sweep_no_valid_outcomes(4, range(6, 12))
        by_degree = {cert.d: cert for cert in certificates}
        assert sorted(by_degree) == list(range(6, 12))
        assert list(by_degree[6].sign_survivors) == SIGN_SURVIVORS_D6
        assert list(by_degree[7].sign_survivors) == SIGN_SURVIVORS_D7
        for cert in certificates:
            assert cert.holds
            assert all(r == "invertibility" for r in cert.resolutions)
            if cert.d >= 8:
                assert cert.sign_survivors == ()

    def test_width_five_first_degrees(self):
        certificates = sweep_no_valid_outcomes(5, [8, 9, 10])
        for cert in certificates:
            assert cert.holds
            assert len(cert.sign_survivors) == SIGN_SURVIVOR_COUNTS_5[cert.d]
            assert set(cert.resolutions) <= {"invertibility", "empty-kernel"}

    def test_finds_genuine_outcomes_when_they_exist(self):
        # Degree five does host valid outcomes with four positive
        # entries; the sweep must surface exactly the census cell.
        (cert,) = sweep_no_valid_outcomes(4, [5])
        assert not cert.holds
        expected = [
            dict(w)
            for w in census(5, 3).outcomes
            if w.degree == 5 and len(w.positive_support) == 4
        ]
        assert sorted(entry_dicts(cert.outcomes_found), key=sorted) == sorted(
            expected, key=sorted
        )

    def test_long_run_gate(self):
        with pytest.raises(ValueError, match="long_run"):
            sweep_no_valid_outcomes(5, [21])
        with pytest.raises(ValueError, match="4 and 5"):
            sweep_no_valid_outcomes(3, [8])

    def test_certificate_round_trip(self):
        (cert,) = sweep_no_valid_outcomes(4, [6])
        clone = SweepCertificate.from_json(
            json.loads(json.dumps(cert.to_json()))
        )
        assert clone == cert

    def test_jobs_do_not_change_certificates(self):
        serial = sweep_no_valid_outcomes(4, [6, 7])
        parallel = sweep_no_valid_outcomes(4, [6, 7], jobs=2)
        assert [c.to_json() for c in serial] == [c.to_json() for c in parallel]


class TestCanonicalKey:
    @given(
        st.dictionaries(
            st.tuples(st.integers(0, 4), st.integers(0, 4)),
            st.integers(-5, 5).filter(bool),
            min_size=1,
            max_size=6,
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_key_is_injective_on_configurations(self, entries):
        config = ChipConfiguration(entries)
        clone = ChipConfiguration(dict(entries))
        assert canonical_key(config) == canonical_key(clone)
        if any(v != 0 for v in entries.values()):
            bumped = dict(entries)
            (point, value), *_ = sorted(bumped.items())
            bumped[point] = value + 1
            other = ChipConfiguration(bumped)
            if dict(other) != dict(config):
                assert canonical_key(other) != canonical_key(config)
