import json

import pytest

from srlz.lz_core import parse
from srlz.verify import (
    SUITES,
    _counting_sequence,
    suite_cond_entropy_ineq,
    suite_converse,
    suite_entropy_ineq,
    suite_frontier,
    suite_kraft,
    suite_sandwich,
    suite_split_lemma,
)


class TestCountingSequence:
    def test_prefix_values(self):
        assert list(_counting_sequence(6).data) == [0, 1, 0, 0, 0, 1]
        assert list(_counting_sequence(10).data) == [0, 1, 0, 0, 0, 1, 1, 0, 1, 1]

    def test_parse_recovers_enumeration(self):
        # the first 10 symbols split exactly into 0,1,00,01,10,11
        pr = parse(_counting_sequence(10))
        assert pr.c == 6
        assert not pr.is_last_incomplete

    def test_frozen_large_instance(self):
        pr = parse(_counting_sequence(1024))
        assert pr.c == 181
        assert pr.rho_lz == pytest.approx(1.3256563530879495, abs=1e-12)


class TestSmallSuiteRuns:
    def test_entropy_ineq(self):
        rep = suite_entropy_ineq(n=8, block_lens=(1, 2, 4))
        assert rep["holds"]
        assert rep["sequences"] == 256
        assert rep["checks"] == 768

    def test_cond_entropy_ineq(self):
        rep = suite_cond_entropy_ineq(n=4, block_lens=(1, 2))
        assert rep["holds"]
        assert rep["pairs"] == 256
        assert rep["checks"] == 512

    def test_kraft(self):
        rep = suite_kraft(max_out_len=1, block_len_max=2, k_max=6)
        assert rep["holds"]
        assert rep["family_size"] == rep["f1_tables"] * rep["f2_tables"]
        assert rep["checks"] == 2 * rep["family_size"]
        assert 0.0 < rep["max_lhs_over_rhs"] <= 1.0

    def test_split_lemma(self):
        rep = suite_split_lemma(budget=2000)
        assert rep["holds"]
        assert rep["checks"] == 2000
        assert rep["clamped_cases"] > 0

    def test_frontier(self):
        rep = suite_frontier(unions=10, max_members=5)
        assert rep["holds"]
        assert rep["corners"] > 0
        assert rep["corner_mismatches"] == []

    def test_frontier_lattice_guard(self):
        with pytest.raises(ValueError, match="coarser"):
            suite_frontier(resolution=0.01, lattice=0.01)

    def test_sandwich(self):
        rep = suite_sandwich(pairs=3, n=16)
        assert rep["holds"]
        assert rep["block_lens"] == [2, 4, 8, 16]
        assert rep["containment_checks"] == 12
        assert rep["measured_rate_violations"] == []

    def test_converse(self):
        rep = suite_converse(n_small=4, random_pairs=5, n_large=64,
                             spot_checks=4, spot_k_max=4)
        assert rep["holds"]
        assert rep["exhaustive"]["pairs"] == 256
        assert rep["exhaustive"]["checks"]["ii"] == 256
        assert rep["adversarial"]["violations"] == []
        assert rep["family_size"] == 16744


class TestZeroSlackRegression:
    def test_counting_sequence_breaches_first_floor(self):
        rep = suite_converse(eps_mode="zero", n_small=4, random_pairs=0,
                             spot_checks=0, n_large=1024)
        assert not rep["holds"]
        adv = rep["adversarial"]
        assert adv["phrase_count"] == 181
        # with the slack removed the phrase-count premise itself fails
        assert adv["phrase_count"] > adv["phrase_count_cap"]
        first = [v for v in adv["violations"] if v["check"] == "i"]
        assert first
        assert first[0]["family_min"] == pytest.approx(1.0)
        assert first[0]["delta1"] == pytest.approx(0.201953125)
        assert first[0]["rho_lz"] == pytest.approx(1.3256563530879495)

    def test_default_slack_restores_the_floor(self):
        rep = suite_converse(n_small=4, random_pairs=0, spot_checks=0,
                             n_large=1024)
        assert rep["adversarial"]["violations"] == []
        assert rep["adversarial"]["phrase_count"] <= rep["adversarial"]["phrase_count_cap"]


class TestDeterminism:
    def test_seeded_suites_reproduce_byte_identical_reports(self):
        a = suite_split_lemma(seed=9, budget=500)
        b = suite_split_lemma(seed=9, budget=500)
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
        c = suite_converse(seed=3, n_small=4, random_pairs=3, n_large=32,
                           spot_checks=2, spot_k_max=3)
        d = suite_converse(seed=3, n_small=4, random_pairs=3, n_large=32,
                           spot_checks=2, spot_k_max=3)
        assert json.dumps(c, sort_keys=True) == json.dumps(d, sort_keys=True)

    def test_different_seeds_differ(self):
        a = suite_frontier(seed=0, unions=5, max_members=4)
        b = suite_frontier(seed=1, unions=5, max_members=4)
        assert a["corners"] != b["corners"] or a != b


def test_suite_registry_is_complete():
    assert set(SUITES) == {"entropy-ineq", "cond-entropy-ineq", "kraft",
                           "converse", "frontier", "split-lemma", "sandwich"}
    for fn in SUITES.values():
        assert callable(fn)
