import pytest
from hypothesis import given
from hypothesis import strategies as st

from srlz.container import (
    BudgetExceededError,
    InfeasibleError,
    MODE_SR,
    ModeMismatchError,
    ROLE_STAGE1,
    ROLE_STAGE2,
    Segment,
    StreamFormatError,
    pack_segments,
)
from srlz.lz_core import BINARY, Alphabet, Sequence, lz_encode
from srlz.regions import SearchBudget
from srlz.sr_codec import (
    DistortionSpec,
    PerLetterDistortion,
    SrEncoded,
    candidate_pairs,
    distortion,
    hamming_spec,
    in_ball,
    nearest_feasible,
    select_reproductions,
    sr_decode_full,
    sr_decode_stage1,
    sr_encode,
)


def bits(text: str) -> Sequence:
    return Sequence.from_symbols(BINARY, list(text))


class TestPerLetterDistortion:
    def test_hamming_matches_on_names(self):
        d = PerLetterDistortion("hamming")
        cost = d.letter_cost(Alphabet(("a", "b")), Alphabet(("b", "c")))
        assert cost == [[1.0, 1.0], [0.0, 1.0]]

    def test_absdiff_on_decimal_names(self):
        d = PerLetterDistortion("absdiff")
        cost = d.letter_cost(Alphabet(("0", "2", "5")), Alphabet(("1", "4")))
        assert cost == [[1.0, 4.0], [1.0, 2.0], [4.0, 1.0]]

    def test_absdiff_rejects_nonnumeric_names(self):
        d = PerLetterDistortion("absdiff")
        with pytest.raises(ValueError, match="integer symbol names"):
            d.letter_cost(Alphabet(("a", "b")), Alphabet(("0", "1")))

    def test_table_kind(self):
        t = {("a", "x"): 0.0, ("a", "y"): 2.0, ("b", "x"): 1.0, ("b", "y"): 0.5}
        d = PerLetterDistortion("table", table=t, reproduction=Alphabet(("x", "y")))
        cost = d.letter_cost(Alphabet(("a", "b")), d.rep_alphabet(Alphabet(("a", "b"))))
        assert cost == [[0.0, 2.0], [1.0, 0.5]]

    def test_table_without_table(self):
        with pytest.raises(ValueError, match="without a table"):
            PerLetterDistortion("table").letter_cost(BINARY, BINARY)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown distortion kind"):
            PerLetterDistortion("euclid").letter_cost(BINARY, BINARY)

    def test_rep_alphabet_defaults_to_source(self):
        d = PerLetterDistortion("hamming")
        assert d.rep_alphabet(BINARY) is BINARY


class TestDistortionTotals:
    def test_hamming_counts_mismatches(self):
        d = PerLetterDistortion("hamming")
        assert distortion(bits("0101"), bits("0111"), d) == 1.0
        assert distortion(bits("0101"), bits("0101"), d) == 0.0
        assert distortion(bits("0101"), bits("1010"), d) == 4.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            distortion(bits("01"), bits("0"), PerLetterDistortion("hamming"))

    def test_in_ball_boundary_inclusive(self):
        spec = hamming_spec(0.25, 0.0)
        x = bits("0000")
        assert in_ball(x, bits("0001"), x, spec)       # exactly at level1
        assert not in_ball(x, bits("0011"), x, spec)   # above level1
        assert not in_ball(x, x, bits("0001"), spec)   # fine side violated


class TestNearestFeasible:
    def test_identity_at_level_zero(self):
        x = bits("0110")
        assert nearest_feasible(x, PerLetterDistortion("hamming"), 0.0) == x

    def test_absdiff_snaps_to_closest_value(self):
        x = Sequence.from_symbols(Alphabet(("0", "3", "9")), ["0", "9", "3", "9"])
        rep = Alphabet(("2", "8"))
        d = PerLetterDistortion("absdiff", reproduction=rep)
        y = nearest_feasible(x, d, 2.0)
        assert [rep.symbols[v] for v in y.data] == ["2", "8", "2", "8"]

    def test_unreachable_level(self):
        x = bits("0101")
        rep = Alphabet(("7",))
        d = PerLetterDistortion("absdiff", reproduction=rep)
        with pytest.raises(InfeasibleError, match="unreachable"):
            nearest_feasible(x, d, 1.0)


class TestHammingSpec:
    def test_central_level_optional(self):
        spec = hamming_spec(0.1, 0.2)
        assert spec.d0 is None and spec.level0 is None
        spec0 = hamming_spec(0.1, 0.2, 0.0)
        assert spec0.d0 is not None and spec0.level0 == 0.0


class TestRefinementCodec:
    def test_round_trip(self):
        x = bits("0100011011000001")
        xhat = bits("0000011011000001")
        xtilde = bits("0100011011000101")
        enc = sr_encode(x, xhat, xtilde)
        assert enc.n == 16
        assert enc.r1 == enc.stage1.payload_bits / 16
        assert enc.r2 == enc.stage2.payload_bits / 16
        raw = enc.to_bytes()
        assert sr_decode_stage1(raw) == xhat
        got_hat, got_til = sr_decode_full(raw)
        assert got_hat == xhat and got_til == xtilde

    def test_from_bytes_restores_rates(self):
        x = bits("01101001")
        enc = sr_encode(x, x, x)
        back = SrEncoded.from_bytes(enc.to_bytes())
        assert back.n == 8
        assert back.r1 == pytest.approx(enc.r1)
        assert back.r2 == pytest.approx(enc.r2)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="match the source length"):
            sr_encode(bits("0101"), bits("010"), bits("0101"))

    def test_wrong_container_mode(self):
        plain = lz_encode(bits("0101")).to_bytes()
        with pytest.raises(ModeMismatchError):
            SrEncoded.from_bytes(plain)

    def test_swapped_stage_segments_rejected(self):
        x = bits("01101001")
        enc = sr_encode(x, x, x)
        swapped = pack_segments(MODE_SR, 8, [
            Segment(ROLE_STAGE1, enc.stage2.payload_bits, enc.stage2.to_bytes()),
            Segment(ROLE_STAGE2, enc.stage1.payload_bits, enc.stage1.to_bytes()),
        ])
        with pytest.raises(StreamFormatError, match="wrong modes"):
            SrEncoded.from_bytes(swapped)

    def test_missing_stage_segment(self):
        x = bits("01101001")
        enc = sr_encode(x, x, x)
        only1 = pack_segments(MODE_SR, 8, [
            Segment(ROLE_STAGE1, enc.stage1.payload_bits, enc.stage1.to_bytes()),
        ])
        with pytest.raises(StreamFormatError, match="missing a stage"):
            SrEncoded.from_bytes(only1)


@given(st.text(alphabet="01", min_size=1, max_size=48),
       st.text(alphabet="01", min_size=1, max_size=48),
       st.text(alphabet="01", min_size=1, max_size=48))
def test_codec_round_trips_any_triple(a, b, c):
    n = min(len(a), len(b), len(c))
    x, xhat, xtilde = bits(a[:n]), bits(b[:n]), bits(c[:n])
    got_hat, got_til = sr_decode_full(sr_encode(x, xhat, xtilde).to_bytes())
    assert got_hat == xhat and got_til == xtilde


class TestCandidatePairs:
    def test_exhaustive_ball_sizes(self):
        pairs, meta = candidate_pairs(bits("01"), hamming_spec(0.5, 0.0),
                                      SearchBudget())
        assert meta["search_mode"] == "exhaustive"
        assert meta["ball1"] == 3 and meta["ball2"] == 1
        assert len(pairs) == 3
        assert all(til == bits("01") for _, til in pairs)

    def test_all_pairs_feasible(self):
        spec = hamming_spec(0.25, 0.125)
        x = bits("01100110")
        pairs, _ = candidate_pairs(x, spec, SearchBudget())
        assert pairs
        for hat, til in pairs:
            assert in_ball(x, hat, til, spec)

    def test_exhaustive_mode_budget_error(self):
        spec = hamming_spec(0.25, 0.25)
        with pytest.raises(BudgetExceededError, match="exceed the exhaustive"):
            candidate_pairs(bits("01100110"), spec,
                            SearchBudget(mode="exhaustive", exhaustive_limit=10))

    def test_auto_falls_back_to_greedy(self):
        spec = hamming_spec(0.25, 0.125)
        x = bits("0110011001100110")
        search = SearchBudget(exhaustive_limit=10, evaluations=64, restarts=1)
        pairs, meta = candidate_pairs(x, spec, search)
        assert meta["search_mode"] == "greedy"
        for hat, til in pairs:
            assert in_ball(x, hat, til, spec)

    def test_greedy_is_deterministic_per_seed(self):
        spec = hamming_spec(0.25, 0.25)
        x = bits("0110100110010110")
        search = SearchBudget(mode="greedy", evaluations=128, restarts=2, seed=3)
        p1, _ = candidate_pairs(x, spec, search)
        p2, _ = candidate_pairs(x, spec, search)
        assert [(h.data, t.data) for h, t in p1] == [(h.data, t.data) for h, t in p2]

    def test_empty_ball_is_infeasible(self):
        rep = Alphabet(("5",))
        d = PerLetterDistortion("absdiff", reproduction=rep)
        spec = DistortionSpec(d1=d, d2=PerLetterDistortion("hamming"),
                              level1=0.5, level2=0.0)
        with pytest.raises(InfeasibleError):
            candidate_pairs(bits("0101"), spec, SearchBudget())

    def test_unknown_mode(self):
        with pytest.raises(ValueError, match="unknown search mode"):
            candidate_pairs(bits("01"), hamming_spec(0.0, 0.0),
                            SearchBudget(mode="annealed"))


class TestSelection:
    def test_zero_levels_return_source(self):
        x = bits("01101001")
        hat, til, diag = select_reproductions(x, hamming_spec(0.0, 0.0))
        assert hat == x and til == x
        assert diag["search_mode"] == "exhaustive"
        assert diag["pairs"] == 1

    def test_objective_value_matches_brute_force(self):
        from srlz.cond_lz import joint_parse
        from srlz.lz_core import rho_lz

        x = bits("01000110")
        spec = hamming_spec(0.25, 0.125)
        search = SearchBudget()
        pairs, _ = candidate_pairs(x, spec, search)
        for objective, fn in (("min-r1", lambda r1, rc: r1),
                              ("min-sum", lambda r1, rc: r1 + rc)):
            hat, til, diag = select_reproductions(x, spec, objective, search)
            best = min(fn(rho_lz(h), joint_parse(h, t).rho_cond) for h, t in pairs)
            assert diag["objective_value"] == pytest.approx(best)
            assert in_ball(x, hat, til, spec)

    def test_weight_endpoints_match_named_objectives(self):
        x = bits("01000110")
        spec = hamming_spec(0.25, 0.125)
        h0, t0, d0 = select_reproductions(x, spec, "weighted",
                                          SearchBudget(weight=0.0))
        h1, t1, d1 = select_reproductions(x, spec, "min-r1")
        assert (h0, t0) == (h1, t1)
        hs, ts, ds = select_reproductions(x, spec, "weighted",
                                          SearchBudget(weight=1.0))
        hm, tm, dm = select_reproductions(x, spec, "min-sum")
        assert (hs, ts) == (hm, tm)

    def test_bad_weight(self):
        with pytest.raises(ValueError, match="weight"):
            select_reproductions(bits("01"), hamming_spec(0.0, 0.0),
                                 "weighted", SearchBudget(weight=1.5))

    def test_unknown_objective(self):
        with pytest.raises(ValueError, match="unknown objective"):
            select_reproductions(bits("01"), hamming_spec(0.0, 0.0), "fastest")

    def test_selection_is_deterministic(self):
        x = bits("0110100101001101")
        spec = hamming_spec(0.125, 0.0625)
        search = SearchBudget(exhaustive_limit=100, evaluations=128,
                              restarts=2, seed=11)
        a = select_reproductions(x, spec, "min-sum", search)
        b = select_reproductions(x, spec, "min-sum", search)
        assert (a[0], a[1]) == (b[0], b[1])
