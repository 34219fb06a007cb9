import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neurise.errors import InvalidInputError, ParseError
from neurise.model import (INDICATOR, MONOMIAL, Alphabet, BasisTerm, EnergyModel, SampleSet, build_partial_basis,
                           count_grise_params, eval_basis, eval_energy, gen_er_pairwise, gen_hypergraph_model,
                           gen_one_d_model, model_from_dict, model_to_dict, parse_samples, read_model, read_samples,
                           write_model, write_samples)


class TestEvalBasis:
    def test_indicator_match(self):
        assert eval_basis(BasisTerm((0,), INDICATOR, (2,)), np.array([2]), q=4) == pytest.approx(0.75)

    def test_indicator_mismatch(self):
        assert eval_basis(BasisTerm((0,), INDICATOR, (2,)), np.array([3]), q=4) == pytest.approx(-0.25)

    def test_monomial_aligned(self):
        assert eval_basis(BasisTerm((0, 1)), np.array([0, 0])) == 1.0

    def test_monomial_opposed(self):
        assert eval_basis(BasisTerm((0, 1)), np.array([0, 1])) == -1.0

    def test_symbol_out_of_range(self):
        with pytest.raises(InvalidInputError):
            eval_basis(BasisTerm((0,), INDICATOR, (1,)), np.array([4]), q=4)

    def test_bad_terms(self):
        with pytest.raises(InvalidInputError):
            BasisTerm((1, 0))
        with pytest.raises(InvalidInputError):
            BasisTerm(())
        with pytest.raises(InvalidInputError):
            BasisTerm((0, 1), INDICATOR, (0,))
        with pytest.raises(InvalidInputError):
            BasisTerm((0,), MONOMIAL, (0,))


class TestEnergy:
    def test_empty_model(self):
        m = EnergyModel(3, Alphabet(2), ())
        assert eval_energy(m, [1, 0, 1]) == 0.0

    def test_single_pair(self):
        m = EnergyModel(2, Alphabet(2), (BasisTerm((0, 1), strength=1.0),))
        assert eval_energy(m, [0, 0]) == 1.0

    def test_one_d_hand_expansion(self):
        m = gen_one_d_model(3, 2, [0.5, -0.5])
        # spins (+1, +1, -1): 0.5 * (1 + 1 - 1) - 0.5 * (1 - 1)
        assert eval_energy(m, [0, 0, 1]) == pytest.approx(0.5)

    def test_monomial_needs_binary(self):
        with pytest.raises(InvalidInputError):
            EnergyModel(2, Alphabet(3), (BasisTerm((0, 1), strength=1.0),))

    def test_duplicates_rejected(self):
        with pytest.raises(InvalidInputError):
            EnergyModel(2, Alphabet(2), (BasisTerm((0, 1), strength=1.0), BasisTerm((0, 1), strength=2.0)))

    def test_vectorized_matches_scalar(self):
        m = gen_er_pairwise(6, 0.5, (-1, 1), seed=3)
        rng = np.random.default_rng(0)
        configs = rng.integers(0, 2, size=(20, 6))
        np.testing.assert_allclose(m.energy(configs), [eval_energy(m, c) for c in configs])


class TestPartialBasis:
    @pytest.mark.parametrize("p,q,L,kind,count", [
        (10, 2, 5, MONOMIAL, 256),
        (10, 2, 6, MONOMIAL, 382),
    ])
    def test_reported_counts(self, p, q, L, kind, count):
        assert len(build_partial_basis(p, q, L, 0, kind)) == count

    def test_indicator_count_q4(self):
        assert len(build_partial_basis(7, 4, 7, 0, INDICATOR)) == 62500

    def test_order_too_large(self):
        with pytest.raises(InvalidInputError):
            build_partial_basis(3, 2, 4, 0)

    def test_lexicographic_order(self):
        basis = build_partial_basis(5, 2, 3, 2)
        keys = [t.key for t in basis.terms]
        assert keys == sorted(keys)
        assert all(2 in t.sites for t in basis.terms)

    def test_indicator_labels_enumerated(self):
        basis = build_partial_basis(3, 3, 2, 1)
        assert len(basis) == 3 + 2 * 9
        assert basis.terms[0].labels == (0,)


class TestParamCount:
    @pytest.mark.parametrize("args,expected", [
        ((10, 2, 5, MONOMIAL), 256),
        ((10, 2, 6, MONOMIAL), 382),
        ((7, 4, 7, INDICATOR), 62500),
        ((15, 2, 4, MONOMIAL), 470),
    ])
    def test_values(self, args, expected):
        assert count_grise_params(*args) == expected

    def test_fifteen_site_fourth_order_by_binomials(self):
        assert count_grise_params(15, 2, 4) == sum(math.comb(14, k) for k in range(4))

    def test_matches_enumeration_binary(self):
        for p in range(1, 13):
            for L in range(1, p + 1):
                assert count_grise_params(p, 2, L) == len(build_partial_basis(p, 2, L, p // 2))

    def test_matches_enumeration_q4(self):
        for p in range(1, 13):
            for L in range(1, p + 1):
                c = count_grise_params(p, 4, L, INDICATOR)
                if c > 100_000:
                    continue
                assert c == len(build_partial_basis(p, 4, L, 0, INDICATOR))


class TestGenerators:
    def test_one_d_fields(self):
        m = gen_one_d_model(3, 1, [1.0])
        assert [t.sites for t in m.terms] == [(0,), (1,), (2,)]
        assert all(t.strength == 1.0 for t in m.terms)

    def test_one_d_term_count(self):
        m = gen_one_d_model(10, 6, np.ones(6))
        assert len(m.terms) == sum(11 - l for l in range(1, 7)) == 45

    def test_one_d_only_triple(self):
        m = gen_one_d_model(3, 3, [0, 0, 1])
        assert [t.sites for t in m.terms if t.strength != 0] == [(0, 1, 2)]

    def test_one_d_bad_order(self):
        with pytest.raises(InvalidInputError):
            gen_one_d_model(3, 4, [1, 1, 1, 1])

    def test_er_empty_and_complete(self):
        assert gen_er_pairwise(5, 0.0, seed=1).terms == ()
        assert len(gen_er_pairwise(4, 1.0, seed=1).terms) == 6

    def test_er_mean_degree(self):
        a = gen_er_pairwise(20, mean_degree=2.6, interval=(0.3, 1.3), seed=4)
        b = gen_er_pairwise(20, 2.6 / 19, interval=(0.3, 1.3), seed=4)
        assert a == b
        assert all(0.3 <= t.strength <= 1.3 for t in a.terms)

    def test_hypergraph_canonical(self):
        m = gen_hypergraph_model(seed=2)
        assert len(m.terms) == 16
        five = [t for t in m.terms if t.order == 5]
        assert len(five) == 1 and five[0].sites == (0, 2, 4, 6, 8) and five[0].strength == 0.5
        pairs = [t for t in m.terms if t.order == 2]
        assert {t.sites for t in pairs} == {(i, i + 1) for i in range(14)} | {(0, 14)}
        assert all(0.3 <= t.strength <= 1.3 for t in pairs)

    @pytest.mark.parametrize("gen", [
        lambda s: gen_er_pairwise(9, 0.4, (-1, 1), seed=s),
        lambda s: gen_hypergraph_model(seed=s),
    ])
    def test_seed_determinism(self, gen):
        assert gen(5) == gen(5)
        assert gen(5) != gen(6)


@given(q=st.integers(2, 6), s=st.integers(0, 5))
def test_single_site_indicator_centered(q, s):
    s = s % q
    term = BasisTerm((0,), INDICATOR, (s,))
    total = sum(eval_basis(term, np.array([sigma]), q) for sigma in range(q))
    assert abs(total) < 1e-12


@given(q=st.integers(2, 4), data=st.data())
@settings(max_examples=50)
def test_multi_site_indicator_centered(q, data):
    k = data.draw(st.integers(2, 3))
    labels = tuple(data.draw(st.integers(0, q - 1)) for _ in range(k))
    term = BasisTerm(tuple(range(k)), INDICATOR, labels)
    others = [data.draw(st.integers(0, q - 1)) for _ in range(k)]
    pos = data.draw(st.integers(0, k - 1))
    rows = []
    for sigma in range(q):
        c = list(others)
        c[pos] = sigma
        rows.append(c)
    assert abs(term.values(np.array(rows), q).sum()) < 1e-12


@given(p=st.integers(1, 8), data=st.data())
@settings(max_examples=30)
def test_zero_strength_one_d_is_zero(p, data):
    L = data.draw(st.integers(1, p))
    m = gen_one_d_model(p, L, np.zeros(L))
    configs = np.array(list(itertools.product([0, 1], repeat=p)))
    assert np.all(m.energy(configs) == 0.0)


class TestIO:
    def test_model_round_trip(self, tmp_path):
        for m in (gen_er_pairwise(7, 0.5, (-1, 1), seed=2), gen_hypergraph_model(seed=1),
                  EnergyModel(3, Alphabet(3), (BasisTerm((0, 2), INDICATOR, (1, 2), -0.7),))):
            write_model(m, tmp_path / "m.json")
            assert read_model(tmp_path / "m.json") == m

    def test_sample_row(self):
        s = parse_samples("0 1 0\n", q=2)
        assert s.data.tolist() == [[0, 1, 0]] and s.p == 3

    def test_symbol_out_of_range(self):
        with pytest.raises(ParseError) as exc:
            parse_samples("# p=3 q=4\n0 1 2\n3 4 0\n")
        assert exc.value.line == 3 and exc.value.field == 1

    def test_ragged_row(self):
        with pytest.raises(ParseError) as exc:
            parse_samples("0 1 0\n0 1\n", q=2)
        assert exc.value.line == 2

    def test_bad_model_file(self, tmp_path):
        (tmp_path / "bad.json").write_text('{"p": 3, "q": 2, "terms": [{"sites": [2, 1], "strength": 1}]}')
        with pytest.raises(ParseError) as exc:
            read_model(tmp_path / "bad.json")
        assert exc.value.field == "terms[0]"
        (tmp_path / "bad2.json").write_text('{"p": 3,\n "q": }')
        with pytest.raises(ParseError) as exc:
            read_model(tmp_path / "bad2.json")
        assert exc.value.line == 2
        with pytest.raises(ParseError):
            model_from_dict({"p": 3, "terms": []})

    def test_samples_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        s = SampleSet(5, Alphabet(4), rng.integers(0, 4, size=(40, 5)))
        write_samples(s, tmp_path / "s.txt")
        assert read_samples(tmp_path / "s.txt") == s
        assert model_to_dict(gen_one_d_model(3, 1, [1.0]))["q"] == 2
