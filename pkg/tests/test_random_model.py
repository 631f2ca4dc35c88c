import math

import mpmath
import numpy as np
import pytest

from cnfgraph import (
    CapExceeded,
    ModelParams,
    ValidationError,
    choose_clause_count,
    materialize,
    replicate_seed,
    sample_bernoulli_graph,
    sample_cnf,
)
from cnfgraph.random_model import make_rng, pack_bits, splitmix64


def _reference_count(p, N, d):
    mpmath.mp.dps = 50
    x = mpmath.log(mpmath.mpf(N) / mpmath.mpf(d)) / mpmath.mpf(p) ** 2
    return int(mpmath.floor(x + mpmath.mpf("0.5")))


class TestChooseClauseCount:
    @pytest.mark.parametrize("p, N, d, expected", [(0.5, 1024, 2, 25), (0.1, 1000, 10, 461)])
    def test_examples(self, p, N, d, expected):
        assert _reference_count(p, N, d) == expected
        assert choose_clause_count(p, N, d) == expected

    @pytest.mark.parametrize("p", [0.01, 0.3, 0.9])
    def test_no_room_means_no_clauses(self, p):
        assert choose_clause_count(p, 50, 50) == 0

    @pytest.mark.parametrize("p, N, d", [(0, 10, 2), (1, 10, 2), (0.5, 10, 20), (0.5, 0, 1), (0.5, 10, 0)])
    def test_domain(self, p, N, d):
        with pytest.raises(ValidationError):
            choose_clause_count(p, N, d)

    def test_monotone(self):
        ds = [1, 2, 3, 5, 8, 13, 21]
        Ns = [32, 64, 100, 1000, 4096]
        for p in (0.1, 0.3, 0.5):
            for N in Ns:
                counts = [choose_clause_count(p, N, d) for d in ds]
                assert counts == sorted(counts, reverse=True)
            for d in ds:
                counts = [choose_clause_count(p, N, d) for N in Ns]
                assert counts == sorted(counts)

    def test_matches_high_precision_on_grid(self):
        for p in (0.05, 0.2, 0.35):
            for N in (100, 777, 4096):
                for d in (2, 7.5, 31):
                    assert choose_clause_count(p, N, d) == _reference_count(p, N, d)

    def test_degree_relation(self):
        p, N, d = 0.2, 10_000, 10
        n = choose_clause_count(p, N, d)
        # n p^2 is ln(N/d) up to the rounding of n
        assert abs(n * p * p - math.log(N / d)) <= p * p / 2


class TestModelParams:
    def test_derived_count(self):
        params = ModelParams(d=2, p=0.5, n_left=1024, n_right=1024)
        assert params.clause_count == 25

    def test_validation(self):
        with pytest.raises(ValidationError):
            ModelParams(d=2, p=0.0, n_left=10, n_right=10)
        with pytest.raises(ValidationError):
            ModelParams(d=20, p=0.3, n_left=10, n_right=10)
        with pytest.raises(ValidationError):
            ModelParams(d=None, p=0.3, n_left=10, n_right=10)
        with pytest.raises(ValidationError):
            ModelParams(d=2, p=0.3, n_left=10, n_right=10, seed=-1)

    def test_degenerate_flag(self):
        assert ModelParams(d=None, p=0.0, n_left=2, n_right=2, n_clauses=3,
                           allow_degenerate=True).clause_count == 3

    def test_dict_round_trip(self):
        params = ModelParams(d=3.0, p=0.25, n_left=40, n_right=50, n_clauses=7, seed=99)
        assert ModelParams.from_dict(params.to_dict()) == params
        assert "n_clauses" not in ModelParams(d=3.0, p=0.25, n_left=40, n_right=50).to_dict()


class TestSampleCnf:
    def test_p_zero_is_complete(self):
        params = ModelParams(None, 0.0, 5, 6, n_clauses=8, allow_degenerate=True)
        cs = sample_cnf(params)
        assert not any(int(m) for m in cs.left_masks)
        assert materialize(cs).edge_count == 30

    def test_p_one_is_empty(self):
        params = ModelParams(None, 1.0, 5, 6, n_clauses=3, allow_degenerate=True)
        cs = sample_cnf(params)
        assert all(int(m) == 0b111 for m in cs.left_masks)
        assert materialize(cs).edge_count == 0

    def test_bit_frequency(self):
        params = ModelParams(None, 0.3, 1000, 1000, n_clauses=20, seed=5)
        cs = sample_cnf(params)
        ones = sum(bin(int(m)).count("1") for m in np.concatenate([cs.left_masks, cs.right_masks]))
        trials = 20 * 2000
        sigma = math.sqrt(0.3 * 0.7 / trials)
        assert abs(ones / trials - 0.3) <= 5 * sigma

    def test_bit_positions_are_balanced(self):
        params = ModelParams(None, 0.5, 2000, 1, n_clauses=12, seed=11)
        cs = sample_cnf(params)
        for i in range(12):
            frac = np.mean([(int(m) >> i) & 1 for m in cs.left_masks])
            assert abs(frac - 0.5) <= 5 * math.sqrt(0.25 / 2000)

    def test_deterministic(self):
        params = ModelParams(None, 0.3, 50, 60, n_clauses=9, seed=1234)
        assert sample_cnf(params) == sample_cnf(params)
        assert sample_cnf(params) != sample_cnf(params.with_seed(1235))

    def test_frozen_stream(self):
        # Pins the documented stream: Philox keyed by the seed, u < p.
        cs = sample_cnf(ModelParams(None, 0.5, 3, 2, n_clauses=4, seed=7))
        u = np.random.Generator(np.random.Philox(key=7)).random((5, 4)) < 0.5
        expected = [sum(int(b) << i for i, b in enumerate(row)) for row in u]
        assert [int(m) for m in cs.left_masks] == expected[:3]
        assert [int(m) for m in cs.right_masks] == expected[3:]

    def test_wide_masks(self):
        cs = sample_cnf(ModelParams(None, 0.5, 4, 4, n_clauses=130, seed=3))
        assert cs.n == 130 and not cs.fixed_width
        assert max(int(m) for m in cs.left_masks) < 1 << 130

    def test_clause_cap(self):
        with pytest.raises(CapExceeded):
            sample_cnf(ModelParams(None, 0.5, 4, 4, n_clauses=100), max_clauses=64)


def test_pack_bits_agrees_across_widths():
    bits = np.random.default_rng(0).random((6, 64)) < 0.5
    narrow = [int(x) for x in pack_bits(bits)]
    wide = pack_bits(np.concatenate([bits, np.zeros((6, 1), dtype=bool)], axis=1))
    assert narrow == wide


class TestBernoulliGraph:
    def test_extremes(self):
        assert sample_bernoulli_graph(4, 5, 0.0, 1).edge_count == 0
        assert sample_bernoulli_graph(4, 5, 1.0, 1).edge_count == 20

    def test_edge_count(self):
        g = sample_bernoulli_graph(100, 100, 0.5, make_rng(77))
        assert abs(g.edge_count - 5000) <= 5 * 50

    def test_reproducible(self):
        assert sample_bernoulli_graph(10, 10, 0.3, 9) == sample_bernoulli_graph(10, 10, 0.3, 9)

    def test_domain(self):
        with pytest.raises(ValidationError):
            sample_bernoulli_graph(2, 2, 1.5, 0)


class TestSeeds:
    def test_replicate_seeds_distinct(self):
        seeds = {replicate_seed(42, r) for r in range(10_000)}
        assert len(seeds) == 10_000
        assert all(0 <= s < 2**64 for s in seeds)

    def test_pure_function(self):
        assert replicate_seed(42, 3) == replicate_seed(42, 3)
        assert replicate_seed(42, 3) != replicate_seed(43, 3)

    def test_splitmix_reference_value(self):
        # first output of SplitMix64 seeded with 0
        assert splitmix64(0) == 0xE220A8397B1DCDAF

    def test_rejects_bad_seed(self):
        with pytest.raises(ValidationError):
            make_rng(2**64)
