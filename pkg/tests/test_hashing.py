import itertools

import numpy as np
import pytest
from scipy.stats import chi2

from usnc.gf2 import BitString, hamming_7_4
from usnc.hashing import (HashSeed, count_full_rank, enumerate_full_rank_seeds,
                          estimate_collision_probability,
                          exact_collision_probability, hash_codeword,
                          load_seed, preimage_sample, sample_seed, save_seed,
                          shifted_hash, verify_balanced)


def _rank_reference(mat):
    """Independent row-reduction over python tuples, no shared code."""
    rows = [list(r) for r in mat]
    k = len(rows[0])
    rank = 0
    for col in range(k):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@pytest.fixture(scope="module")
def hamming():
    return hamming_7_4()


class TestSampleSeed:
    def test_rank_one_row_nonzero(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            s = sample_seed(4, 1, rng)
            assert s.matrix.any()

    def test_square_is_invertible(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            s = sample_seed(4, 4, rng)
            assert _rank_reference(s.matrix) == 4

    def test_rank_matches_reference(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            s = sample_seed(4, 2, rng)
            assert _rank_reference(s.matrix) == 2

    def test_m_exceeding_k_rejected(self):
        with pytest.raises(ValueError):
            sample_seed(3, 4, np.random.default_rng(0))

    def test_rank_deficient_matrix_rejected(self):
        with pytest.raises(ValueError, match="rank"):
            HashSeed(np.array([[1, 0, 1], [1, 0, 1]], dtype=np.uint8))


class TestHash:
    def test_zero_codeword(self, hamming):
        rng = np.random.default_rng(3)
        s = sample_seed(4, 2, rng)
        assert hash_codeword(s, hamming, BitString.zeros(7)).weight() == 0

    def test_linearity(self, hamming):
        rng = np.random.default_rng(4)
        s = sample_seed(4, 2, rng)
        for _ in range(30):
            c1 = hamming.encode(BitString.random(4, rng))
            c2 = hamming.encode(BitString.random(4, rng))
            assert (hash_codeword(s, hamming, c1 ^ c2)
                    == hash_codeword(s, hamming, c1)
                    ^ hash_codeword(s, hamming, c2))

    def test_coordinate_projection(self, hamming):
        seed = HashSeed(np.array([[1, 0, 0, 0], [0, 1, 0, 0]], dtype=np.uint8))
        c = hamming.encode(BitString.from01("1011"))
        assert hash_codeword(seed, hamming, c) == BitString.from01("10")

    def test_non_codeword_rejected(self, hamming):
        s = sample_seed(4, 1, np.random.default_rng(5))
        bad = BitString.from01("1000000")
        with pytest.raises(ValueError, match="not a codeword"):
            hash_codeword(s, hamming, bad)


class TestPreimage:
    def test_bijective_seed(self, hamming):
        rng = np.random.default_rng(6)
        s = sample_seed(4, 4, rng)
        target = BitString.from01("1101")
        c1 = preimage_sample(s, hamming, target, rng)
        c2 = preimage_sample(s, hamming, target, rng)
        assert c1 == c2  # unique preimage
        assert hash_codeword(s, hamming, c1) == target

    def test_roundtrip_always(self, hamming):
        rng = np.random.default_rng(7)
        for _ in range(50):
            s = sample_seed(4, 2, rng)
            target = BitString.random(2, rng)
            c = preimage_sample(s, hamming, target, rng)
            assert hamming.contains(c)
            assert hash_codeword(s, hamming, c) == target

    def test_uniform_on_preimage_chi_square(self, hamming):
        # enumerate the exact preimage set, then test 1e5 draws against it
        rng = np.random.default_rng(8)
        s = sample_seed(4, 1, rng)
        target = BitString.from01("1")
        preimage = [hamming.encode(BitString(list(u)))
                    for u in itertools.product([0, 1], repeat=4)
                    if hash_codeword(s, hamming,
                                     hamming.encode(BitString(list(u))))
                    == target]
        assert len(preimage) == 8
        index = {c: i for i, c in enumerate(preimage)}
        counts = np.zeros(8)
        draws = 10 ** 5
        for _ in range(draws):
            counts[index[preimage_sample(s, hamming, target, rng)]] += 1
        expected = draws / 8
        stat = float(((counts - expected) ** 2 / expected).sum())
        assert stat < chi2.ppf(0.99, df=7)


class TestShiftedHash:
    def test_zero_shift(self, hamming):
        rng = np.random.default_rng(9)
        s = sample_seed(4, 2, rng)
        c = hamming.encode(BitString.random(4, rng))
        zero_rep = BitString.zeros(7)
        assert shifted_hash(s, hamming, zero_rep, c) == hash_codeword(s, hamming, c)

    def test_self_shift(self, hamming):
        rng = np.random.default_rng(10)
        s = sample_seed(4, 2, rng)
        rep = hamming.coset_representative(
            hamming.syndrome(BitString.from01("1000000")))
        assert shifted_hash(s, hamming, rep, rep).weight() == 0

    def test_definition(self, hamming):
        rng = np.random.default_rng(11)
        s = sample_seed(4, 2, rng)
        rep = hamming.coset_representative(
            hamming.syndrome(BitString.from01("0000001")))
        for _ in range(20):
            c = hamming.encode(BitString.random(4, rng))
            assert (shifted_hash(s, hamming, rep, c ^ rep)
                    == hash_codeword(s, hamming, c))

    def test_wrong_coset_rejected(self, hamming):
        rng = np.random.default_rng(12)
        s = sample_seed(4, 2, rng)
        rep = hamming.coset_representative(
            hamming.syndrome(BitString.from01("1000000")))
        c = hamming.encode(BitString.random(4, rng))  # zero syndrome
        with pytest.raises(ValueError, match="coset"):
            shifted_hash(s, hamming, rep, c)


class TestBalanced:
    def test_full_rank_balanced(self, hamming):
        rng = np.random.default_rng(13)
        for _ in range(10):
            s = sample_seed(4, 2, rng)
            rep = verify_balanced(s, hamming)
            assert rep["balanced"]
            assert np.all(rep["counts"] == 4)  # four preimages of size four

    def test_rank_deficient_unbalanced(self, hamming):
        rep = verify_balanced(np.array([[1, 0, 1, 0], [1, 0, 1, 0]],
                                       dtype=np.uint8), hamming)
        assert not rep["balanced"]
        assert (rep["counts"] == 0).any()


class TestTwoUniversality:
    @pytest.mark.parametrize("k, m", [(4, 1), (4, 2), (5, 2), (6, 2)])
    def test_exact_over_all_seeds(self, k, m):
        seeds = enumerate_full_rank_seeds(k, m)
        assert len(seeds) == count_full_rank(k, m)
        mats = np.stack([s.matrix for s in seeds])
        for w_int in range(1, 1 << k):
            w = ((w_int >> np.arange(k)) & 1).astype(np.uint8)
            collisions = ~(((mats @ w) & 1).any(axis=1))
            frac = collisions.mean()
            assert frac <= 2.0 ** -m + 1e-12
            assert frac == pytest.approx(exact_collision_probability(k, m))

    def test_empirical_estimate(self):
        rng = np.random.default_rng(14)
        est = estimate_collision_probability(6, 2, trials=2000, rng=rng)
        exact = exact_collision_probability(6, 2)
        se = np.sqrt(exact * (1 - exact) / 2000)
        assert est <= 2.0 ** -2 + 3 * se
        assert est == pytest.approx(exact, abs=4 * se)

    def test_injective_when_m_equals_k(self):
        rng = np.random.default_rng(15)
        assert estimate_collision_probability(4, 4, trials=10, rng=rng) == 0.0


class TestSeedFiles:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(16)
        seed = sample_seed(6, 3, rng)
        path = tmp_path / "seed.txt"
        save_seed(seed, path)
        assert load_seed(path) == seed

    def test_malformed(self, tmp_path):
        path = tmp_path / "seed.txt"
        path.write_text("2 3\n101\n")
        with pytest.raises(ValueError, match="rows"):
            load_seed(path)
        path.write_text("1 3\n10\n")
        with pytest.raises(ValueError):
            load_seed(path)
