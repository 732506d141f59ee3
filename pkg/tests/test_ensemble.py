import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaed.automorphism import GenAutomorphism, automorphism_powers, permutation_matrix
from gaed.bp import SUM_PRODUCT, DecoderConfig, decode
from gaed.code import LinearCode
from gaed.ensemble import (
    FIRST_PATH,
    GAED,
    IDENTITY,
    IGAED,
    Candidate,
    PathSpec,
    build_ensemble,
    correlation,
    gaed_path,
    gaed_preprocess,
    igaed_path,
    ml_in_the_list,
    run_ensemble,
)
from gaed.gf2 import BitMatrix

import oracles
from conftest import repetition_pcm


def test_preprocess_examples(t_ex):
    llrs = np.array([2.0, 2.0, -1.0])
    assert np.array_equal(gaed_preprocess(llrs, BitMatrix.identity(3)), llrs)
    perm = permutation_matrix([2, 0, 1])
    assert np.array_equal(gaed_preprocess(llrs, perm), [-1.0, 2.0, 2.0])
    assert np.allclose(gaed_preprocess(llrs, t_ex), [2.0, -0.7353257, -0.7353257], atol=1e-6)
    with pytest.raises(ValueError):
        gaed_preprocess(llrs[:2], t_ex)


def test_preprocess_batched_matches_rows(t_ex, rng):
    llrs = rng.normal(0, 3, (10, 3))
    out = gaed_preprocess(llrs, t_ex)
    for i in range(10):
        assert np.array_equal(out[i], gaed_preprocess(llrs[i], t_ex))


def test_identity_paths_equal_plain_decode(hamming, rng):
    llrs = rng.normal(1, 1, (50, 7)) * 2
    plain = decode(hamming.h, llrs)
    for mode in (GAED, IGAED):
        spec = PathSpec.build(hamming, GenAutomorphism.identity(7), mode)
        assert spec.mode == IDENTITY
        cand = spec.run(llrs)
        assert np.array_equal(cand.hard_bits, plain.hard_bits)
        assert np.array_equal(cand.valid, plain.converged)


def test_gaed_permutation_is_decode_of_permuted_llrs(hamming, rng):
    perm = [1, 0, 3, 2, 4, 5, 6]
    aut = GenAutomorphism.from_matrix(permutation_matrix(perm))
    spec = PathSpec.build(hamming, aut, GAED)
    llrs = rng.normal(1, 1, (50, 7)) * 2
    cand = gaed_path(llrs, spec)
    res = decode(hamming.h, llrs[:, perm])
    back = np.empty_like(res.hard_bits)
    back[:, perm] = res.hard_bits
    assert np.array_equal(cand.hard_bits, back)


def test_valid_gaed_candidate_maps_to_decoder_output(hamming, hamming_t, rng):
    aut = GenAutomorphism.from_matrix(hamming_t)
    spec = PathSpec.build(hamming, aut, GAED)
    llrs = rng.normal(1, 0.8, (200, 7)) * 2
    cand = gaed_path(llrs, spec)
    res = decode(hamming.h, gaed_preprocess(llrs, hamming_t))
    mapped = (cand.hard_bits.astype(np.int64) @ hamming_t.array.T) % 2
    assert cand.valid.any()
    assert np.array_equal(mapped[cand.valid], res.hard_bits[cand.valid])


def test_igaed_permutation_is_bp_on_permuted_pcm(rng):
    h = repetition_pcm(4)
    code = LinearCode.from_pcm(h)
    perm = [3, 2, 1, 0]
    p = permutation_matrix(perm)
    spec = PathSpec.build(code, GenAutomorphism.from_matrix(p), IGAED)
    hp = BitMatrix.from_array((h.array.astype(np.int64) @ p.array) % 2)
    llrs = rng.normal(1, 1, (30, 4)) * 2
    assert np.array_equal(igaed_path(llrs, spec).hard_bits, decode(hp, llrs).hard_bits)


def test_igaed_example_readout(t_ex, h_ex):
    # T_ex is not an automorphism here: T(1,0,1) = (1,1,0) violates H, so the
    # pruned graph only admits the zero word even when the channel favours 101
    code = LinearCode.from_pcm(h_ex)
    spec = PathSpec.build(code, GenAutomorphism.from_matrix(t_ex), IGAED)
    cand = igaed_path(np.array([-10.0, 10.0, -10.0]), spec)
    assert np.array_equal(cand.hard_bits, [0, 0, 0])
    assert cand.valid and cand.correlation == -10.0


def test_igaed_reads_strong_codewords(hamming, hamming_t):
    spec = PathSpec.build(hamming, GenAutomorphism.from_matrix(hamming_t), IGAED)
    words = hamming.codebook()
    cand = igaed_path(10.0 * (1.0 - 2.0 * words), spec)
    assert np.array_equal(cand.hard_bits, words)
    assert cand.valid.all()


def test_path_mode_mismatch(hamming, hamming_t):
    g = PathSpec.build(hamming, GenAutomorphism.from_matrix(hamming_t), GAED)
    i = PathSpec.build(hamming, GenAutomorphism.from_matrix(hamming_t), IGAED)
    with pytest.raises(ValueError):
        igaed_path(np.zeros(7), g)
    with pytest.raises(ValueError):
        gaed_path(np.zeros(7), i)
    with pytest.raises(ValueError):
        PathSpec.build(hamming, GenAutomorphism.from_matrix(hamming_t), "bogus")


def _cand(bits, valid, llrs):
    bits = np.array(bits, dtype=np.uint8)
    return Candidate(bits, np.bool_(valid), correlation(bits, llrs), np.bool_(valid))


def test_ml_in_the_list_examples():
    llrs = np.array([2.0, -1.0, 3.0])
    a, b = _cand([0, 0, 0], True, llrs), _cand([0, 1, 0], True, llrs)
    assert a.correlation == 4.0 and b.correlation == 6.0
    res = ml_in_the_list([a, b], llrs)
    assert np.array_equal(res.chosen, [0, 1, 0]) and res.chosen_path == 1

    inv = _cand([0, 1, 0], False, llrs)
    res = ml_in_the_list([a, inv], llrs)
    assert res.chosen_path == 0

    bad0, bad1 = _cand([1, 1, 1], False, llrs), _cand([0, 1, 0], False, llrs)
    res = ml_in_the_list([bad0, bad1], llrs)
    assert res.chosen_path == 1 and not res.any_valid
    assert ml_in_the_list([bad0, bad1], llrs, FIRST_PATH).chosen_path == 0

    assert ml_in_the_list([b, b], llrs).chosen_path == 0
    with pytest.raises(ValueError):
        ml_in_the_list([], llrs)
    with pytest.raises(ValueError):
        ml_in_the_list([a], llrs, "nope")


def test_single_path_ensemble_is_bp(hamming, rng):
    llrs = rng.normal(1, 1, (100, 7)) * 2
    res = run_ensemble(llrs, build_ensemble(hamming, []))
    assert np.array_equal(res.chosen, decode(hamming.h, llrs).hard_bits)
    assert not res.chosen_path.any()
    with pytest.raises(ValueError):
        run_ensemble(llrs, [])


def test_auxiliary_path_rescues_failed_frame(hamming, hamming_t):
    # search for a frame the plain decoder fails on and an auxiliary path fixes
    auts = automorphism_powers(hamming_t, [1, -1, 2, -2])
    paths = build_ensemble(hamming, auts, GAED, DecoderConfig(max_iters=5))
    rng = np.random.default_rng(11)
    llrs = rng.normal(1, 0.9, (4000, 7)) * 2.5
    res = run_ensemble(llrs, paths)
    rescued = ~res.candidates[0].valid & res.any_valid
    assert rescued.any()
    i = int(np.flatnonzero(rescued)[0])
    assert res.chosen_path[i] > 0
    assert not ((hamming.h.array @ res.chosen[i]) % 2).any()


def test_validity_never_degrades_and_selection_is_monotone(hamming, hamming_t, rng):
    auts = automorphism_powers(hamming_t, [1, -1, 2, -2])
    llrs = rng.normal(1, 1, (2000, 7)) * 2
    for mode in (GAED, IGAED):
        paths = build_ensemble(hamming, auts, mode, DecoderConfig(max_iters=8))
        cands = [p.run(llrs) for p in paths]
        prev = None
        for k in range(1, len(cands) + 1):
            res = ml_in_the_list(cands[:k], llrs)
            corr = correlation(res.chosen, llrs)
            assert (res.any_valid >= cands[0].valid).all()
            if prev is not None:
                prev_valid, prev_corr = prev
                assert (res.any_valid >= prev_valid).all()
                keep = prev_valid
                assert (corr[keep] >= prev_corr[keep] - 1e-12).all()
            prev = (res.any_valid, corr)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gaed_and_igaed_agree_on_permutations(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 13))
    m = int(rng.integers(2, n))
    code = LinearCode.from_pcm(BitMatrix.from_array(oracles.random_pcm(rng, m, n)))
    aut = GenAutomorphism.from_matrix(permutation_matrix(rng.permutation(n)))
    llrs = rng.normal(1, 1, (20, n)) * 2
    g = PathSpec.build(code, aut, GAED).run(llrs)
    i = PathSpec.build(code, aut, IGAED).run(llrs)
    assert np.array_equal(g.hard_bits, i.hard_bits)


def test_sum_product_paths_run(hamming, hamming_t, rng):
    cfg = DecoderConfig(variant=SUM_PRODUCT)
    auts = automorphism_powers(hamming_t, [1, -1])
    llrs = rng.normal(1, 1, (100, 7)) * 2
    for mode in (GAED, IGAED):
        res = run_ensemble(llrs, build_ensemble(hamming, auts, mode, cfg))
        assert res.chosen.shape == (100, 7)
