import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaed.automorphism import (
    GenAutomorphism,
    NotAnAutomorphismError,
    automorphism_powers,
    load_automorphism,
    permutation_automorphisms,
    permutation_matrix,
    verify_automorphism,
    weight_over_permutation,
)
from gaed.code import LinearCode, load_matrix
from gaed.gf2 import BitMatrix, gf2_mul

import oracles
from conftest import repetition_pcm


def test_weight_over_permutation_examples(t_ex):
    assert weight_over_permutation(BitMatrix.identity(5)) == 0
    assert weight_over_permutation(t_ex) == 2
    with pytest.raises(ValueError):
        weight_over_permutation(BitMatrix.from_array([[1, 0, 1]]))


def test_verify_examples(t_ex, h_ex, hamming):
    assert verify_automorphism(BitMatrix.identity(7), hamming)
    assert not verify_automorphism(t_ex, LinearCode.from_pcm(h_ex))
    rep = LinearCode.from_pcm(repetition_pcm(3))
    assert verify_automorphism(permutation_matrix([1, 2, 0]), rep)
    with pytest.raises(ValueError):
        verify_automorphism(BitMatrix.identity(3), hamming)


def test_verify_rejects_singular(hamming):
    singular = BitMatrix.from_array(np.zeros((7, 7), dtype=np.uint8))
    assert not verify_automorphism(singular, hamming)


def test_powers(t_ex):
    t, t_inv, t2, t2_inv = automorphism_powers(t_ex, [1, -1, 2, -2])
    assert t.t == t_ex
    assert gf2_mul(t.t, t_inv.t) == BitMatrix.identity(3)
    assert t2.t == BitMatrix.from_array([[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    assert gf2_mul(t2.t, t2_inv.t) == BitMatrix.identity(3)
    assert [a.delta for a in (t, t_inv, t2, t2_inv)] == [2, 3, 1, 1]
    with pytest.raises(ValueError):
        automorphism_powers(BitMatrix.from_array([[1, 1], [1, 1]]), [1])
    with pytest.raises(ValueError):
        automorphism_powers(t_ex, [3])


def test_hamming_data_file(data_dir, hamming):
    t = load_automorphism(data_dir / "hamming74_t.txt", hamming)
    assert [a.delta for a in automorphism_powers(t, [1, -1, 2, -2])] == [5, 5, 9, 6]
    example = LinearCode.from_pcm(load_matrix(data_dir / "example_h.txt"))
    with pytest.raises(NotAnAutomorphismError):
        load_automorphism(data_dir / "example_t.txt", example)


def test_force_loads_non_automorphism(data_dir, h_ex, t_ex):
    code = LinearCode.from_pcm(h_ex)
    assert load_automorphism(data_dir / "example_t.txt", code, force=True) == t_ex


def test_permutation_search_matches_enumeration(hamming):
    perms = permutation_automorphisms(hamming)
    assert len(perms) == 168  # |GL(3, 2)|
    words = {tuple(w) for w in oracles.codewords_by_enumeration(hamming.h.array)}
    for perm in itertools.islice(itertools.permutations(range(7)), 0, 5040, 7):
        maps = all(tuple(np.array(w)[list(perm)]) in words for w in words)
        assert maps == (perm in set(perms))
        assert maps == verify_automorphism(permutation_matrix(perm), hamming)


def test_permutation_search_limit():
    code = LinearCode.from_pcm(repetition_pcm(9))
    with pytest.raises(ValueError):
        permutation_automorphisms(code)


def test_verified_automorphisms_permute_the_codebook(hamming, hamming_t):
    words = oracles.codewords_by_enumeration(hamming.h.array)
    as_set = {tuple(w) for w in words}
    for aut in automorphism_powers(hamming_t, [1, -1, 2, -2]):
        images = aut.apply(words)
        assert {tuple(w) for w in images} == as_set  # into C and injective


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 16), st.integers(0, 2**32 - 1), st.booleans())
def test_delta_zero_iff_permutation(n, seed, use_perm):
    rng = np.random.default_rng(seed)
    if use_perm:
        t = permutation_matrix(rng.permutation(n))
    else:
        upper = np.triu(rng.integers(0, 2, (n, n)), 1) + np.eye(n, dtype=np.int64)
        t = BitMatrix.from_array(upper[rng.permutation(n)])
    aut = GenAutomorphism.from_matrix(t)
    assert (aut.delta == 0) == aut.is_permutation
    assert aut.delta >= 0
