"""Generalized-automorphism ensemble BP decoding and its merged-graph variant."""
from .automorphism import (
    GenAutomorphism,
    automorphism_powers,
    permutation_automorphisms,
    permutation_matrix,
    verify_automorphism,
    weight_over_permutation,
)
from .bp import BeliefPropagationDecoder, DecodeResult, DecoderConfig, boxplus, boxplus_fold, decode
from .channel import ChannelParams, ebn0_to_sigma, transmit_frame
from .code import LinearCode, TannerGraph, parse_alist, syndrome, tanner_from_pcm
from .ensemble import (
    PathSpec,
    gaed_path,
    gaed_preprocess,
    igaed_path,
    ml_in_the_list,
    run_ensemble,
)
from .gf2 import BitMatrix, BitVector, gf2_inverse, gf2_mul, min_distance_bruteforce, null_space_basis
from .graph_transform import PrunedGraph, build_extended_pcm, prune_extended
from .sim import SimConfig, bruteforce_ml_decode, run_sweep

__version__ = "0.1.0"
