"""
Counter-based randomness for reproducible trials.

Every per-vertex uniform is a pure function of (master_seed, trial_index,
vertex_index), computed with the SplitMix64 finaliser in numpy uint64
arithmetic:

    mix(x):  z = x + 0x9E3779B97F4A7C15
             z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
             return z ^ (z >> 31)                     (all mod 2^64)

    h = mix(mix(mix(seed) ^ trial) ^ vertex)
    u = (h >> 11) * 2^-53                             (in [0, 1))

Vertex v is initially infected iff u < p, so raising p only adds vertices.
"""

from typing import Sequence, Union

import numpy as np

from src.graphs.families import Graph

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV_2_53 = 1.0 / float(1 << 53)

UIntLike = Union[int, np.ndarray, Sequence[int]]


def _as_u64(x: UIntLike) -> np.ndarray:
    if isinstance(x, np.ndarray):
        return x.astype(np.uint64, copy=False)
    if isinstance(x, (int, np.integer)):
        return np.asarray([int(x) & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.asarray([int(v) & 0xFFFFFFFFFFFFFFFF for v in x], dtype=np.uint64)


def mix64(x: UIntLike) -> np.ndarray:
    """SplitMix64 finaliser, elementwise, wrapping mod 2^64."""
    z = _as_u64(x)
    with np.errstate(over="ignore"):
        z = z + _GOLDEN
        z = (z ^ (z >> _S30)) * _MUL1
        z = (z ^ (z >> _S27)) * _MUL2
    return z ^ (z >> _S31)


def trial_keys(master_seed: int, trial_indices: UIntLike) -> np.ndarray:
    """Per-trial keys mix(mix(seed) ^ trial)."""
    base = mix64(master_seed)
    return mix64(base ^ _as_u64(trial_indices))


def to_unit(h: np.ndarray) -> np.ndarray:
    """Top 53 bits of a uint64 hash as a double in [0, 1)."""
    return (h >> _S11).astype(np.float64) * _INV_2_53


def vertex_uniforms(master_seed: int, trial_indices: UIntLike, num_vertices: int) -> np.ndarray:
    """(T, N) array of per-(trial, vertex) uniforms."""
    keys = trial_keys(master_seed, trial_indices)
    vertices = np.arange(num_vertices, dtype=np.uint64)
    return to_unit(mix64(keys[:, None] ^ vertices[None, :]))


def sample_initial(g: Graph, p: float, master_seed: int, trial_index: int) -> np.ndarray:
    """Initial infected mask of one trial: vertex v is in A^(0) iff u(v) < p."""
    return sample_initial_batch(g, p, master_seed, [trial_index])[0]


def sample_initial_batch(
    g: Graph, p: float, master_seed: int, trial_indices: UIntLike
) -> np.ndarray:
    """(T, N) boolean masks for several trials at once."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return vertex_uniforms(master_seed, trial_indices, g.num_vertices) < p


def stream_seed(master_seed: int, stream: int) -> int:
    """Derive an independent 64-bit seed, e.g. one per grid point or probe."""
    with np.errstate(over="ignore"):
        z = mix64(master_seed) + _as_u64(stream)
    return int(mix64(z)[0])
