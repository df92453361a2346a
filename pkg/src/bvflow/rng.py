"""Counter-based random streams keyed by ``(seed, path_index)``.

Each path owns a Philox-4x64 stream whose 128-bit key is the pair
``(seed, path_index)``; the counter starts at zero. A path's draws therefore
depend only on its key, never on how many other paths are generated or in
what order. Gaussians come from the inverse normal CDF applied to open
uniforms built from the top 53 bits of each 64-bit output, so every draw
consumes exactly one counter word.
"""

import numpy as np
from scipy.special import ndtri

_U64 = 2**64


def _key(seed, path_index):
    seed, path_index = int(seed), int(path_index)
    if not 0 <= seed < _U64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    if not 0 <= path_index < _U64:
        raise ValueError("path_index must be a non-negative 64-bit integer")
    return np.array([seed, path_index], dtype=np.uint64)


def bit_generator(seed, path_index):
    return np.random.Philox(key=_key(seed, path_index))


def open_uniforms(seed, path_index, size):
    """Uniforms on the open interval (0, 1)."""
    raw = bit_generator(seed, path_index).random_raw(size)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def standard_normals(seed, path_index, size):
    """``size`` standard normal draws for one path, by inverse CDF."""
    return ndtri(open_uniforms(seed, path_index, size))
