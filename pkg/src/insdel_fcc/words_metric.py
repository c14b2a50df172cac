"""Binary words and the insertion/deletion metric.

Words are plain Python strings over ``"01"``; the empty string is a valid
word.  Everything here is exact: LCS is full dynamic programming, spheres
are enumerated, balls are exhaustive scans over F_2^n.

Exhaustive scans use a vectorised bit-parallel LCS (``lcs_grid``) over a
whole batch of word pairs at once with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, SizeLimitError

#: largest word length for which F_2^n is scanned exhaustively
MAX_EXHAUSTIVE_LENGTH = 20
#: largest word length for which the full 2^n x 2^n distance table is cached
MAX_PAIRWISE_LENGTH = 12


def as_word(bits) -> str:
    """Normalise ``bits`` (str, or a sequence of 0/1 ints) to a word string."""
    if isinstance(bits, str):
        word = bits.strip()
    else:
        word = "".join(str(int(b)) for b in bits)
    if word.strip("01"):
        raise InvalidInputError(f"not a binary word: {bits!r}")
    return word


def word_from_int(value: int, length: int) -> str:
    return format(value, f"0{length}b") if length else ""


def word_to_int(word: str) -> int:
    return int(word, 2) if word else 0


def complement(word: str) -> str:
    return word.translate(str.maketrans("01", "10"))


def hamming_distance(x: str, y: str) -> int:
    if len(x) != len(y):
        raise InvalidInputError("Hamming distance needs equal lengths")
    return sum(a != b for a, b in zip(x, y))


def lcs_length(x: str, y: str) -> int:
    """Length of a longest common subsequence (linear-space DP)."""
    if len(y) > len(x):
        x, y = y, x
    prev = [0] * (len(y) + 1)
    for a in x:
        cur = [0]
        for j, b in enumerate(y):
            if a == b:
                cur.append(prev[j] + 1)
            else:
                cur.append(max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def insdel_distance(x: str, y: str) -> int:
    """Minimum number of insertions plus deletions turning ``x`` into ``y``."""
    return len(x) + len(y) - 2 * lcs_length(x, y)


def is_subsequence(short: str, long: str) -> bool:
    it = iter(long)
    return all(ch in it for ch in short)


# ---------------------------------------------------------------------------
# spheres and balls


def deletion_sphere(x: str, t: int) -> list[str]:
    """All distinct words obtained from ``x`` by deleting exactly ``t`` symbols.

    Returned sorted lexicographically.
    """
    if t < 0 or t > len(x):
        raise InvalidInputError(f"deletion radius {t} invalid for word of length {len(x)}")
    level = {x}
    for _ in range(t):
        nxt = set()
        for w in level:
            # deleting any symbol of a run gives the same word; take run heads
            for i, ch in enumerate(w):
                if i == 0 or w[i - 1] != ch:
                    nxt.add(w[:i] + w[i + 1:])
        level = nxt
    return sorted(level)


def insertion_sphere(x: str, t: int) -> list[str]:
    """All distinct words of length ``len(x) + t`` having ``x`` as a subsequence."""
    if t < 0:
        raise InvalidInputError("insertion radius must be non-negative")
    level = {x}
    for _ in range(t):
        nxt = set()
        for w in level:
            for i in range(len(w) + 1):
                nxt.add(w[:i] + "0" + w[i:])
                nxt.add(w[:i] + "1" + w[i:])
        level = nxt
    return sorted(level)


def insdel_ball(x: str, d: int) -> list[str]:
    """Same-length words within insdel distance ``d`` of ``x`` (exhaustive scan)."""
    if d < 0 or d % 2:
        raise InvalidInputError("ball radius must be a non-negative even integer")
    if d > 2 * len(x):
        raise InvalidInputError(f"ball radius {d} exceeds 2|x| = {2 * len(x)}")
    dist = distances_from(x)
    return [word_from_int(int(i), len(x)) for i in np.flatnonzero(dist <= d)]


def ball_size(x: str, d: int) -> int:
    """``|B_ID(x, d)|``; odd ``d`` counts the same words as ``d - 1``."""
    if d < 0:
        return 0
    return int(np.count_nonzero(distances_from(x) <= d))


# ---------------------------------------------------------------------------
# vectorised exhaustive machinery


def _check_length(n: int, limit: int = MAX_EXHAUSTIVE_LENGTH) -> None:
    if n > limit:
        raise SizeLimitError(f"exhaustive scan over F_2^{n} exceeds the cap of {limit}")


@lru_cache(maxsize=None)
def word_bits(n: int) -> np.ndarray:
    """All words of length ``n`` as a (2^n, n) uint8 array, in lexicographic order."""
    _check_length(n)
    idx = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


@lru_cache(maxsize=None)
def all_words(n: int) -> tuple[str, ...]:
    _check_length(n)
    return tuple(word_from_int(i, n) for i in range(1 << n))


def to_bits(words: Sequence[str]) -> np.ndarray:
    """Stack equal-length words into a uint8 array."""
    lengths = {len(w) for w in words}
    if len(lengths) > 1:
        raise InvalidInputError("to_bits needs words of equal length")
    n = lengths.pop() if lengths else 0
    if n == 0:
        return np.zeros((len(words), 0), dtype=np.uint8)
    return np.array([[int(c) for c in w] for w in words], dtype=np.uint8)


def _full_limbs(m: int) -> np.ndarray:
    limbs = (m + 63) // 64
    full = np.full(limbs, np.uint64(0xFFFFFFFFFFFFFFFF), dtype=np.uint64)
    if m % 64:
        full[-1] = np.uint64((1 << (m % 64)) - 1)
    return full


def _row_masks(xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Masks of the 0 and 1 positions of each row, split into 64-bit limbs.

    Bit i corresponds to symbol i of the word (first symbol in the least
    significant bit of limb 0).  Shapes are (A, limbs).
    """
    A, m = xs.shape
    limbs = (m + 63) // 64
    padded = np.zeros((A, limbs * 64), dtype=np.uint64)
    padded[:, :m] = xs
    weights = np.left_shift(np.uint64(1), np.arange(64, dtype=np.uint64))
    ones = (padded.reshape(A, limbs, 64) * weights).sum(axis=2, dtype=np.uint64)
    return ones ^ _full_limbs(m), ones


def lcs_grid(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """LCS lengths for every pair (row of ``xs``, row of ``ys``).

    ``xs`` is (A, m), ``ys`` is (B, n); the result is an (A, B) int16 array.
    Bit-parallel LCS, one DP column per step, with the addition carried
    across 64-bit limbs when m > 64.
    """
    A, m = xs.shape
    B, n = ys.shape
    if m == 0 or n == 0:
        return np.zeros((A, B), dtype=np.int16)
    zeros_mask, ones_mask = _row_masks(xs)
    full = _full_limbs(m)
    if len(full) == 1:
        zeros_mask, ones_mask, f0 = zeros_mask[:, 0], ones_mask[:, 0], full[0]
        v = np.full((A, B), f0, dtype=np.uint64)
        for j in range(n):
            pm = np.where(ys[:, j][None, :] == 1, ones_mask[:, None], zeros_mask[:, None])
            u = v & pm
            v = ((v + u) | (v - u)) & f0
        return (m - np.bitwise_count(v)).astype(np.int16)
    limbs = len(full)
    v = np.broadcast_to(full, (A, B, limbs)).copy()
    for j in range(n):
        pm = np.where(ys[:, j][None, :, None] == 1, ones_mask[:, None, :], zeros_mask[:, None, :])
        u = v & pm
        carry = np.zeros((A, B), dtype=np.uint64)
        total = np.empty_like(v)
        for w in range(limbs):
            s = v[:, :, w] + u[:, :, w]
            c1 = s < v[:, :, w]
            s2 = s + carry
            carry = (c1 | (s2 < s)).astype(np.uint64)
            total[:, :, w] = s2
        # u is a submask of v, so v - u == v ^ u with no borrow between limbs
        v = (total | (v ^ u)) & full
    return (m - np.bitwise_count(v).astype(np.int64).sum(axis=2)).astype(np.int16)


def distances_to(x: str, ys: np.ndarray) -> np.ndarray:
    """Insdel distances from ``x`` to every row of the bit array ``ys``."""
    xb = to_bits([x])
    lcs = lcs_grid(xb, ys)[0].astype(np.int32)
    return len(x) + ys.shape[1] - 2 * lcs


def distances_from(x: str) -> np.ndarray:
    """Insdel distances from ``x`` to every word of the same length (lex order)."""
    n = len(x)
    _check_length(n)
    table = _PAIRWISE.get(n)
    if table is not None:
        return table[word_to_int(x)].astype(np.int32)
    return distances_to(x, word_bits(n))


_PAIRWISE: dict[int, np.ndarray] = {}


def pairwise_distances(n: int) -> np.ndarray:
    """The full 2^n x 2^n insdel distance table for length-``n`` words (int8, cached)."""
    if n in _PAIRWISE:
        return _PAIRWISE[n]
    _check_length(n, MAX_PAIRWISE_LENGTH)
    bits = word_bits(n)
    size = 1 << n
    out = np.empty((size, size), dtype=np.int8)
    chunk = max(1, (1 << 22) // (size * (n + 1)))
    for start in range(0, size, chunk):
        block = lcs_grid(bits[start:start + chunk], bits)
        out[start:start + chunk] = 2 * n - 2 * block
    out.setflags(write=False)
    _PAIRWISE[n] = out
    return out


# ---------------------------------------------------------------------------
# runs


@dataclass(frozen=True)
class RunProfile:
    run_lengths: tuple[int, ...]

    @property
    def run_count(self) -> int:
        return len(self.run_lengths)

    @property
    def max_run(self) -> int:
        return max(self.run_lengths)


def run_lengths(x: str) -> tuple[int, ...]:
    lengths = []
    for i, ch in enumerate(x):
        if i and x[i - 1] == ch:
            lengths[-1] += 1
        else:
            lengths.append(1)
    return tuple(lengths)


def run_profile(x: str) -> RunProfile:
    if not x:
        raise InvalidInputError("run profile of the empty word is undefined")
    return RunProfile(run_lengths(x))


def run_count(x: str) -> int:
    """Number of runs; 0 for the empty word."""
    return sum(1 for i, ch in enumerate(x) if i == 0 or x[i - 1] != ch)


# ---------------------------------------------------------------------------
# inequality predicates


def check_concat_bounds(x1: str, x2: str, y1: str, y2: str) -> bool:
    """Concatenation inequality for insdel distance.

    ``d1 + d2 - 2 min(|x1|, |x2|) <= d(x1 x2, y1 y2) <= d1 + d2``.
    """
    if len(x1) != len(y1) or len(x2) != len(y2):
        raise InvalidInputError("concatenated parts must have matching lengths")
    d1 = insdel_distance(x1, y1)
    d2 = insdel_distance(x2, y2)
    whole = insdel_distance(x1 + x2, y1 + y2)
    return d1 + d2 - 2 * min(len(x1), len(x2)) <= whole <= d1 + d2


def sphere_size_sandwich(x: str, t: int) -> tuple[int, int, int]:
    """(deletion lower, deletion upper, insertion upper) closed-form sphere sizes.

    The deletion bounds are max(1, C(rho-t+1, t)) and C(n+t, t), rho the
    run count.
    C(rho+t-1, t) is an upper bound, not a lower one; see
    ``runs_deletion_bounds``.
    """
    n = len(x)
    if t < 0 or t > n:
        raise InvalidInputError(f"radius {t} invalid for word of length {n}")
    lower, _ = runs_deletion_bounds(x, t)
    return lower, comb(n + t, t), sum(comb(n + t, i) for i in range(t + 1))


def runs_deletion_bounds(x: str, t: int) -> tuple[int, int]:
    """max(1, C(rho-t+1, t)) <= |D_t(x)| <= C(rho+t-1, t), rho the run count."""
    if t < 0 or t > len(x):
        raise InvalidInputError(f"radius {t} invalid for word of length {len(x)}")
    if t == 0:
        return 1, 1
    rho = run_count(x)
    return max(1, comb(max(rho - t + 1, 0), t)), comb(rho + t - 1, t)


def run_binomial(x: str, t: int) -> int:
    """C(rho+t-1, t) for a word with rho runs; bounds |D_t(x)| from above, not below."""
    rho = run_count(x)
    return comb(rho + t - 1, t) if rho else int(t == 0)


def iter_words(n: int) -> Iterable[str]:
    return iter(all_words(n))
