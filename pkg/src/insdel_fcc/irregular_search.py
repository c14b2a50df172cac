"""Irregular insdel-distance codes: verification, exact minimum length, GV-style greedy.

A code for an M x M requirement matrix I is an ordered list p_1..p_M of
equal-length words with d(p_i, p_j) >= I[i][j].  Words may repeat where the
requirement is 0.

Exact search walks r upward and, at each length, runs a depth-first
assignment over F_2^r with forward checking (every unplaced row keeps a
boolean domain over all 2^r words).  The first placed word is restricted
to canonical representatives under global complement and reversal, the two
maps that preserve every insdel distance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations as _all_permutations
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, SizeLimitError
from .matrices import DistanceMatrix, uniform_matrix
from .words_metric import (
    MAX_EXHAUSTIVE_LENGTH,
    MAX_PAIRWISE_LENGTH,
    all_words,
    distances_from,
    insdel_distance,
    pairwise_distances,
    word_from_int,
    word_to_int,
)

DEFAULT_LENGTH_CAP = MAX_PAIRWISE_LENGTH


@dataclass
class IrregularCode:
    words: list[str]
    matrix: DistanceMatrix
    K: int | None = None

    def __post_init__(self):
        if len(self.words) != self.matrix.order:
            raise InvalidInputError("one codeword per matrix row required")
        if len({len(w) for w in self.words}) > 1:
            raise InvalidInputError("codewords must share one length")
        if self.K is not None and self.length < self.K:
            raise InvalidInputError(f"type-2 code must have length >= {self.K}")

    @property
    def length(self) -> int:
        return len(self.words[0]) if self.words else 0

    def check(self) -> "CodeCheck":
        return verify_code(self.words, self.matrix)


@dataclass(frozen=True)
class CodeCheck:
    """Outcome of :func:`verify_code`; truthy when every requirement holds.

    ``pair`` is the first violating (i, j), 0-based, i < j, and ``shortfall``
    how far the distance falls short of the requirement.
    """

    ok: bool
    pair: tuple[int, int] | None = None
    shortfall: int = 0

    def __bool__(self):
        return self.ok


@dataclass
class SearchResult:
    min_length: int | None  # None means infeasible at the cap
    code: IrregularCode | None
    explored: int
    mode: str
    K: int | None = None
    permutation: tuple[int, ...] | None = None
    cap: int | None = None
    method: str = "exact"
    lengths_tried: list[int] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.min_length is not None

    @property
    def status(self) -> str:
        return "found" if self.feasible else "infeasible-at-cap"

    @property
    def words(self) -> list[str]:
        return list(self.code.words) if self.code else []

    def to_dict(self) -> dict:
        return {
            "min_length": self.min_length if self.feasible else "infeasible-at-cap",
            "words": self.words,
            "explored": self.explored,
            "mode": self.mode,
            "K": self.K,
            "permutation": list(self.permutation) if self.permutation else None,
            "method": self.method,
            "cap": self.cap,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _as_matrix(matrix) -> DistanceMatrix:
    return matrix if isinstance(matrix, DistanceMatrix) else DistanceMatrix(np.asarray(matrix))


def _check_perm(perm, M):
    if perm is None:
        return tuple(range(M))
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(M)):
        raise InvalidInputError(f"not a permutation of 0..{M - 1}: {perm}")
    return perm


def verify_code(words: Sequence[str], matrix, permutation=None) -> CodeCheck:
    """Check ``d(words[i], words[j]) >= I[perm[i]][perm[j]]`` for all i != j."""
    matrix = _as_matrix(matrix)
    if len(words) != matrix.order:
        raise InvalidInputError(f"{len(words)} words for a matrix of order {matrix.order}")
    perm = _check_perm(permutation, matrix.order)
    req = matrix.requirement()
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            need = int(req[perm[i], perm[j]])
            if need == 0:
                continue
            got = insdel_distance(words[i], words[j])
            if got < need:
                return CodeCheck(False, (i, j), need - got)
    return CodeCheck(True)


# ---------------------------------------------------------------------------
# exact search


def _canonical_mask(r: int) -> np.ndarray:
    """Words that are lexicographically least among {w, ~w, rev w, ~rev w}."""
    words = all_words(r)
    flip = str.maketrans("01", "10")
    keep = np.zeros(len(words), dtype=bool)
    for i, w in enumerate(words):
        rev = w[::-1]
        keep[i] = w <= min(w.translate(flip), rev, rev.translate(flip))
    return keep


class _Search:
    def __init__(self, req: np.ndarray, r: int, node_limit: int | None):
        self.req = req
        self.M = req.shape[0]
        self.r = r
        self.D = pairwise_distances(r)
        self.node_limit = node_limit
        self.nodes = 0

    def run(self):
        M, N = self.M, 1 << self.r
        domains = [np.ones(N, dtype=bool) for _ in range(M)]
        assignment: list[int | None] = [None] * M
        first = _canonical_mask(self.r)
        return self._place(domains, assignment, first)

    def _place(self, domains, assignment, first_mask):
        open_rows = [i for i in range(self.M) if assignment[i] is None]
        if not open_rows:
            return list(assignment)
        # most constrained row first, lowest index on ties
        row = min(open_rows, key=lambda i: (int(domains[i].sum()), i))
        dom = domains[row] & first_mask if first_mask is not None else domains[row]
        for w in np.flatnonzero(dom):
            self.nodes += 1
            if self.node_limit is not None and self.nodes > self.node_limit:
                raise SizeLimitError(f"search exceeded {self.node_limit} nodes at length {self.r}")
            dist = self.D[w]
            new = list(domains)
            dead = False
            for j in open_rows:
                if j == row:
                    continue
                need = self.req[row, j]
                if need:
                    new[j] = domains[j] & (dist >= need)
                    if not new[j].any():
                        dead = True
                        break
            if dead:
                continue
            assignment[row] = int(w)
            found = self._place(new, assignment, None)
            if found is not None:
                return found
            assignment[row] = None
        return None


def _solve_at(req: np.ndarray, r: int, node_limit):
    if req.max(initial=0) > 2 * r:
        return None, 0
    if r == 0:
        return [0] * req.shape[0], 1
    search = _Search(req, r, node_limit)
    found = search.run()
    return found, search.nodes


def search_min_length(matrix, mode: str = "type1", K: int | None = None,
                      try_permutations: bool = False, length_cap: int = DEFAULT_LENGTH_CAP,
                      node_limit: int | None = None) -> SearchResult:
    """Least r admitting a code for ``matrix`` (type1), or least r >= K (type2).

    With ``try_permutations`` every row ordering of the matrix is tried at
    each length and the first feasible ordering is reported.
    """
    matrix = _as_matrix(matrix)
    start = _start_length(mode, K)
    if length_cap > MAX_PAIRWISE_LENGTH:
        raise SizeLimitError(f"exact search is capped at length {MAX_PAIRWISE_LENGTH}")
    M = matrix.order
    req = matrix.requirement()
    perms = list(_all_permutations(range(M))) if try_permutations else [tuple(range(M))]
    explored = 0
    tried = []
    for r in range(start, length_cap + 1):
        tried.append(r)
        for perm in perms:
            p = np.array(perm)
            found, nodes = _solve_at(req[np.ix_(p, p)], r, node_limit)
            explored += nodes
            if found is not None:
                words = [all_words(r)[i] for i in found]
                # code row i realises matrix row perm[i]; store in matrix order
                ordered = [None] * M
                for i, row in enumerate(perm):
                    ordered[row] = words[i]
                code = IrregularCode(ordered, matrix, K if mode == "type2" else None)
                assert code.check(), "search returned an invalid witness"
                return SearchResult(r, code, explored, mode, K, perm if try_permutations else None,
                                    length_cap, "exact", tried)
    return SearchResult(None, None, explored, mode, K, None, length_cap, "exact", tried)


def _start_length(mode: str, K) -> int:
    if mode == "type1":
        return 0
    if mode == "type2":
        if K is None or K < 0:
            raise InvalidInputError("type2 mode needs a non-negative anchor K")
        return K
    raise InvalidInputError("mode must be 'type1' or 'type2'")


def uniform_min_length(M: int, d: int, mode: str = "type1", K: int | None = None,
                       length_cap: int = DEFAULT_LENGTH_CAP, node_limit: int | None = None) -> SearchResult:
    """Exact N(M, d): shortest code of M words with pairwise distance >= d."""
    return search_min_length(uniform_matrix(M, d), mode, K, False, length_cap, node_limit)


# ---------------------------------------------------------------------------
# Gilbert-Varshamov style construction and bound


def gv_greedy_construct(matrix, permutation=None, mode: str = "type1", K: int | None = None,
                        length_cap: int = MAX_EXHAUSTIVE_LENGTH) -> SearchResult:
    """Greedy codeword-by-codeword construction.

    For r = start, start+1, ...: place row pi(1) at 0^r, then each next row
    at the lexicographically least word outside the balls
    B(p_i, I[pi(i)][pi(j)] - 1) of the already placed rows.  The first r at
    which all rows fit is returned; it upper-bounds the exact minimum.
    """
    matrix = _as_matrix(matrix)
    M = matrix.order
    perm = _check_perm(permutation, M)
    req = matrix.requirement()
    start = _start_length(mode, K)
    # no code exists while some requirement exceeds the diameter 2r
    start = max(start, (int(req.max(initial=0)) + 1) // 2)
    explored = 0
    for r in range(start, length_cap + 1):
        placed: dict[int, str] = {}
        dists: dict[int, np.ndarray] = {}
        N = 1 << r
        ok = True
        for row in perm:
            allowed = np.ones(N, dtype=bool)
            for prev in placed:
                need = req[prev, row]
                if need:
                    allowed &= dists[prev] >= need
            hits = np.flatnonzero(allowed)
            explored += 1
            if not len(hits):
                ok = False
                break
            word = word_from_int(int(hits[0]), r)
            placed[row] = word
            dists[row] = distances_from(word)
        if ok:
            words = [placed[i] for i in range(M)]
            code = IrregularCode(words, matrix, K if mode == "type2" else None)
            return SearchResult(r, code, explored, mode, K, perm, length_cap, "gv-greedy")
    return SearchResult(None, None, explored, mode, K, perm, length_cap, "gv-greedy")


def max_ball_size(r: int, radius: int) -> int:
    """Largest |B_ID(c, radius)| over all centres c in F_2^r (odd radii round down)."""
    if radius < 0:
        return 0
    if r > MAX_PAIRWISE_LENGTH:
        raise SizeLimitError(f"max ball size needs the full distance table; r={r} > {MAX_PAIRWISE_LENGTH}")
    return int((pairwise_distances(r) <= radius).sum(axis=1).max())


def gv_bound(matrix, permutation=None, mode: str = "type1", K: int | None = None,
             length_cap: int = MAX_PAIRWISE_LENGTH) -> int:
    """Least r with 2^r > max_j sum_{i<j} maxBall(r, I[pi(i)][pi(j)] - 1).

    Ball sizes depend on the centre, so the largest ball over all centres is
    used; the result is an upper bound on the exact minimum length.
    """
    matrix = _as_matrix(matrix)
    M = matrix.order
    perm = _check_perm(permutation, M)
    req = matrix.requirement()
    for r in range(_start_length(mode, K), length_cap + 1):
        worst = 0
        for j in range(M):
            total = sum(max_ball_size(r, int(req[perm[i], perm[j]]) - 1) for i in range(j))
            worst = max(worst, total)
        if (1 << r) > worst:
            return r
    raise SizeLimitError(f"GV bound not reached within length {length_cap}")


def code_from_words(words: Sequence[str], matrix, K=None) -> IrregularCode:
    return IrregularCode(list(words), _as_matrix(matrix), K)


def word_index(word: str) -> int:
    return word_to_int(word)
