"""Explicit encoders: smod-cycled runs construction and colouring-based encoders.

Every encoder leaves this module with a verification report attached.  A
failed report from the runs construction is returned, not raised: whether
the construction holds at a given (k, t) is an empirical outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DefectError, InvalidInputError, SizeLimitError
from .fcidc import FcidcEncoder, verify_by_distance
from .functions import TargetFunction, build_coloring, runs_function
from .irregular_search import gv_greedy_construct, uniform_min_length
from .matrices import uniform_matrix
from .words_metric import insdel_distance

#: longest inner code the greedy constructor is allowed to try
GREEDY_INNER_CAP = 16

RUNS_INNER_CODES = {
    1: ("00", "10", "01"),
    2: ("00000", "00011", "01010", "01111", "11000"),
}


@dataclass(frozen=True)
class SmodIndex:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise InvalidInputError("smod needs a >= 1 and b >= 1")

    @property
    def value(self) -> int:
        return (self.a - 1) % self.b + 1


def smod(a: int, b: int) -> int:
    """Shifted residue ((a - 1) mod b) + 1, always in 1..b."""
    return SmodIndex(a, b).value


def min_pairwise_distance(words) -> int | None:
    words = list(words)
    dists = [insdel_distance(words[i], words[j]) for i in range(len(words)) for j in range(i + 1, len(words))]
    return min(dists) if dists else None


def runs_inner_code(t: int, node_limit: int = 500_000) -> tuple[str, ...]:
    """2t+1 words with pairwise insdel distance >= 2t (fixed lists for t = 1, 2)."""
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    if t in RUNS_INNER_CODES:
        return RUNS_INNER_CODES[t]
    matrix = uniform_matrix(2 * t + 1, 2 * t)
    try:
        res = uniform_min_length(2 * t + 1, 2 * t, node_limit=node_limit)
    except SizeLimitError:
        res = None
    if res is None or not res.feasible:
        res = gv_greedy_construct(matrix)
    if not res.feasible:
        raise SizeLimitError(f"no inner code of {2 * t + 1} words at distance {2 * t} found")
    return tuple(res.words)


def runs_construction(k: int, t: int, inner_code=None) -> FcidcEncoder:
    """Enc(x) = (x, p_{r(x) smod (2t+1)}) for the number-of-runs function."""
    if k < 2 or t < 1:
        raise InvalidInputError("runs construction needs k >= 2 and t >= 1")
    code = tuple(inner_code) if inner_code is not None else runs_inner_code(t)
    b = 2 * t + 1
    if len(code) != b:
        raise InvalidInputError(f"inner code must have {b} words")
    got = min_pairwise_distance(code)
    if got is not None and got < 2 * t:
        raise InvalidInputError(f"inner code has distance {got} < {2 * t}")
    f = runs_function(k)
    table = [code[smod(int(v), b) - 1] for v in f.table]
    enc = FcidcEncoder(f, t, len(code[0]), table, name=f"runs-smod(k={k},t={t})")
    enc.report = verify_by_distance(enc)
    return enc


def repetition_code(t: int, k: int) -> tuple[str, str]:
    """{0^(t+k), 1^(t+k)}: two words at insdel distance 2(t+k)."""
    return ("0" * (t + k), "1" * (t + k))


def three_word_code(t: int, k: int) -> tuple[str, str, str]:
    """(00)^m, (01)^m, (11)^m with m = t+k; LCS values m, m, 0."""
    m = t + k
    return ("00" * m, "01" * m, "11" * m)


def staircase_code(count: int, gap: int) -> tuple[str, ...]:
    """Words 0^(i*gap) 1^((count-1-i)*gap); pairwise distance 2*gap*|i-j|."""
    L = (count - 1) * gap
    return tuple("0" * (i * gap) + "1" * (L - i * gap) for i in range(count))


def locally_bounded_encoder(f: TargetFunction, t: int, code, lam: int | None = None) -> FcidcEncoder:
    """p(u) = code[Col(u)] for a colouring separating f-different words within distance 2t."""
    code = tuple(code.words if hasattr(code, "words") else code)
    lam = len(code) if lam is None else lam
    if len(code) < lam:
        raise InvalidInputError(f"code has {len(code)} words, colouring needs {lam}")
    if len({len(w) for w in code}) != 1:
        raise InvalidInputError("code words must share one length")
    r = len(code[0])
    if r < f.k:
        raise InvalidInputError(f"code length {r} is below k = {f.k}")
    got = min_pairwise_distance(code)
    if got is not None and got < 2 * (t + f.k):
        raise InvalidInputError(f"code distance {got} < 2(t+k) = {2 * (t + f.k)}")
    coloring = build_coloring(f, 2 * t, lam)
    table = [code[int(c) - 1] for c in coloring.colors]
    enc = FcidcEncoder(f, t, r, table, name=f"locally-bounded(lam={lam})")
    enc.report = verify_by_distance(enc)
    if not enc.report:
        raise DefectError(f"locally bounded encoder failed: {enc.report.counterexample}", enc.report)
    return enc


def locally_bounded_inner_code(count: int, t: int, k: int) -> tuple[str, ...]:
    """``count`` words, length >= k, pairwise distance >= 2(t+k).

    The greedy type-2 construction is tried first; the staircase code is
    the fallback when greedy runs out of room.
    """
    if count == 1:
        return ("0" * k,)
    if count == 2:
        return repetition_code(t, k)
    if count == 3:
        return three_word_code(t, k)
    res = None
    try:
        res = gv_greedy_construct(uniform_matrix(count, 2 * (t + k)), mode="type2", K=k,
                                  length_cap=GREEDY_INNER_CAP)
    except SizeLimitError:
        pass
    if res is not None and res.feasible:
        return tuple(res.words)
    return staircase_code(count, t + k)


def runs_as_locally_bounded(k: int, t: int, code=None) -> FcidcEncoder:
    """Runs function treated as locally (2t, 4t+1); needs k <= 10 for the colouring."""
    if k > 10:
        raise SizeLimitError("runs colouring is checked exhaustively only for k <= 10")
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    lam = 4 * t + 1
    f = runs_function(k)
    if code is None:
        code = locally_bounded_inner_code(lam, t, k)
    return locally_bounded_encoder(f, t, code, lam)

