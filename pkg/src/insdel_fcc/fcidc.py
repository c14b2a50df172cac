"""Function-correcting insdel encoders and their verification.

An encoder is systematic: ``encode(x) = x + p(x)`` with a redundancy map
``p`` from k-bit messages to r-bit words.  It corrects the function f
against t insertions/deletions iff every f-separated pair of messages has
encoded insdel distance > 2t.  Three independent verifiers check this:
pairwise distances, disjoint deletion spheres and disjoint insertion spheres.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil
from typing import Mapping, Sequence

import numpy as np

from .errors import DefectError, InvalidInputError, SizeLimitError
from .functions import TargetFunction
from .irregular_search import IrregularCode, SearchResult, gv_greedy_construct, search_min_length
from .bounds import hamming_plotkin_lower
from .matrices import DistanceMatrix, function_matrix, message_matrix
from .words_metric import (
    all_words,
    as_word,
    deletion_sphere,
    insertion_sphere,
    is_subsequence,
    lcs_grid,
    pairwise_distances,
    to_bits,
)

MAX_VERIFY_K = 12
METHODS = ("distance", "deletion-sets", "insertion-sets")


@dataclass
class VerificationReport:
    verdict: str  # "pass" | "fail"
    method: str
    counterexample: tuple[str, str, object] | None = None  # (x, y, evidence)
    pairs_checked: int = 0

    def __post_init__(self):
        if self.verdict == "fail" and self.counterexample is None:
            raise ValueError("a failing report needs a counterexample")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict, "method": self.method, "pairs_checked": self.pairs_checked}
        if self.counterexample:
            x, y, ev = self.counterexample
            out["counterexample"] = {"x": x, "y": y, "evidence": ev}
        return out


@dataclass
class FcidcEncoder:
    f: TargetFunction
    t: int
    r: int
    table: list[str]  # redundancy word of every message, lexicographic message order
    report: VerificationReport | None = None
    name: str = "custom"

    def __post_init__(self):
        if self.t < 0 or self.r < 0:
            raise InvalidInputError("t and r must be non-negative")
        if len(self.table) != 1 << self.f.k:
            raise InvalidInputError("redundancy table must cover all 2^k messages")
        if any(len(p) != self.r for p in self.table):
            raise InvalidInputError(f"redundancy words must have length {self.r}")

    @property
    def k(self) -> int:
        return self.f.k

    @property
    def length(self) -> int:
        return self.k + self.r

    def p(self, x: str) -> str:
        if len(x) != self.k:
            raise InvalidInputError(f"{x!r} is not a {self.k}-bit message")
        return self.table[int(x, 2) if x else 0]

    def encode(self, x: str) -> str:
        return x + self.p(x)

    def codewords(self) -> list[str]:
        return [x + p for x, p in zip(all_words(self.k), self.table)]

    @property
    def verified(self) -> bool:
        return self.report is not None and self.report.passed

    def verify(self, method: str = "distance") -> VerificationReport:
        self.report = VERIFIERS[method](self)
        return self.report

    def to_dict(self) -> dict:
        data = {"k": self.k, "t": self.t, "r": self.r,
                "map": [{"x": x, "p": p} for x, p in zip(all_words(self.k), self.table)]}
        if self.report is not None:
            data["report"] = self.report.to_dict()
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def encoder_from_map(f: TargetFunction, t: int, p: Mapping[str, str] | Sequence[str],
                     name: str = "custom") -> FcidcEncoder:
    """Encoder from a ``{message: redundancy}`` mapping or a table in message order."""
    if isinstance(p, Mapping):
        table = [None] * (1 << f.k)
        for x, word in p.items():
            x = as_word(x)
            if len(x) != f.k:
                raise InvalidInputError(f"{x!r} is not a {f.k}-bit message")
            table[int(x, 2) if x else 0] = as_word(word)
        if any(w is None for w in table):
            raise InvalidInputError("redundancy map is not total")
    else:
        table = [as_word(w) for w in p]
    r = len(table[0]) if table else 0
    return FcidcEncoder(f, t, r, table, name=name)


def load_encoder(text: str, f: TargetFunction) -> FcidcEncoder:
    data = json.loads(text)
    if data["k"] != f.k:
        raise InvalidInputError("encoder k does not match the function")
    enc = encoder_from_map(f, int(data["t"]), {e["x"]: e["p"] for e in data["map"]})
    if enc.r != data["r"]:
        raise InvalidInputError("declared r disagrees with the map")
    return enc


# ---------------------------------------------------------------------------
# verifiers


def _guard(enc: FcidcEncoder):
    if enc.k > MAX_VERIFY_K:
        raise SizeLimitError(f"verification enumerates 2^k messages; k={enc.k} > {MAX_VERIFY_K}")


def _separated_pairs(enc: FcidcEncoder):
    """f-separated message index pairs (i < j) in lexicographic order."""
    vals = enc.f.table
    for i in range(len(vals)):
        for j in np.flatnonzero(vals[i + 1:] != vals[i]):
            yield i, i + 1 + int(j)


def verify_by_distance(enc: FcidcEncoder) -> VerificationReport:
    """Every f-separated pair must have encoded insdel distance > 2t."""
    _guard(enc)
    words = enc.codewords()
    n = enc.length
    N = len(words)
    vals = enc.f.table
    if n <= 12:
        # index straight into the cached all-pairs table
        idx = np.array([int(w, 2) if w else 0 for w in words])
        D = pairwise_distances(n)[np.ix_(idx, idx)].astype(np.int32)
        blocks = [(0, D)]
    else:
        bits = to_bits(words)
        chunk = max(1, (1 << 21) // max(1, N * (n + 1)))
        blocks = ((s, 2 * n - 2 * lcs_grid(bits[s:s + chunk], bits).astype(np.int32))
                  for s in range(0, N, chunk))
    checked = 0
    for start, D in blocks:
        rows = np.arange(start, start + D.shape[0])
        sep = (vals[rows][:, None] != vals[None, :]) & (np.arange(N)[None, :] > rows[:, None])
        checked += int(sep.sum())
        bad = np.argwhere(sep & (D <= 2 * enc.t))
        if len(bad):
            i, j = bad[0]
            x, y = all_words(enc.k)[start + i], all_words(enc.k)[j]
            return VerificationReport("fail", "distance", (x, y, {"distance": int(D[i, j]),
                                                              "required": 2 * enc.t + 1}), checked)
    return VerificationReport("pass", "distance", None, checked)


def verify_by_deletion_sets(enc: FcidcEncoder, t: int | None = None) -> VerificationReport:
    """D_t(encode(x)) and D_t(encode(y)) must be disjoint for f-separated x, y."""
    _guard(enc)
    t = enc.t if t is None else t
    if t > enc.length:
        raise InvalidInputError(f"t={t} exceeds the code length {enc.length}")
    words = enc.codewords()
    vals = enc.f.table
    owners: dict[str, list[int]] = {}
    for i, w in enumerate(words):
        for d in deletion_sphere(w, t):
            owners.setdefault(d, []).append(i)
    best = None
    for d, ids in owners.items():
        # lexicographically least f-separated pair sharing d
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                i, j = ids[a], ids[b]
                if vals[i] != vals[j] and (best is None or (i, j, d) < best):
                    best = (i, j, d)
                    break
    checked = sum(1 for _ in _separated_pairs(enc))
    if best is None:
        return VerificationReport("pass", "deletion-sets", None, checked)
    i, j, d = best
    msgs = all_words(enc.k)
    return VerificationReport("fail", "deletion-sets", (msgs[i], msgs[j], {"common_subsequence": d}), checked)


def verify_by_insertion_sets(enc: FcidcEncoder, t: int | None = None) -> VerificationReport:
    """I_t(encode(x)) and I_t(encode(y)) must be disjoint for f-separated x, y.

    Spheres are built one message at a time: y's sphere meets x's exactly
    when some w in I_t(encode(x)) contains encode(y) as a subsequence.
    """
    _guard(enc)
    t = enc.t if t is None else t
    if t < 0:
        raise InvalidInputError("t must be non-negative")
    words = enc.codewords()
    msgs = all_words(enc.k)
    sphere_cache: dict[int, list[str]] = {}
    checked = 0
    for i, j in _separated_pairs(enc):
        checked += 1
        if i not in sphere_cache:
            sphere_cache = {i: insertion_sphere(words[i], t)}
        for w in sphere_cache[i]:
            if is_subsequence(words[j], w):
                return VerificationReport("fail", "insertion-sets",
                                          (msgs[i], msgs[j], {"common_supersequence": w}), checked)
    return VerificationReport("pass", "insertion-sets", None, checked)


VERIFIERS = {
    "distance": verify_by_distance,
    "deletion-sets": verify_by_deletion_sets,
    "insertion-sets": verify_by_insertion_sets,
}


def verify_all(enc: FcidcEncoder) -> dict[str, VerificationReport]:
    return {name: fn(enc) for name, fn in VERIFIERS.items()}


# ---------------------------------------------------------------------------
# exact optimal redundancy


MAX_ORACLE_K = 3
MAX_ORACLE_R = 6


@dataclass
class OracleResult:
    r: int | None  # None: no encoder up to the cap
    encoder: FcidcEncoder | None
    explored: int
    cap: int

    @property
    def status(self) -> str:
        return "found" if self.r is not None else "infeasible-at-cap"


def _oracle_at(f: TargetFunction, t: int, r: int, node_limit: int | None):
    k = f.k
    n = k + r
    msgs = all_words(k)
    reds = all_words(r)
    R = len(reds)
    full = [x + p for x in msgs for p in reds]  # message-major
    idx = np.array([int(w, 2) if w else 0 for w in full])
    if n <= 12:
        D = pairwise_distances(n)[np.ix_(idx, idx)]
    else:
        bits = to_bits(full)
        D = 2 * n - 2 * lcs_grid(bits, bits).astype(np.int32)
    M = len(msgs)
    # ok[i][j] is an R x R boolean table: p(i)=a, p(j)=b allowed
    ok = D.reshape(M, R, M, R).transpose(0, 2, 1, 3) > 2 * t
    vals = f.table
    sep = vals[:, None] != vals[None, :]
    nodes = 0

    def place(assign, domains):
        nonlocal nodes
        open_rows = [i for i in range(M) if assign[i] is None]
        if not open_rows:
            return list(assign)
        row = min(open_rows, key=lambda i: (int(domains[i].sum()), i))
        for a in np.flatnonzero(domains[row]):
            nodes += 1
            if node_limit is not None and nodes > node_limit:
                raise SizeLimitError(f"oracle exceeded {node_limit} nodes at r={r}")
            new = list(domains)
            dead = False
            for j in open_rows:
                if j != row and sep[row, j]:
                    new[j] = domains[j] & ok[row, j, a]
                    if not new[j].any():
                        dead = True
                        break
            if dead:
                continue
            assign[row] = int(a)
            got = place(assign, new)
            if got is not None:
                return got
            assign[row] = None
        return None

    # an f-separated pair with zero admissible redundancy pairs kills r outright
    for i in range(M):
        for j in range(i + 1, M):
            if sep[i, j] and not ok[i, j].any():
                return None, nodes
    found = place([None] * M, [np.ones(R, dtype=bool) for _ in range(M)])
    if found is None:
        return None, nodes
    return [reds[a] for a in found], nodes


def optimal_redundancy_exact(f: TargetFunction, t: int, r_cap: int = 4,
                             node_limit: int | None = None) -> OracleResult:
    """Least r admitting a verified encoder, by exhaustive search over redundancy maps."""
    if f.k > MAX_ORACLE_K:
        raise SizeLimitError(f"exact oracle supports k <= {MAX_ORACLE_K}")
    if r_cap > MAX_ORACLE_R:
        raise SizeLimitError(f"exact oracle supports r_cap <= {MAX_ORACLE_R}")
    explored = 0
    for r in range(0, r_cap + 1):
        table, nodes = _oracle_at(f, t, r, node_limit)
        explored += nodes
        if table is not None:
            enc = FcidcEncoder(f, t, r, table, name="oracle")
            if not enc.verify():
                raise DefectError("oracle witness failed verification", enc.report)
            return OracleResult(r, enc, explored, r_cap)
    return OracleResult(None, None, explored, r_cap)


# ---------------------------------------------------------------------------
# bracket


@dataclass
class Bracket:
    lower: int
    upper: int
    lower_method: str
    upper_method: str
    lower_matrix: DistanceMatrix = field(repr=False, default=None)
    upper_matrix: DistanceMatrix = field(repr=False, default=None)
    upper_code: IrregularCode | None = field(repr=False, default=None)

    def __iter__(self):
        return iter((self.lower, self.upper))

    def contains(self, r: int) -> bool:
        return self.lower <= r <= self.upper

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "lower_method": self.lower_method,
                "upper_method": self.upper_method,
                "upper_code": self.upper_code.words if self.upper_code else None}


def _lower_n1(matrix: DistanceMatrix, node_limit: int) -> tuple[int, str]:
    try:
        res = search_min_length(matrix, "type1", node_limit=node_limit)
        if res.feasible:
            return res.min_length, "exact-N1"
    except SizeLimitError:
        pass
    bound = hamming_plotkin_lower(matrix).value
    return ceil(bound), "hamming-plotkin-bound"


def _upper_n2(matrix: DistanceMatrix, k: int, node_limit: int) -> tuple[int, str, IrregularCode]:
    try:
        res = search_min_length(matrix, "type2", K=k, node_limit=node_limit)
        if res.feasible:
            return res.min_length, "exact-N2", res.code
    except SizeLimitError:
        pass
    res = gv_greedy_construct(matrix, mode="type2", K=k)
    if not res.feasible:
        raise SizeLimitError("greedy construction failed within its length cap")
    return res.min_length, "gv-greedy-N2", res.code


def redundancy_bracket(f: TargetFunction, t: int, representatives: Sequence[str] | None = None,
                       estimates=None, node_limit: int = 200_000) -> Bracket:
    """(lower, upper) bracket on the optimal redundancy.

    lower: N1 of the type-1 matrix over ``representatives`` (all messages by
    default), exact when the search finishes within ``node_limit``, else the
    rounded-up Hamming-Plotkin bound.  upper: N2 of the type-2 function
    matrix with anchor k, exact when feasible, else the GV greedy length.
    """
    xs = list(representatives) if representatives is not None else list(all_words(f.k))
    lower_m = message_matrix(f, t, xs, "type1")
    lower, lower_method = _lower_n1(lower_m, node_limit)
    upper_m = function_matrix(f, t, "type2", estimates=estimates)
    upper, upper_method, code = _upper_n2(upper_m, f.k, node_limit)
    return Bracket(lower, upper, lower_method, upper_method, lower_m, upper_m, code)


def build_encoder_from_code(f: TargetFunction, t: int, code, name: str = "from-code") -> FcidcEncoder:
    """p(x) = codeword of f(x)'s position in the ascending image; verified before return."""
    words = code.words if isinstance(code, (IrregularCode, SearchResult)) else list(code)
    if len(words) != f.expressiveness:
        raise InvalidInputError(f"need {f.expressiveness} codewords, got {len(words)}")
    positions = np.searchsorted(np.array(f.image), f.table)
    table = [words[int(p)] for p in positions]
    enc = FcidcEncoder(f, t, len(words[0]), table, name=name)
    if not enc.verify():
        raise DefectError(f"encoder from code fails verification: {enc.report.counterexample}", enc.report)
    return enc


def random_redundancy_tables(k: int, r: int, count: int, seed: int) -> np.ndarray:
    """``count`` random redundancy tables as integers, shape (count, 2^k)."""
    rng = np.random.default_rng(seed)
    return rng.integers(0, 1 << r, size=(count, 1 << k)) if r else np.zeros((count, 1 << k), dtype=np.int64)


def table_from_ints(values, r: int) -> list[str]:
    return [format(int(v), f"0{r}b") if r else "" for v in values]
