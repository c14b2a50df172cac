"""Target functions f: F_2^k -> Im(f), function balls and conflict colorings.

A :class:`TargetFunction` is stored as a full value table indexed by the
integer value of the message (lexicographic word order).  Image labels are
integers; matrices downstream order image values by ascending label.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .errors import DefectError, InvalidInputError, SizeLimitError
from .words_metric import (
    MAX_PAIRWISE_LENGTH,
    all_words,
    as_word,
    distances_from,
    pairwise_distances,
    run_lengths,
    word_to_int,
)

#: functions are tabulated exhaustively, so k is capped
MAX_FUNCTION_K = 20


@dataclass(frozen=True, eq=False)
class TargetFunction:
    k: int
    table: np.ndarray  # f-label of every k-bit word, lexicographic order
    name: str = "custom"
    label_names: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.table.shape != (1 << self.k,):
            raise InvalidInputError(f"value table must have 2^{self.k} entries")

    def __call__(self, word: str) -> int:
        if len(word) != self.k:
            raise InvalidInputError(f"{word!r} is not a {self.k}-bit message")
        return int(self.table[word_to_int(word)])

    evaluate = __call__

    @cached_property
    def image(self) -> tuple[int, ...]:
        return tuple(int(v) for v in np.unique(self.table))

    @property
    def expressiveness(self) -> int:
        return len(self.image)

    def image_index(self, value: int) -> int:
        """Position of ``value`` in the ascending image ordering."""
        try:
            return self.image.index(value)
        except ValueError:
            raise InvalidInputError(f"{value} is not in the image of {self.name}") from None

    def preimage(self, value: int) -> list[str]:
        words = all_words(self.k)
        return [words[i] for i in np.flatnonzero(self.table == value)]

    def is_constant(self) -> bool:
        return self.expressiveness == 1

    def __repr__(self):
        return f"TargetFunction({self.name}, k={self.k}, E={self.expressiveness})"


def tabulate(k: int, fn: Callable[[str], int], name: str = "custom") -> TargetFunction:
    """Build a TargetFunction by evaluating ``fn`` on every k-bit word."""
    if k < 0:
        raise InvalidInputError("k must be non-negative")
    if k > MAX_FUNCTION_K:
        raise SizeLimitError(f"cannot tabulate a function on F_2^{k}")
    table = np.fromiter((fn(w) for w in all_words(k)), dtype=np.int64, count=1 << k)
    return TargetFunction(k, table, name)


def vt_syndrome(k: int) -> TargetFunction:
    """Weighted position sum  sum_j j*u_j  mod (k+1)."""
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    return tabulate(k, lambda w: sum(j for j, b in enumerate(w, 1) if b == "1") % (k + 1), "vt")


def runs_function(k: int) -> TargetFunction:
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    return tabulate(k, lambda w: len(run_lengths(w)), "runs")


def max_run_function(k: int) -> TargetFunction:
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    return tabulate(k, lambda w: max(run_lengths(w)), "max_run")


def constant_function(k: int, value: int = 0) -> TargetFunction:
    return TargetFunction(k, np.full(1 << k, value, dtype=np.int64), "constant")


def weight_mod(k: int, m: int) -> TargetFunction:
    """Hamming weight modulo ``m``; handy small-image test function."""
    return tabulate(k, lambda w: w.count("1") % m, f"weight_mod{m}")


def catalog(k: int) -> dict[str, TargetFunction]:
    """The three structured function families at message length ``k``."""
    return {
        "vt": vt_syndrome(k),
        "runs": runs_function(k),
        "max_run": max_run_function(k),
    }


def from_mapping(k: int, values: Mapping[str, int], name: str = "custom") -> TargetFunction:
    """Build from an explicit ``{word: label}`` table covering all 2^k words."""
    table = np.empty(1 << k, dtype=np.int64)
    seen = np.zeros(1 << k, dtype=bool)
    for word, label in values.items():
        word = as_word(word)
        if len(word) != k:
            raise InvalidInputError(f"{word!r} has length {len(word)}, expected {k}")
        idx = word_to_int(word)
        if seen[idx]:
            raise InvalidInputError(f"duplicate entry for {word!r}")
        seen[idx] = True
        table[idx] = int(label)
    if not seen.all():
        missing = all_words(k)[int(np.flatnonzero(~seen)[0])]
        raise InvalidInputError(f"table is not total: {missing!r} missing")
    return TargetFunction(k, table, name)


def load_table(path, name: str | None = None) -> TargetFunction:
    """Read a ``bits<TAB>label`` file; must cover every word of one length."""
    values: dict[str, int] = {}
    lengths = set()
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise InvalidInputError(f"{path}:{lineno}: expected 'bits<TAB>label'")
        word = as_word(parts[0])
        try:
            values[word] = int(parts[1])
        except ValueError:
            raise InvalidInputError(f"{path}:{lineno}: label must be an integer") from None
        lengths.add(len(word))
    if len(lengths) != 1:
        raise InvalidInputError(f"{path}: words must share one length")
    return from_mapping(lengths.pop(), values, name or Path(path).stem)


def dump_table(f: TargetFunction) -> str:
    return "".join(f"{w}\t{int(v)}\n" for w, v in zip(all_words(f.k), f.table))


# ---------------------------------------------------------------------------
# function balls and local boundedness


def function_ball(f: TargetFunction, u: str, rho: int) -> set[int]:
    """Image of the insdel ball of radius ``rho`` around ``u``."""
    if len(u) != f.k:
        raise InvalidInputError(f"{u!r} is not a {f.k}-bit message")
    if rho < 0 or rho % 2:
        raise InvalidInputError("rho must be a non-negative even integer")
    mask = distances_from(u) <= rho
    return {int(v) for v in np.unique(f.table[mask])}


def _neighbourhood(k: int, rho: int) -> np.ndarray:
    if k > MAX_PAIRWISE_LENGTH:
        raise SizeLimitError(f"local analysis needs the full distance table; k={k} > {MAX_PAIRWISE_LENGTH}")
    return pairwise_distances(k) <= rho


def function_ball_sizes(f: TargetFunction, rho: int) -> np.ndarray:
    """``|B^f(u, rho)|`` for every message u (lexicographic order)."""
    if rho < 0 or rho % 2:
        raise InvalidInputError("rho must be a non-negative even integer")
    near = _neighbourhood(f.k, rho)
    onehot = f.table[:, None] == np.array(f.image)[None, :]
    hits = near.astype(np.int32) @ onehot.astype(np.int32)
    return np.count_nonzero(hits, axis=1)


def local_bound_profile(f: TargetFunction, rho: int) -> tuple[int, str]:
    """Largest function-ball size over all centres, with the lex-least maximiser.

    ``f`` is locally (rho, lam) exactly when the returned size is <= lam.
    """
    sizes = function_ball_sizes(f, rho)
    best = int(np.argmax(sizes))
    return int(sizes[best]), all_words(f.k)[best]


# ---------------------------------------------------------------------------
# conflict-graph colouring


@dataclass
class Coloring:
    f: TargetFunction
    rho: int
    lam: int
    colors: np.ndarray  # colour in 1..lam for every message
    method: str = "greedy"

    def __call__(self, word: str) -> int:
        return int(self.colors[word_to_int(word)])

    def violations(self) -> list[tuple[str, str]]:
        """Conflicting pairs sharing a colour; empty for a valid colouring."""
        adj = conflict_graph(self.f, self.rho)
        same = self.colors[:, None] == self.colors[None, :]
        bad = np.argwhere(np.triu(adj & same, 1))
        words = all_words(self.f.k)
        return [(words[i], words[j]) for i, j in bad]

    def is_valid(self) -> bool:
        in_range = bool(((self.colors >= 1) & (self.colors <= self.lam)).all())
        return in_range and not self.violations()


def conflict_graph(f: TargetFunction, rho: int) -> np.ndarray:
    """Adjacency: f(u) != f(v) and d(u, v) <= rho."""
    near = _neighbourhood(f.k, rho)
    return near & (f.table[:, None] != f.table[None, :])


def degeneracy_order(adj: np.ndarray) -> list[int]:
    """Smallest-last vertex order; ties go to the lowest index (lex-least word)."""
    n = adj.shape[0]
    degree = adj.sum(axis=1).astype(np.int64)
    removed = np.zeros(n, dtype=bool)
    removal = []
    for _ in range(n):
        masked = np.where(removed, np.iinfo(np.int64).max, degree)
        v = int(np.argmin(masked))
        removal.append(v)
        removed[v] = True
        degree[adj[v]] -= 1
    return removal[::-1]


def _greedy(adj: np.ndarray, order: list[int]) -> np.ndarray:
    colors = np.zeros(adj.shape[0], dtype=np.int64)
    for v in order:
        used = set(colors[adj[v]].tolist())
        c = 1
        while c in used:
            c += 1
        colors[v] = c
    return colors


def _backtrack(adj: np.ndarray, order: list[int], lam: int, node_limit: int) -> np.ndarray | None:
    n = adj.shape[0]
    colors = np.zeros(n, dtype=np.int64)
    neighbours = [np.flatnonzero(adj[v]) for v in range(n)]
    nodes = 0

    def place(pos: int) -> bool:
        nonlocal nodes
        if pos == n:
            return True
        v = order[pos]
        used = set(colors[neighbours[v]].tolist())
        # symmetry: never open more than one new colour at a time
        top = int(colors.max())
        for c in range(1, min(lam, top + 1) + 1):
            if c in used:
                continue
            nodes += 1
            if nodes > node_limit:
                raise SizeLimitError("colouring backtrack exceeded its node budget")
            colors[v] = c
            if place(pos + 1):
                return True
            colors[v] = 0
        return False

    return colors if place(0) else None


def build_coloring(f: TargetFunction, rho: int, lam: int, node_limit: int = 2_000_000) -> Coloring:
    """A colouring with at most ``lam`` colours separating close, f-different words.

    Greedy in degeneracy order first, exact backtracking if greedy overshoots.
    """
    if lam < 1:
        raise InvalidInputError("lam must be positive")
    worst, witness = local_bound_profile(f, rho)
    if worst > lam:
        raise InvalidInputError(
            f"{f.name} is not locally ({rho}, {lam}): |B^f({witness}, {rho})| = {worst}")
    adj = conflict_graph(f, rho)
    order = degeneracy_order(adj)
    colors = _greedy(adj, order)
    method = "greedy"
    if colors.max() > lam:
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * adj.shape[0] + 100))
        colors = _backtrack(adj, order, lam, node_limit)
        method = "backtracking"
        if colors is None:
            raise DefectError(
                f"no {lam}-colouring of the conflict graph of {f.name} at rho={rho} exists")
    result = Coloring(f, rho, lam, colors, method)
    if not result.is_valid():
        raise DefectError("colouring failed its own validity check")
    return result
