"""Requirement matrices: insdel distance matrices over messages and over image values."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from math import ceil
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, SizeLimitError
from .functions import TargetFunction
from .words_metric import (
    MAX_PAIRWISE_LENGTH,
    all_words,
    distances_from,
    insdel_distance,
    pairwise_distances,
)

KINDS = ("type1-messages", "type2-messages", "type1-function", "type2-function", "custom")
#: exhaustive function distance is allowed up to this message length
MAX_FUNCTION_DISTANCE_K = 14


def clamp(value: int) -> int:
    return value if value > 0 else 0


@dataclass
class DistanceMatrix:
    entries: np.ndarray
    kind: str = "custom"
    labels: list = field(default_factory=list)
    k_anchor: int | None = None

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.int64)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise InvalidInputError("distance matrix must be square")
        if (self.entries < 0).any():
            raise InvalidInputError("distance matrix entries must be non-negative")
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown matrix kind {self.kind!r}")
        if not self.labels:
            self.labels = list(range(1, self.order + 1))
        if len(self.labels) != self.order:
            raise InvalidInputError("one label per row required")

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @property
    def total(self) -> int:
        """S: sum of the entries strictly above the diagonal."""
        return int(np.triu(self.entries, 1).sum())

    def requirement(self) -> np.ndarray:
        """Symmetrised requirements max(I, I^T), what a code actually has to meet."""
        return np.maximum(self.entries, self.entries.T)

    def is_symmetric(self) -> bool:
        return bool((self.entries == self.entries.T).all())

    def principal(self, size: int) -> "DistanceMatrix":
        return DistanceMatrix(self.entries[:size, :size], self.kind, self.labels[:size], self.k_anchor)

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def to_json(self) -> str:
        data = {"order": self.order, "kind": self.kind, "labels": self.labels,
                "entries": self.tolist()}
        if self.k_anchor is not None:
            data["k_anchor"] = self.k_anchor
        return json.dumps(data)

    @classmethod
    def from_json(cls, text: str) -> "DistanceMatrix":
        data = json.loads(text)
        m = cls(np.array(data["entries"]), data.get("kind", "custom"),
                data.get("labels") or [], data.get("k_anchor"))
        if data.get("order", m.order) != m.order:
            raise InvalidInputError("'order' disagrees with the entries")
        return m

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + [str(x) for x in self.labels])
        for label, row in zip(self.labels, self.tolist()):
            writer.writerow([str(label)] + row)
        return buf.getvalue()

    def __eq__(self, other):
        if isinstance(other, DistanceMatrix):
            return np.array_equal(self.entries, other.entries)
        return np.array_equal(self.entries, np.asarray(other))


def uniform_matrix(order: int, d: int) -> DistanceMatrix:
    """Constant off-diagonal requirement ``d``."""
    if order < 1 or d < 0:
        raise InvalidInputError("order must be >= 1 and d >= 0")
    entries = np.full((order, order), d, dtype=np.int64)
    np.fill_diagonal(entries, 0)
    return DistanceMatrix(entries)


# ---------------------------------------------------------------------------
# message matrices


def message_matrix(f: TargetFunction, t: int, xs: Sequence[str], kind: str = "type1") -> DistanceMatrix:
    """Requirement matrix over the messages ``xs``.

    Entry (i, j) is ``[2t + 2 - d(x_i, x_j)]^+`` (type1) or
    ``[2t + 2 + 2k - d(x_i, x_j)]^+`` (type2) when f(x_i) != f(x_j), else 0.
    """
    if kind not in ("type1", "type2"):
        raise InvalidInputError("kind must be 'type1' or 'type2'")
    xs = list(xs)
    if len(set(xs)) != len(xs):
        raise InvalidInputError("messages must be distinct")
    if any(len(x) != f.k for x in xs):
        raise InvalidInputError(f"all messages must have length {f.k}")
    base = 2 * t + 2 + (2 * f.k if kind == "type2" else 0)
    values = [f(x) for x in xs]
    M = len(xs)
    entries = np.zeros((M, M), dtype=np.int64)
    for i in range(M):
        for j in range(i + 1, M):
            if values[i] != values[j]:
                entries[i, j] = entries[j, i] = clamp(base - insdel_distance(xs[i], xs[j]))
    return DistanceMatrix(entries, f"{kind}-messages", xs, f.k if kind == "type2" else None)


# ---------------------------------------------------------------------------
# function distance


def function_distance_table(f: TargetFunction) -> np.ndarray:
    """E x E table of minimum insdel distance between preimage classes."""
    if f.k > MAX_FUNCTION_DISTANCE_K:
        raise SizeLimitError(f"exhaustive function distance needs k <= {MAX_FUNCTION_DISTANCE_K}")
    image = np.array(f.image)
    E = len(image)
    classes = f.table[:, None] == image[None, :]  # (N, E)
    big = np.int32(4 * f.k + 1)
    if f.k <= MAX_PAIRWISE_LENGTH:
        D = pairwise_distances(f.k).astype(np.int32)
        # nearest[u, e] = min distance from u to class e
        nearest = np.stack([np.where(classes[:, e][None, :], D, big).min(axis=1) for e in range(E)], axis=1)
    else:
        nearest = np.empty((1 << f.k, E), dtype=np.int32)
        for u, w in enumerate(all_words(f.k)):
            d = distances_from(w)
            nearest[u] = np.where(classes, d[:, None], big).min(axis=0)
    table = np.stack([np.where(classes[:, a][:, None], nearest, big).min(axis=0) for a in range(E)])
    return table.astype(np.int64)


def function_distance(f: TargetFunction, a: int, b: int) -> int:
    """Minimum insdel distance between a preimage of ``a`` and a preimage of ``b``."""
    ia, ib = f.image_index(a), f.image_index(b)
    if ia == ib:
        return 0
    return int(function_distance_table(f)[ia, ib])


def max_run_distance_estimate(i: int, j: int) -> int:
    """Lower estimate 2*ceil(|i-j| / (min(i,j)+1)) for the max-run function distance."""
    return 2 * ceil(abs(i - j) / (min(i, j) + 1))


def function_matrix(f: TargetFunction, t: int, kind: str = "type2",
                    estimates=None, verify_estimates: bool = True) -> DistanceMatrix:
    """E x E requirement matrix over image values (ascending label order).

    Entry (i, j), i != j, is ``[2(t+1) - d^f]^+`` (type1) or ``[2(t+1+k) - d^f]^+``
    (type2).  ``estimates`` -- an E x E array or a callable ``(a, b) -> int`` on
    labels -- replaces d^f; each estimate must not exceed the true function
    distance, which is checked whenever k allows an exhaustive computation.
    """
    if kind not in ("type1", "type2"):
        raise InvalidInputError("kind must be 'type1' or 'type2'")
    image = f.image
    E = len(image)
    exact = None
    if f.k <= MAX_FUNCTION_DISTANCE_K:
        exact = function_distance_table(f)
    if estimates is None:
        if exact is None:
            raise SizeLimitError(
                f"k={f.k} is too large for exact function distances; supply estimates")
        dist = exact
    else:
        if callable(estimates):
            dist = np.array([[estimates(a, b) for b in image] for a in image], dtype=np.int64)
        else:
            dist = np.asarray(estimates, dtype=np.int64)
        if dist.shape != (E, E) or (dist < 0).any():
            raise InvalidInputError(f"estimates must be a non-negative {E}x{E} table")
        if verify_estimates and exact is not None:
            off = ~np.eye(E, dtype=bool)
            bad = np.argwhere(off & (dist > exact))
            if len(bad):
                i, j = bad[0]
                raise InvalidInputError(
                    f"estimate a[{image[i]},{image[j]}]={dist[i, j]} exceeds d^f={exact[i, j]}")
    base = 2 * (t + 1) + (2 * f.k if kind == "type2" else 0)
    entries = np.where(np.eye(E, dtype=bool), 0, np.maximum(base - dist, 0))
    return DistanceMatrix(entries, f"{kind}-function", list(image), f.k if kind == "type2" else None)


# ---------------------------------------------------------------------------
# representative message families


def _runs_representative(k: int, i: int) -> str:
    if i % 2:
        return "0" * (k - i + 1) + "10" * ((i - 1) // 2)
    return "0" * (k - i + 1) + "10" * ((i - 2) // 2) + "1"


def _max_run_representative(k: int, i: int) -> str:
    if (k - i) % 2 == 0:
        return "0" * i + "10" * ((k - i) // 2)
    return "0" * i + "10" * ((k - i - 1) // 2) + "1"


def representative_vectors(family: str, k: int) -> list[str]:
    """Message families whose function values are 'consecutive'.

    * ``vt``: 0^k followed by the weight-one words with the 1 in positions 1..k
      (VT values 0..k).
    * ``runs``: x_i with exactly i runs, i = 1..k.
    * ``max_run``: x_i with longest run i, i = 1..k.
    """
    if k < 2:
        raise InvalidInputError("representative families need k >= 2")
    if family == "vt":
        return ["0" * k] + ["0" * (i - 2) + "1" + "0" * (k - i + 1) for i in range(2, k + 2)]
    if family == "runs":
        return [_runs_representative(k, i) for i in range(1, k + 1)]
    if family == "max_run":
        return [_max_run_representative(k, i) for i in range(1, k + 1)]
    raise InvalidInputError(f"unknown family {family!r}")


def family_distance_closed_form(i: int, j: int) -> int:
    """|i-j| rounded up to even: the claimed pairwise distance of runs/max-run representatives."""
    d = abs(i - j)
    return d + (d % 2)
