"""Closed-form bounds on irregular-code lengths and on redundancy.

All values are exact: rationals are :class:`fractions.Fraction`, and the one
square root (Plotkin-like bound) is kept symbolic as a :class:`Surd` so that
comparisons against rationals are decided exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, isqrt
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, SizeLimitError
from .functions import runs_function
from .matrices import DistanceMatrix, family_distance_closed_form, message_matrix, representative_vectors
from .words_metric import (
    all_words,
    deletion_sphere,
    insdel_distance,
    is_subsequence,
    pairwise_distances,
    sphere_size_sandwich,
)

Number = int | Fraction


@dataclass(frozen=True)
class Surd:
    """The real number ``a + b * sqrt(radicand)`` with rational a, b, radicand >= 0."""

    a: Fraction
    b: Fraction
    radicand: Fraction

    def __post_init__(self):
        if self.radicand < 0:
            raise InvalidInputError("negative radicand")

    def _cmp(self, q: Number) -> int:
        """Sign of self - q."""
        lhs = Fraction(self.a) - Fraction(q)  # compare b*sqrt(D) against -lhs
        if self.b == 0 or self.radicand == 0:
            return (lhs > 0) - (lhs < 0)
        root_sq = self.b * self.b * self.radicand
        if self.b > 0:
            # lhs + |b| sqrt(D)
            if lhs >= 0:
                return 1
            diff = root_sq - lhs * lhs
        else:
            if lhs <= 0:
                return -1
            diff = lhs * lhs - root_sq
        return (diff > 0) - (diff < 0)

    def __eq__(self, other):
        if isinstance(other, Surd):
            mine, theirs = self.as_fraction(), other.as_fraction()
            if mine is not None or theirs is not None:
                return mine == theirs
            return (self.a, self.b, self.radicand) == (other.a, other.b, other.radicand)
        return self._cmp(other) == 0

    def __hash__(self):
        return hash((self.a, self.b, self.radicand))

    def __lt__(self, q):
        return self._cmp(q) < 0

    def __le__(self, q):
        return self._cmp(q) <= 0

    def __gt__(self, q):
        return self._cmp(q) > 0

    def __ge__(self, q):
        return self._cmp(q) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * float(self.radicand) ** 0.5

    def as_fraction(self) -> Fraction | None:
        """Exact rational value when the square root is rational, else None."""
        num, den = self.radicand.numerator, self.radicand.denominator
        rn, rd = isqrt(num), isqrt(den)
        if rn * rn == num and rd * rd == den:
            return self.a + self.b * Fraction(rn, rd)
        return None

    def interval(self, scale: int = 10**6) -> tuple[Fraction, Fraction]:
        """Rational bracket [lo, hi] around the value, width about |b|/scale."""
        exact = self.as_fraction()
        if exact is not None:
            return exact, exact
        scaled = self.radicand * scale * scale
        lo_root = Fraction(isqrt(scaled.numerator // scaled.denominator), scale)
        hi_root = lo_root + Fraction(1, scale)
        ends = sorted((self.a + self.b * lo_root, self.a + self.b * hi_root))
        return ends[0], ends[1]

    def __repr__(self):
        exact = self.as_fraction()
        if exact is not None:
            return f"Surd({exact})"
        return f"Surd({self.a} + {self.b}*sqrt({self.radicand}) ~ {float(self):.6f})"

    def __str__(self):
        exact = self.as_fraction()
        if exact is not None:
            return str(exact)
        return f"{self.a} + {self.b}*sqrt({self.radicand})"


@dataclass
class BoundReport:
    name: str
    value: Number | Surd
    direction: str  # "lower" | "upper"
    parameters: dict = field(default_factory=dict)
    premise: str | None = None

    def exact(self) -> Fraction | None:
        if isinstance(self.value, Surd):
            return self.value.as_fraction()
        return Fraction(self.value)

    def to_dict(self) -> dict:
        v = self.value
        if isinstance(v, Surd):
            lo, hi = v.interval()
            shown = {"approx": float(v), "interval": [str(lo), str(hi)]}
            if v.as_fraction() is not None:
                shown["exact"] = str(v.as_fraction())
        else:
            shown = {"exact": str(v), "approx": float(v)}
        return {"name": self.name, "direction": self.direction, "value": shown,
                "parameters": {k: str(p) if isinstance(p, Fraction) else p
                               for k, p in self.parameters.items()},
                "premise": self.premise}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _matrix(matrix) -> DistanceMatrix:
    return matrix if isinstance(matrix, DistanceMatrix) else DistanceMatrix(np.asarray(matrix))


# ---------------------------------------------------------------------------
# supersequence sum bound


def sum_bound_rhs(M: int, n: int, N: int) -> Fraction:
    return Fraction(M * M * (N - n) * n, N)


def sum_bound_check(code: Sequence[str], v: str) -> bool:
    """Does sum_{i<j} d(c_i, c_j) <= M^2 (N - n) n / N hold for this code and supersequence?"""
    code = list(code)
    if not code:
        raise InvalidInputError("empty code")
    n = len(code[0])
    if any(len(c) != n for c in code):
        raise InvalidInputError("codewords must share one length")
    bad = [c for c in code if not is_subsequence(c, v)]
    if bad:
        raise InvalidInputError(f"{v!r} is not a supersequence of {bad[0]!r}")
    N = len(v)
    if N == 0:
        return True
    total = sum(insdel_distance(code[i], code[j])
                for i in range(len(code)) for j in range(i + 1, len(code)))
    return total <= sum_bound_rhs(len(code), n, N)


def _subsequences_of_length(v: str, n: int) -> list[str]:
    return deletion_sphere(v, len(v) - n)


def sum_bound_violations(max_n: int = 4, max_N: int = 6) -> tuple[int, int]:
    """Exhaustively test the sum bound: every v with |v| <= max_N, every n <= min(max_n, |v|),
    every non-empty set of length-n subsequences of v.

    Returns (cases checked, violations).
    """
    checked = violations = 0
    for N in range(1, max_N + 1):
        for v in all_words(N):
            for n in range(0, min(max_n, N) + 1):
                subs = _subsequences_of_length(v, n)
                s = len(subs)
                if s > 20:
                    raise SizeLimitError("too many subsequences for subset enumeration")
                idx = np.array([int(w, 2) if w else 0 for w in subs])
                D = pairwise_distances(n)[np.ix_(idx, idx)].astype(np.int64)
                masks = np.arange(1, 1 << s, dtype=np.int64)
                X = ((masks[:, None] >> np.arange(s)) & 1).astype(np.int64)
                totals = ((X @ D) * X).sum(axis=1) // 2
                M = X.sum(axis=1)
                # totals <= M^2 (N-n) n / N  <=>  N * totals <= M^2 (N-n) n
                bad = N * totals > M * M * (N - n) * n
                checked += len(masks)
                violations += int(bad.sum())
    return checked, violations


# ---------------------------------------------------------------------------
# Plotkin-type lower bounds on N1


def minimal_supersequence_length(matrix) -> Fraction:
    """Smallest N for which the Plotkin-like radicand is non-negative: 4S / M^2."""
    m = _matrix(matrix)
    return Fraction(4 * m.total, m.order * m.order)


def plotkin_like_lower(matrix, N: Number) -> BoundReport:
    """(N - sqrt(N^2 - 4SN/M^2)) / 2.

    Valid as a lower bound on N1(I) whenever some code of minimum length has
    a common supersequence of length N; that premise is not checked.
    """
    m = _matrix(matrix)
    N = Fraction(N)
    minimal = minimal_supersequence_length(m)
    if N < minimal:
        raise InvalidInputError(f"N = {N} is below the minimal admissible N = {minimal}")
    M, S = m.order, m.total
    if N == 0:
        value = Surd(Fraction(0), Fraction(0), Fraction(0))
    else:
        radicand = N * N - Fraction(4 * S) * N / (M * M)
        value = Surd(N / 2, Fraction(-1, 2), radicand)
    return BoundReport("plotkin-like", value, "lower", {"M": M, "S": S, "N": N},
                       premise=f"a common supersequence of length {N} exists for an optimal code")


def simplified_plotkin_lower(matrix) -> BoundReport:
    """2S/M^2, the Plotkin-like value at N = 4S/M^2."""
    m = _matrix(matrix)
    return BoundReport("simplified-plotkin", Fraction(2 * m.total, m.order ** 2), "lower",
                       {"M": m.order, "S": m.total})


def hamming_plotkin_lower(matrix) -> BoundReport:
    """2S/M^2 (M even) or 2S/(M^2 - 1) (M odd), via d_H >= d_ID / 2."""
    m = _matrix(matrix)
    M, S = m.order, m.total
    denom = M * M if M % 2 == 0 else M * M - 1
    value = Fraction(2 * S, denom) if denom else Fraction(0)
    return BoundReport("hamming-plotkin", value, "lower", {"M": M, "S": S})


# ---------------------------------------------------------------------------
# runs-function redundancy bound


def _half_up(t: int) -> int:
    return ceil(t / 2)


def runs_bracket(t: int, plus_square: bool = False) -> Fraction:
    """5t(t+1)(t+2)/6 + c(t+1) -/+ c^2 with c = ceil(t/2).

    ``plus_square=False`` gives ``- c^2``, which equals the pair sum over the
    (t+2)-leading submatrix; ``plus_square=True`` gives the ``+ c^2`` variant.
    """
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    c = _half_up(t)
    sign = 1 if plus_square else -1
    return Fraction(5 * t * (t + 1) * (t + 2), 6) + c * (t + 1) + sign * c * c


def runs_double_sum(t: int) -> int:
    """sum_{i even <= t} (t+1-i)(2t-i) + sum_{i odd <= t} (t+1-i)(2t+1-i)."""
    return sum((t + 1 - i) * (2 * t - i if i % 2 == 0 else 2 * t + 1 - i) for i in range(t + 1))


def runs_submatrix_sum(t: int, k: int | None = None) -> int:
    """S of the (t+2)-leading submatrix of the type-1 runs matrix, built from actual words."""
    k = t + 2 if k is None else k
    if k < t + 2:
        raise InvalidInputError("need k >= t + 2")
    reps = representative_vectors("runs", k)[: t + 2]
    return message_matrix(runs_function(k), t, reps, "type1").total


def runs_submatrix_sum_closed(t: int) -> int:
    """Same pair sum from the representative-distance closed form."""
    return sum(max(2 * t + 2 - family_distance_closed_form(i, j), 0)
               for i in range(1, t + 3) for j in range(i + 1, t + 3))


def runs_redundancy_lower(t: int, plus_square: bool = False) -> BoundReport:
    """Lower bound 2/(t+2)^2 * bracket on the runs-function redundancy (k >= t+2)."""
    value = Fraction(2, (t + 2) ** 2) * runs_bracket(t, plus_square)
    name = "runs-lower-plus-square" if plus_square else "runs-lower"
    return BoundReport(name, value, "lower", {"t": t, "k_min": t + 2})


def runs_closed_form_plus_square(t: int) -> Fraction:
    """(10t^3+39t^2+26t)/(3(t+2)^2) for even t, (10t^3+39t^2+38t+29)/(3(t+2)^2) for odd t."""
    if t % 2 == 0:
        return Fraction(10 * t**3 + 39 * t**2 + 26 * t, 3 * (t + 2) ** 2)
    return Fraction(10 * t**3 + 39 * t**2 + 38 * t + 29, 3 * (t + 2) ** 2)


def runs_closed_form(t: int) -> Fraction:
    """Simplification of the double-sum bound: numerator over 6(t+2)^2."""
    extra = 0 if t % 2 == 0 else 3
    return Fraction(10 * t**3 + 33 * t**2 + 26 * t + extra, 6 * (t + 2) ** 2)


def fit_numerator(values, parity: int) -> list[Fraction]:
    """Cubic coefficients [c3, c2, c1, c0] of value(t) * 6(t+2)^2 over t of one parity.

    ``values`` maps t to a bound value; four points are interpolated and the
    fit is confirmed on every remaining point of that parity.
    """
    pts = [(t, values(t) * 6 * (t + 2) ** 2) for t in range(1, 16) if t % 2 == parity]
    base, rest = pts[:4], pts[4:]
    A = [[Fraction(t) ** p for p in (3, 2, 1, 0)] for t, _ in base]
    y = [v for _, v in base]
    coeffs = _solve(A, y)
    for t, v in rest:
        if sum(c * Fraction(t) ** p for c, p in zip(coeffs, (3, 2, 1, 0))) != v:
            raise ArithmeticError("not a cubic numerator over 6(t+2)^2")
    return coeffs


def _solve(A, y):
    n = len(A)
    aug = [row[:] + [v] for row, v in zip(A, y)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col] / aug[col][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


# ---------------------------------------------------------------------------
# sphere sizes


def sphere_size_bounds(x: str, t: int) -> tuple[int, int, int]:
    """(max(1, C(rho-t+1, t)), C(n+t, t), sum_{i<=t} C(n+t, i)) for deletion/insertion sphere sizes."""
    return sphere_size_sandwich(x, t)


def insertion_sphere_size(n: int, t: int) -> int:
    """Exact |I_t(x)| for any x of length n (independent of x)."""
    return sum(comb(n + t, i) for i in range(t + 1))
