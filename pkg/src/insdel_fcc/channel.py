"""Insertion/deletion channel, exhaustive function decoder and simulation.

Positions are 0-based.  A random adversary draws the number of operations
uniformly from 0..t, then each operation's kind, position and symbol
uniformly; an exhaustive adversary enumerates every word within insdel
distance t of the transmitted word.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import DefectError, InvalidInputError, SizeLimitError
from .fcidc import FcidcEncoder
from .words_metric import all_words, deletion_sphere, insertion_sphere, lcs_grid, to_bits

MAX_DECODE_K = 12


@dataclass(frozen=True)
class ChannelEvent:
    kind: str  # "insert" | "delete"
    position: int
    symbol: str | None = None

    def __post_init__(self):
        if self.kind not in ("insert", "delete"):
            raise InvalidInputError(f"unknown event kind {self.kind!r}")
        if self.kind == "insert" and self.symbol not in ("0", "1"):
            raise InvalidInputError("insert needs a symbol '0' or '1'")
        if self.kind == "delete" and self.symbol is not None:
            raise InvalidInputError("delete takes no symbol")

    def apply(self, word: str) -> str:
        if self.kind == "delete":
            if not 0 <= self.position < len(word):
                raise InvalidInputError(f"delete at {self.position} outside a word of length {len(word)}")
            return word[:self.position] + word[self.position + 1:]
        if not 0 <= self.position <= len(word):
            raise InvalidInputError(f"insert at {self.position} outside 0..{len(word)}")
        return word[:self.position] + self.symbol + word[self.position:]

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "position": self.position}
        if self.symbol is not None:
            d["symbol"] = self.symbol
        return d


def delete(position: int) -> ChannelEvent:
    return ChannelEvent("delete", position)


def insert(position: int, symbol: str) -> ChannelEvent:
    return ChannelEvent("insert", position, symbol)


def apply_channel(word: str, events) -> str:
    for ev in events:
        word = ev.apply(word)
    return word


def random_events(length: int, t: int, rng: np.random.Generator) -> list[ChannelEvent]:
    count = int(rng.integers(0, t + 1))
    events = []
    current = length
    for _ in range(count):
        if current == 0 or rng.integers(0, 2) == 0:
            events.append(insert(int(rng.integers(0, current + 1)), "01"[int(rng.integers(0, 2))]))
            current += 1
        else:
            events.append(delete(int(rng.integers(0, current))))
            current -= 1
    return events


def events_between(x: str, y: str) -> list[ChannelEvent]:
    """A shortest event list turning x into y: deletions, then insertions (LCS traceback)."""
    m, n = len(x), len(y)
    L = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        for j in range(n - 1, -1, -1):
            L[i][j] = L[i + 1][j + 1] + 1 if x[i] == y[j] else max(L[i + 1][j], L[i][j + 1])
    keep_x, keep_y = [], []
    i = j = 0
    while i < m and j < n:
        if x[i] == y[j] and L[i][j] == L[i + 1][j + 1] + 1:
            keep_x.append(i)
            keep_y.append(j)
            i += 1
            j += 1
        elif L[i + 1][j] >= L[i][j + 1]:
            i += 1
        else:
            j += 1
    kept = set(keep_x)
    # delete from the right so earlier positions stay valid
    events = [delete(p) for p in range(m - 1, -1, -1) if p not in kept]
    kept_y = set(keep_y)
    events += [insert(p, y[p]) for p in range(n) if p not in kept_y]
    return events


def received_set(word: str, t: int) -> list[str]:
    """Every word reachable from ``word`` with at most t insertions and deletions."""
    out = set()
    for i in range(min(t, len(word)) + 1):
        for d in deletion_sphere(word, i):
            for j in range(t - i + 1):
                out.update(insertion_sphere(d, j))
    return sorted(out, key=lambda w: (len(w), w))


# ---------------------------------------------------------------------------
# decoding


@dataclass
class DecodeResult:
    status: str  # "ok" | "empty" | "mixed"
    value: int | None
    candidates: list[str]
    values: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"status": self.status, "value": self.value, "candidates": self.candidates,
                "values": self.values}


def _codeword_bits(enc: FcidcEncoder) -> np.ndarray:
    return to_bits(enc.codewords())


def _classify(enc: FcidcEncoder, mask: np.ndarray) -> DecodeResult:
    idx = np.flatnonzero(mask)
    msgs = all_words(enc.k)
    cands = [msgs[i] for i in idx]
    vals = sorted({int(v) for v in enc.f.table[idx]})
    if not cands:
        return DecodeResult("empty", None, [], [])
    if len(vals) == 1:
        return DecodeResult("ok", vals[0], cands, vals)
    if enc.verified:
        raise DefectError(f"verified encoder produced mixed candidates {cands}", enc.report)
    return DecodeResult("mixed", None, cands, vals)


def decode_function(enc: FcidcEncoder, received: str, t: int | None = None) -> DecodeResult:
    """Candidates are the messages whose encoding is within distance t of ``received``."""
    t = enc.t if t is None else t
    if enc.k > MAX_DECODE_K:
        raise SizeLimitError(f"exhaustive decoding needs k <= {MAX_DECODE_K}")
    n = enc.length
    if not n - t <= len(received) <= n + t:
        raise InvalidInputError(f"received length {len(received)} outside [{n - t}, {n + t}]")
    lcs = lcs_grid(_codeword_bits(enc), to_bits([received]))[:, 0].astype(np.int64)
    dist = n + len(received) - 2 * lcs
    return _classify(enc, dist <= t)


# ---------------------------------------------------------------------------
# simulation


@dataclass
class SimulationRecord:
    message: str
    events: list[ChannelEvent]
    received: str
    candidates: list[str]
    decoded_value: int | None
    status: str
    success: bool

    def to_dict(self) -> dict:
        return {"message": self.message, "events": [e.to_dict() for e in self.events],
                "received": self.received, "candidates": self.candidates,
                "decoded_value": self.decoded_value, "status": self.status, "success": self.success}


@dataclass
class SimulationSummary:
    trials: int
    successes: int
    statuses: dict
    adversary: str
    channel_t: int
    decoder_t: int
    seed: int | None
    failures: list[SimulationRecord] = field(default_factory=list)
    records: list[SimulationRecord] = field(default_factory=list)

    @property
    def success_rate(self) -> float | None:
        return self.successes / self.trials if self.trials else None

    def to_dict(self, with_records: bool = False) -> dict:
        out = {"trials": self.trials, "successes": self.successes, "success_rate": self.success_rate,
               "statuses": dict(self.statuses), "adversary": self.adversary,
               "channel_t": self.channel_t, "decoder_t": self.decoder_t, "seed": self.seed,
               "failures": [r.to_dict() for r in self.failures[:20]],
               "failure_count": len(self.failures)}
        if with_records:
            out["records"] = [r.to_dict() for r in self.records]
        return out


def _record(enc, x, events, received, res: DecodeResult) -> SimulationRecord:
    truth = enc.f(x)
    ok = res.status == "ok" and res.value == truth
    return SimulationRecord(x, events, received, res.candidates, res.value, res.status, ok)


def simulate(enc: FcidcEncoder, trials: int | None = None, t: int | None = None,
             adversary: str = "random", seed: int = 0, keep_records: bool = False) -> SimulationSummary:
    """Push encoded messages through the channel and decode f.

    ``t`` is the channel budget (defaults to the encoder's); the decoder
    always searches radius ``enc.t``.  In exhaustive mode every message and
    every word within distance t of its encoding is tried once, and
    ``trials`` is ignored.
    """
    t = enc.t if t is None else t
    if adversary not in ("random", "exhaustive"):
        raise InvalidInputError("adversary must be 'random' or 'exhaustive'")
    if enc.k > MAX_DECODE_K:
        raise SizeLimitError(f"simulation needs k <= {MAX_DECODE_K}")
    statuses: Counter = Counter()
    failures, records = [], []
    successes = total = 0

    def tally(rec: SimulationRecord):
        nonlocal successes, total
        total += 1
        statuses[rec.status] += 1
        successes += rec.success
        if not rec.success:
            failures.append(rec)
        if keep_records:
            records.append(rec)

    msgs = all_words(enc.k)
    code_bits = _codeword_bits(enc)
    n = enc.length
    if adversary == "exhaustive":
        if n + t > 24 or (1 << enc.k) * (n + t) ** t > 5_000_000:
            raise SizeLimitError("exhaustive channel enumeration too large")
        per_msg = [received_set(enc.encode(x), t) for x in msgs]
        by_len: dict[int, list[str]] = {}
        for rs in per_msg:
            for y in rs:
                by_len.setdefault(len(y), []).append(y)
        within: dict[str, np.ndarray] = {}
        for length, ys in by_len.items():
            ys = sorted(set(ys))
            if abs(length - n) > enc.t:
                for y in ys:
                    within[y] = np.zeros(len(msgs), dtype=bool)
                continue
            lcs = lcs_grid(code_bits, to_bits(ys)).astype(np.int64)
            dist = n + length - 2 * lcs
            for col, y in enumerate(ys):
                within[y] = dist[:, col] <= enc.t
        for x, rs in zip(msgs, per_msg):
            cw = enc.encode(x)
            for y in rs:
                res = _classify(enc, within[y])
                rec = _record(enc, x, [], y, res)
                if not rec.success or keep_records:
                    rec.events = events_between(cw, y)
                tally(rec)
        return SimulationSummary(total, successes, statuses, adversary, t, enc.t, None, failures, records)

    rng = np.random.default_rng(seed)
    for _ in range(trials or 0):
        x = msgs[int(rng.integers(0, len(msgs)))]
        events = random_events(n, t, rng)
        y = apply_channel(enc.encode(x), events)
        if abs(len(y) - n) > enc.t:
            res = DecodeResult("empty", None, [], [])
        else:
            res = decode_function(enc, y)
        tally(_record(enc, x, events, y, res))
    return SimulationSummary(total, successes, statuses, adversary, t, enc.t, seed, failures, records)
