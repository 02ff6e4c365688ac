"""Deterministic total edge-colouring sources over a finite or extendable window.

Every oracle maps canonical k-edges to colours in [r] as a pure function of
the edge: repeated queries return identical values and growing the window
never changes the colour of a previously colourable edge. Three sources are
provided: seeded hashing (reproducible pseudo-random colourings), explicit
tables loaded from JSON, and the blocking construction (see adversary.py,
registered here through load_colouring).
"""

from __future__ import annotations

import hashlib
import itertools
import json
import struct
from math import comb
from pathlib import Path

from .core import Edge, as_edge
from .errors import OracleLoadError, OutOfWindowError, ParameterError


class ColouringOracle:
    """Base class: arity/window checks plus the purity contract.

    Subclasses set k, r and window_hint (largest vertex id guaranteed
    colourable, or None when the window extends on demand) and implement
    _colour for canonical in-window edges.
    """

    k: int
    r: int
    window_hint: int | None

    def colour(self, e) -> int:
        edge = as_edge(e)
        if len(edge) != self.k:
            raise ParameterError(f"edge {edge} has {len(edge)} vertices, oracle expects k={self.k}")
        if self.window_hint is not None and edge[-1] > self.window_hint:
            raise OutOfWindowError(
                f"vertex {edge[-1]} beyond oracle window [1, {self.window_hint}]"
            )
        return self._colour(edge)

    def _colour(self, edge: Edge) -> int:
        raise NotImplementedError

    def descriptor(self) -> dict:
        """JSON-serialisable description sufficient to rebuild this oracle."""
        raise NotImplementedError


class RandomOracle(ColouringOracle):
    """Colours drawn per edge from BLAKE2b keyed on the seed.

    The message is the big-endian 64-bit packing of the sorted vertex ids, the
    key is the decimal seed; the first 8 digest bytes reduce modulo r. The
    colour of an edge is therefore a pure function of (seed, edge): colours do
    not depend on query order and instances with equal seeds agree on every
    edge. Uniform over [r] up to the negligible modulo bias.
    """

    def __init__(self, r: int, k: int, seed: int):
        if r < 1:
            raise ParameterError(f"r must be >= 1, got {r}")
        if k < 2:
            raise ParameterError(f"k must be >= 2, got {k}")
        self.r = r
        self.k = k
        self.seed = int(seed)
        self.window_hint = None
        self._key = str(self.seed).encode()
        self._pack = struct.Struct(f">{k}Q").pack

    def _colour(self, edge: Edge) -> int:
        digest = hashlib.blake2b(self._pack(*edge), key=self._key, digest_size=8).digest()
        return 1 + int.from_bytes(digest, "big") % self.r

    def descriptor(self) -> dict:
        return {"kind": "random", "k": self.k, "r": self.r, "seed": self.seed}


def make_random_oracle(r: int, k: int, seed: int) -> RandomOracle:
    """Seeded reproducible colouring, uniform over [r] (see RandomOracle)."""
    return RandomOracle(r, k, seed)


class ExplicitOracle(ColouringOracle):
    """Table-backed colouring, total over a declared window [1, window]."""

    def __init__(self, k: int, r: int, window: int, table: dict[Edge, int]):
        if k < 2:
            raise ParameterError(f"k must be >= 2, got {k}")
        if r < 1:
            raise ParameterError(f"r must be >= 1, got {r}")
        if window < k:
            raise ParameterError(f"window {window} too small for k={k}")
        self.k = k
        self.r = r
        self.window_hint = window
        self._table = dict(table)
        self._check_total()

    def _check_total(self):
        expected = comb(self.window_hint, self.k)
        if len(self._table) == expected:
            return
        for e in itertools.combinations(range(1, self.window_hint + 1), self.k):
            if e not in self._table:
                raise OracleLoadError(f"edge {{{','.join(map(str, e))}}} uncoloured")

    def _colour(self, edge: Edge) -> int:
        return self._table[edge]

    def descriptor(self) -> dict:
        return {
            "kind": "explicit",
            "k": self.k,
            "r": self.r,
            "window": self.window_hint,
            "edges": [{"e": list(e), "c": c} for e, c in sorted(self._table.items())],
        }


def _require(obj: dict, key: str, kind: str):
    if key not in obj:
        raise OracleLoadError(f"{kind} colouring missing key '{key}'")
    return obj[key]


def _load_explicit(obj: dict) -> ExplicitOracle:
    k = int(_require(obj, "k", "explicit"))
    r = int(_require(obj, "r", "explicit"))
    window = int(_require(obj, "window", "explicit"))
    entries = _require(obj, "edges", "explicit")
    table: dict[Edge, int] = {}
    for entry in entries:
        if not isinstance(entry, dict) or "e" not in entry or "c" not in entry:
            raise OracleLoadError(f"malformed edge entry {entry!r}")
        try:
            e = as_edge(entry["e"])
        except ParameterError as exc:
            raise OracleLoadError(f"malformed edge {entry['e']!r}: {exc}") from None
        if len(e) != k:
            raise OracleLoadError(f"edge {{{','.join(map(str, e))}}} has arity {len(e)}, expected {k}")
        if e[-1] > window:
            raise OracleLoadError(f"edge {{{','.join(map(str, e))}}} beyond window {window}")
        c = entry["c"]
        if not isinstance(c, int) or not 1 <= c <= r:
            raise OracleLoadError(f"edge {{{','.join(map(str, e))}}} has colour {c!r} outside [1, {r}]")
        if e in table and table[e] != c:
            raise OracleLoadError(f"edge {{{','.join(map(str, e))}}} coloured twice ({table[e]} and {c})")
        table[e] = c
    try:
        return ExplicitOracle(k, r, window, table)
    except ParameterError as exc:
        raise OracleLoadError(str(exc)) from None


def load_explicit_oracle(path) -> ExplicitOracle:
    """Load an explicit colouring file; totality over its window is enforced."""
    obj = _read_json(path)
    if obj.get("kind") != "explicit":
        raise OracleLoadError(f"expected kind 'explicit', got {obj.get('kind')!r}")
    return _load_explicit(obj)


def _read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OracleLoadError(f"cannot read {path}: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OracleLoadError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise OracleLoadError(f"{path}: top-level JSON value must be an object")
    return obj


def load_colouring(source) -> ColouringOracle:
    """Build an oracle from a colouring descriptor (dict) or a JSON file path."""
    obj = source if isinstance(source, dict) else _read_json(source)
    kind = obj.get("kind")
    if kind == "explicit":
        return _load_explicit(obj)
    if kind == "random":
        return RandomOracle(
            r=int(_require(obj, "r", "random")),
            k=int(_require(obj, "k", "random")),
            seed=int(_require(obj, "seed", "random")),
        )
    if kind == "adversarial":
        from .adversary import AdversarialOracle, BlockLayout

        sizes = _require(obj, "blocks", "adversarial")
        if not isinstance(sizes, list) or not all(isinstance(b, int) and b >= 1 for b in sizes):
            raise OracleLoadError(f"adversarial 'blocks' must be a list of positive sizes, got {sizes!r}")
        try:
            layout = BlockLayout(
                s=int(_require(obj, "s", "adversarial")),
                k=int(_require(obj, "k", "adversarial")),
                t=int(_require(obj, "t", "adversarial")),
                sizes=tuple(sizes),
            )
        except ParameterError as exc:
            raise OracleLoadError(str(exc)) from None
        return AdversarialOracle(layout)
    raise OracleLoadError(f"unknown colouring kind {kind!r}")
