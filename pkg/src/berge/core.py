"""Domain types for vertices, edges and tight Berge-paths, plus their verifiers.

Vertices are 1-based naturals. An edge is a strictly increasing k-tuple of
vertex ids (canonical form: two edges are equal iff the tuples are identical).
A t-tight Berge-path stores its core as an ordered vertex sequence together
with one witness edge per window of t consecutive core vertices; a path of
length 0 is a single vertex with no edges.

Verifiers never raise on semantic violations: they collect every violation
into a report so that broken certificates stay diagnosable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BergeError, ParameterError

Vertex = int
Edge = tuple[int, ...]


def as_edge(vertices: Iterable[int]) -> Edge:
    """Canonicalise an iterable of vertex ids into a sorted edge tuple."""
    vs = tuple(sorted(vertices))
    for v in vs:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ParameterError(f"edge vertices must be positive integers, got {v!r}")
    if len(set(vs)) != len(vs):
        raise ParameterError(f"edge vertices must be distinct: {vs}")
    return vs


@dataclass(frozen=True)
class Params:
    """The triple (s, k, t) plus the colour count r it induces.

    s: number of paths, k: edge uniformity, t: tightness (2 <= t <= k).
    Partition mode uses r = s*(k-t+1); the blocking construction uses one
    colour more. Use the classmethods to derive r for the intended mode.
    """

    s: int
    k: int
    t: int
    r: int

    def __post_init__(self):
        if self.s < 1:
            raise ParameterError(f"s must be >= 1, got {self.s}")
        if self.t < 2:
            raise ParameterError(f"t must be >= 2, got {self.t}")
        if self.k < self.t:
            raise ParameterError(f"need k >= t, got k={self.k}, t={self.t}")
        if self.r < 1:
            raise ParameterError(f"r must be >= 1, got {self.r}")

    @classmethod
    def partition_mode(cls, s: int, k: int, t: int) -> "Params":
        return cls(s, k, t, s * (k - t + 1))

    @classmethod
    def adversary_mode(cls, s: int, k: int, t: int) -> "Params":
        return cls(s, k, t, s * (k - t + 1) + 1)

    def to_json(self) -> dict:
        return {"s": self.s, "k": self.k, "t": self.t, "r": self.r}

    @classmethod
    def from_json(cls, obj: dict) -> "Params":
        try:
            return cls(int(obj["s"]), int(obj["k"]), int(obj["t"]), int(obj["r"]))
        except KeyError as missing:
            raise ParameterError(f"params object missing key {missing}") from None


@dataclass(frozen=True)
class BergePath:
    """A t-tight Berge-path: ordered core plus one witness edge per core window.

    The core order is semantic; edges[i] witnesses the window of t consecutive
    core vertices starting at core[i]. Construction only normalises shapes;
    semantic validity is checked by verify_berge_path.
    """

    colour: int
    core: tuple[int, ...]
    edges: tuple[Edge, ...]
    t: int

    def __post_init__(self):
        object.__setattr__(self, "core", tuple(self.core))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))

    @property
    def length(self) -> int:
        return len(self.edges)

    def to_json(self) -> dict:
        return {
            "colour": self.colour,
            "core": list(self.core),
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, obj: dict, t: int) -> "BergePath":
        try:
            return cls(
                colour=int(obj["colour"]),
                core=tuple(int(v) for v in obj["core"]),
                edges=tuple(tuple(int(v) for v in e) for e in obj["edges"]),
                t=t,
            )
        except KeyError as missing:
            raise ParameterError(f"path object missing key {missing}") from None


@dataclass(frozen=True)
class Violation:
    """One broken rule: its id, a human-readable detail and offending indices."""

    rule: str
    detail: str
    where: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"rule": self.rule, "detail": self.detail, "where": list(self.where)}


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of a verification: ok iff no violations were collected."""

    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"[{v.rule}] {v.detail}" for v in self.violations)


def consecutive_tuples(core: Sequence[int], t: int) -> list[frozenset[int]]:
    """The max(0, len(core)-t+1) windows of t consecutive core vertices, as sets."""
    if t < 2:
        raise ParameterError(f"t must be >= 2, got {t}")
    return [frozenset(core[i : i + t]) for i in range(len(core) - t + 1)]


def verify_berge_path(path: BergePath, params: Params, oracle=None) -> VerifyReport:
    """Check a single path against the t-tight Berge-path definition.

    Verifies: distinct core of positive ids, canonical distinct k-edges, the
    shape relation between core and edge counts, containment of every core
    window in its witness edge, colour range, and (when an oracle is given)
    that every witness edge carries the path's colour.
    """
    v: list[Violation] = []
    core, edges, t = path.core, path.edges, params.t

    if path.t != params.t:
        v.append(Violation("tightness", f"path declares t={path.t}, expected t={params.t}"))

    if not core:
        v.append(Violation("core-empty", "core must contain at least one vertex"))
    bad_ids = [i for i, x in enumerate(core) if not isinstance(x, int) or x < 1]
    if bad_ids:
        v.append(Violation("vertex-ids", "core vertices must be positive integers", tuple(bad_ids)))
    if len(set(core)) != len(core):
        dupes = tuple(i for i, x in enumerate(core) if x in core[:i])
        v.append(Violation("core-distinct", f"core repeats vertices {sorted({core[i] for i in dupes})}", dupes))

    if edges:
        if len(core) != len(edges) + t - 1:
            v.append(Violation(
                "length",
                f"core has {len(core)} vertices but {len(edges)} edges require {len(edges) + t - 1}",
            ))
    elif len(core) > 1:
        v.append(Violation("length", f"a path without edges must be a single vertex, core has {len(core)}"))

    for i, e in enumerate(edges):
        if len(e) != params.k:
            v.append(Violation("edge-arity", f"edge {e} has {len(e)} vertices, expected k={params.k}", (i,)))
        if any(not isinstance(x, int) or x < 1 for x in e) or list(e) != sorted(set(e)):
            v.append(Violation("edge-canonical", f"edge {e} is not a strictly increasing tuple of ids", (i,)))
    seen: dict[Edge, int] = {}
    for i, e in enumerate(edges):
        if e in seen:
            v.append(Violation("edges-distinct", f"edge {e} used at positions {seen[e]} and {i}", (seen[e], i)))
        else:
            seen[e] = i

    if not any(x.rule in ("core-empty", "vertex-ids") for x in v):
        windows = consecutive_tuples(core, t)
        for i in range(min(len(windows), len(edges))):
            if not windows[i] <= set(edges[i]):
                v.append(Violation(
                    "window-containment",
                    f"window {sorted(windows[i])} not contained in edge {edges[i]}",
                    (i,),
                ))

    if not 1 <= path.colour <= params.r:
        v.append(Violation("colour-range", f"colour {path.colour} outside [1, {params.r}]"))

    if oracle is not None:
        for i, e in enumerate(edges):
            try:
                c = oracle.colour(e)
            except BergeError as exc:
                v.append(Violation("colour-query", f"edge {e} not colourable: {exc}", (i,)))
                continue
            if c != path.colour:
                v.append(Violation(
                    "monochromatic",
                    f"edge {e} has colour {c}, path declares {path.colour}",
                    (i,),
                ))

    return VerifyReport(tuple(v))


def verify_family(paths: Sequence[BergePath], prefix_n: int, params: Params, oracle) -> VerifyReport:
    """Check a family of paths: each valid and monochromatic, pairwise distinct
    colours, pairwise disjoint cores, and cores jointly covering [prefix_n]."""
    if prefix_n < 1:
        raise ParameterError(f"prefix_n must be >= 1, got {prefix_n}")
    v: list[Violation] = []

    if len(paths) > params.s:
        v.append(Violation("family-size", f"{len(paths)} paths exceed s={params.s}"))

    for idx, path in enumerate(paths):
        sub = verify_berge_path(path, params, oracle)
        for viol in sub.violations:
            v.append(Violation(viol.rule, f"path {idx}: {viol.detail}", (idx,) + viol.where))

    colours = [p.colour for p in paths]
    if len(set(colours)) != len(colours):
        dupes = sorted({c for i, c in enumerate(colours) if c in colours[:i]})
        v.append(Violation("colours-distinct", f"colour(s) {dupes} used by more than one path"))

    used: dict[int, int] = {}
    shared: set[int] = set()
    for idx, path in enumerate(paths):
        for x in path.core:
            if x in used and used[x] != idx:
                shared.add(x)
            used[x] = idx
    if shared:
        v.append(Violation("cores-disjoint", f"vertices {sorted(shared)} appear in more than one core"))

    covered = set().union(*(p.core for p in paths)) if paths else set()
    missing = [x for x in range(1, prefix_n + 1) if x not in covered]
    if missing:
        head = missing[:10]
        v.append(Violation(
            "prefix-covered",
            f"{len(missing)} vertices of [1, {prefix_n}] uncovered, first: {head}",
        ))

    return VerifyReport(tuple(v))
