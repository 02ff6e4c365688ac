"""The blocking colouring that defeats s monochromatic t-tight Berge-paths.

Vertices are split into consecutive blocks B_I, one per s-subset I of [r] in
lexicographic order, with fast-growing sizes; an edge is coloured with the
smallest colour not belonging to the blocks of its k-t+1 smallest vertices.
Under this rule no family of s monochromatic t-tight Berge-paths can cover
all of an unbounded vertex set. This module provides the layout, the colour
rule, structural diagnostics (the containment inequality and the two counting
bounds behind the impossibility argument), and a complete brute-force search
that certifies non-coverability on tiny windows.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb

import numpy as np

from .core import BergePath, Edge, Params, VerifyReport, Violation, as_edge, consecutive_tuples, verify_family
from .errors import OutOfWindowError, ParameterError, SizeGuardError
from .oracles import ColouringOracle


def lex_subsets(r: int, s: int) -> list[tuple[int, ...]]:
    """All s-subsets of [r], lexicographically ordered."""
    if s < 1 or s > r:
        raise ParameterError(f"need 1 <= s <= r, got s={s}, r={r}")
    return list(itertools.combinations(range(1, r + 1), s))


@dataclass(frozen=True)
class BlockLayout:
    """Partition of [1, window] into consecutive blocks indexed by lex-ordered
    s-subsets of [r], r = s*(k-t+1)+1.

    sizes lists one block size per subset, in lex order; the last block is the
    extendable remainder (with_window grows it, never the others), so block
    membership of a vertex never changes as the window grows. Layouts built by
    default() satisfy the growth bound size(I) >= s*t*sum_{J<I}(size(J)+1) for
    every non-final block; arbitrary sizes are accepted so that diagnostics
    can be exercised on non-compliant layouts, see growth_report().
    """

    s: int
    k: int
    t: int
    sizes: tuple[int, ...]

    def __post_init__(self):
        if self.s < 1 or self.t < 2 or self.k < self.t:
            raise ParameterError(f"need s >= 1 and k >= t >= 2, got s={self.s}, k={self.k}, t={self.t}")
        expected = comb(self.r, self.s)
        if len(self.sizes) != expected:
            raise ParameterError(
                f"need one size per s-subset of [{self.r}]: expected {expected}, got {len(self.sizes)}"
            )
        if any(not isinstance(b, int) or b < 1 for b in self.sizes):
            raise ParameterError(f"block sizes must be positive integers: {self.sizes}")

    @property
    def r(self) -> int:
        return self.s * (self.k - self.t + 1) + 1

    @property
    def window(self) -> int:
        return sum(self.sizes)

    @cached_property
    def order(self) -> tuple[tuple[int, ...], ...]:
        return tuple(lex_subsets(self.r, self.s))

    @cached_property
    def boundaries(self) -> tuple[int, ...]:
        acc, out = 0, []
        for b in self.sizes:
            acc += b
            out.append(acc)
        return tuple(out)

    @classmethod
    def minimal_sizes(cls, s: int, k: int, t: int) -> list[int]:
        """Smallest sizes meeting the growth bound with equality, final block 1."""
        r = s * (k - t + 1) + 1
        count = comb(r, s)
        sizes: list[int] = []
        for _ in range(count - 1):
            sizes.append(s * t * sum(b + 1 for b in sizes) if sizes else s * t)
        sizes.append(1)
        return sizes

    @classmethod
    def default(cls, s: int, k: int, t: int, window: int | None = None) -> "BlockLayout":
        """The canonical layout: growth bound met with equality for every
        non-final block, the final block absorbing the rest of the window.

        With window=None the layout is built on its minimal window; the final
        block then extends on demand.
        """
        sizes = cls.minimal_sizes(s, k, t)
        minimum = sum(sizes[:-1]) + 1
        if window is None:
            window = minimum
        if window < minimum:
            raise ParameterError(
                f"window {window} too small for the default layout; need at least {minimum}"
            )
        sizes[-1] = window - sum(sizes[:-1])
        return cls(s=s, k=k, t=t, sizes=tuple(sizes))

    def with_window(self, window: int) -> "BlockLayout":
        """Same layout with the final block grown so that sum(sizes) == window."""
        fixed = sum(self.sizes[:-1])
        if window < fixed + 1:
            raise ParameterError(f"window {window} cannot host the {fixed} fixed block vertices")
        return BlockLayout(self.s, self.k, self.t, self.sizes[:-1] + (window - fixed,))

    def block_index(self, x: int) -> int:
        """0-based index of the block containing vertex x."""
        if not isinstance(x, int) or x < 1:
            raise ParameterError(f"vertex must be a positive integer, got {x!r}")
        if x > self.window:
            raise OutOfWindowError(f"vertex {x} beyond layout window [1, {self.window}]")
        return bisect_left(self.boundaries, x)

    def block_of(self, x: int) -> tuple[int, ...]:
        """The s-subset I(x) indexing the block that contains x."""
        return self.order[self.block_index(x)]

    def members(self, index: int) -> range:
        """Vertices of the block at the given 0-based index."""
        lo = 0 if index == 0 else self.boundaries[index - 1]
        return range(lo + 1, self.boundaries[index] + 1)

    def growth_report(self) -> VerifyReport:
        """Check the growth bound on every non-final block."""
        v = []
        for i in range(len(self.sizes) - 1):
            bound = self.s * self.t * sum(b + 1 for b in self.sizes[:i])
            if self.sizes[i] < bound:
                v.append(Violation(
                    "block-growth",
                    f"block {self.order[i]} has size {self.sizes[i]} < required {bound}",
                    (i,),
                ))
        return VerifyReport(tuple(v))

    def descriptor(self) -> dict:
        return {"kind": "adversarial", "s": self.s, "k": self.k, "t": self.t,
                "blocks": list(self.sizes)}


def adversary_colour(layout: BlockLayout, e) -> int:
    """Smallest colour allowed on e: blocks of the k-t+1 smallest vertices are
    forbidden. Blocks are consecutive intervals in lex order, so ascending
    vertex id realises the required block-sorted order with id tie-breaks."""
    edge = as_edge(e)
    if len(edge) != layout.k:
        raise ParameterError(f"edge {edge} has {len(edge)} vertices, expected k={layout.k}")
    forbidden: set[int] = set()
    for x in edge[: layout.k - layout.t + 1]:
        forbidden.update(layout.block_of(x))
    for c in range(1, layout.r + 1):
        if c not in forbidden:
            return c
    raise AssertionError("unreachable: at most s*(k-t+1) = r-1 colours are forbidden")


class AdversarialOracle(ColouringOracle):
    """Oracle view of a block layout; the final block grows on demand."""

    def __init__(self, layout: BlockLayout):
        self.k = layout.k
        self.r = layout.r
        self.window_hint = None
        self._layout = layout
        self._descriptor = layout.descriptor()

    @property
    def layout(self) -> BlockLayout:
        return self._layout

    def _colour(self, edge: Edge) -> int:
        if edge[-1] > self._layout.window:
            self._layout = self._layout.with_window(edge[-1])
        return adversary_colour(self._layout, edge)

    def descriptor(self) -> dict:
        # the as-declared layout: growth of the final block is not observable
        return dict(self._descriptor)


@lru_cache(maxsize=6)
def _edge_tables(layout: BlockLayout, window: int):
    """Vectorised per-edge data for all k-edges within [window]: the edges,
    their per-vertex block indices, and their colours under the layout rule."""
    k, r = layout.k, layout.r
    n_edges = comb(window, k)
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(1, window + 1), k)),
        dtype=np.int32,
        count=n_edges * k,
    )
    edges = flat.reshape(n_edges, k)

    bidx = np.fromiter((layout.block_index(x) for x in range(1, window + 1)), dtype=np.int32, count=window)
    submask = np.fromiter(
        (sum(1 << (c - 1) for c in subset) for subset in layout.order),
        dtype=np.int64,
        count=len(layout.order),
    )
    edge_bidx = bidx[edges - 1]
    forbid = np.bitwise_or.reduce(submask[edge_bidx[:, : k - layout.t + 1]], axis=1)

    full = (1 << r) - 1
    smallest_allowed = np.zeros(full + 1, dtype=np.int32)
    for mask in range(full + 1):
        smallest_allowed[mask] = next((c for c in range(1, r + 1) if not mask >> (c - 1) & 1), 0)
    colours = smallest_allowed[forbid]
    return edges, edge_bidx, colours


def check_eq1(layout: BlockLayout, C, window: int, colour_fn=None) -> VerifyReport:
    """Containment check: every edge within [window] that meets B_C and is
    coloured in C must have at least k-t+1 vertices in blocks preceding C.

    Colours come from the layout's own rule, which satisfies the inequality by
    construction; pass colour_fn to audit an unrelated colour source against
    this layout.
    """
    c_subset = tuple(sorted(C))
    try:
        c_idx = layout.order.index(c_subset)
    except ValueError:
        raise ParameterError(f"{c_subset} is not an s-subset of [{layout.r}]") from None
    if window > layout.window:
        raise OutOfWindowError(f"window {window} beyond layout window {layout.window}")

    need = layout.k - layout.t + 1
    edges, edge_bidx, colours = _edge_tables(layout, window)
    if colour_fn is not None:
        colours = np.fromiter((colour_fn(tuple(e)) for e in edges), dtype=np.int32, count=len(edges))

    touches = (edge_bidx == c_idx).any(axis=1)
    in_c = np.isin(colours, np.array(c_subset, dtype=np.int32))
    preceding = (edge_bidx < c_idx).sum(axis=1)
    bad = touches & in_c & (preceding < need)

    violations = []
    for i in np.flatnonzero(bad)[:10]:
        violations.append(Violation(
            "eq1",
            f"edge {tuple(int(x) for x in edges[i])} coloured {int(colours[i])} meets "
            f"B_{c_subset} with only {int(preceding[i])} vertices in earlier blocks "
            f"(need {need})",
            (int(i),),
        ))
    n_bad = int(bad.sum())
    if n_bad > len(violations):
        violations.append(Violation("eq1", f"{n_bad - len(violations)} further violations omitted"))
    return VerifyReport(tuple(violations))


@dataclass(frozen=True)
class PathCounts:
    """Per-path counting diagnostics against one colour subset C."""

    path_index: int
    colour: int
    windows_meeting_block: int   # |F_i|: core windows meeting B_C
    eq2_bound: int               # t * |union of blocks preceding C|
    core_in_block: int           # |X_i intersect B_C|
    eq3_bound: int               # |F_i| + t - 1

    @property
    def eq2_ok(self) -> bool:
        return self.windows_meeting_block <= self.eq2_bound

    @property
    def eq3_ok(self) -> bool:
        return self.core_in_block <= self.eq3_bound

    def to_json(self) -> dict:
        return {
            "path": self.path_index,
            "colour": self.colour,
            "F": self.windows_meeting_block,
            "eq2_bound": self.eq2_bound,
            "eq2_ok": self.eq2_ok,
            "core_in_block": self.core_in_block,
            "eq3_bound": self.eq3_bound,
            "eq3_ok": self.eq3_ok,
        }


def counting_diagnostics(layout: BlockLayout, paths, C) -> list[PathCounts]:
    """Evaluate both counting bounds for paths monochromatic in colours from C.

    For each path: the number of core windows meeting B_C is at most t times
    the total size of the blocks preceding C, and the core meets B_C in at
    most that window count plus t-1 vertices.
    """
    c_subset = tuple(sorted(C))
    try:
        c_idx = layout.order.index(c_subset)
    except ValueError:
        raise ParameterError(f"{c_subset} is not an s-subset of [{layout.r}]") from None

    work = layout
    top = max((max(p.core, default=0) for p in paths), default=0)
    top = max(top, max((max(max(e) for e in p.edges) for p in paths if p.edges), default=0))
    if top > work.window:
        work = work.with_window(top)

    for i, p in enumerate(paths):
        if p.colour not in c_subset:
            raise ParameterError(f"path {i} has colour {p.colour} outside C={c_subset}")
        for e in p.edges:
            actual = adversary_colour(work, e)
            if actual != p.colour:
                raise ParameterError(
                    f"path {i} is not monochromatic under this layout: edge {e} has colour {actual}"
                )

    preceding_size = sum(layout.sizes[:c_idx])
    out = []
    for i, p in enumerate(paths):
        in_block = lambda x: work.block_index(x) == c_idx
        f_count = sum(1 for w in consecutive_tuples(p.core, layout.t) if any(in_block(x) for x in w))
        core_in = sum(1 for x in p.core if in_block(x))
        out.append(PathCounts(
            path_index=i,
            colour=p.colour,
            windows_meeting_block=f_count,
            eq2_bound=layout.t * preceding_size,
            core_in_block=core_in,
            eq3_bound=f_count + layout.t - 1,
        ))
    return out


@dataclass(frozen=True)
class CoverSearchResult:
    """Outcome of the exhaustive cover search."""

    coverable: bool
    witness: tuple[BergePath, ...] | None
    nodes_explored: int

    def to_json(self) -> dict:
        return {
            "coverable": self.coverable,
            "nodes_explored": self.nodes_explored,
            "witness": [p.to_json() for p in self.witness] if self.witness else None,
        }


def _canonical_path(colour: int, core: list[int], edges: list[Edge], t: int) -> BergePath:
    """Lexicographically least of the core and its reversal; reversing the core
    reverses the window order, so the witness edges reverse with it."""
    rev = core[::-1]
    if rev < core:
        return BergePath(colour, tuple(rev), tuple(edges[::-1]), t)
    return BergePath(colour, tuple(core), tuple(edges), t)


def brute_force_cover_check(
    oracle: ColouringOracle,
    window: int,
    params: Params,
    max_edges: int = 200_000,
) -> CoverSearchResult:
    """Complete search for at most s monochromatic t-tight Berge-paths with
    pairwise distinct colours and pairwise disjoint cores covering [window].

    Paths live entirely inside [window] (cores and witness edges). The search
    is exhaustive: a not-coverable answer is a certificate that no such family
    exists. The witness, when present, passes verify_family.
    """
    if window < 1:
        raise ParameterError(f"window must be >= 1, got {window}")
    k, t, s, r = params.k, params.t, params.s, params.r
    n_edges = comb(window, k)
    if n_edges > max_edges:
        raise SizeGuardError(
            f"C({window},{k}) = {n_edges} edges exceed the guard of {max_edges}"
        )

    by_window: dict[tuple[int, frozenset[int]], list[Edge]] = {}
    for e in itertools.combinations(range(1, window + 1), k):
        c = oracle.colour(e)
        for w in itertools.combinations(e, t):
            by_window.setdefault((c, frozenset(w)), []).append(e)

    nodes = 0
    all_vertices = frozenset(range(1, window + 1))

    def build_family(colours: tuple[int, ...]):
        nonlocal nodes

        def next_path(idx: int, remaining: frozenset[int]):
            nonlocal nodes
            nodes += 1
            if idx == len(colours):
                return [] if not remaining else None
            for start in sorted(remaining):
                found = grow(idx, [start], [], remaining - {start})
                if found is not None:
                    return found
            return None

        def grow(idx: int, core: list[int], used: list[Edge], remaining: frozenset[int]):
            nonlocal nodes
            nodes += 1
            rest = next_path(idx + 1, remaining)
            if rest is not None:
                return [_canonical_path(colours[idx], list(core), list(used), t)] + rest
            for u in sorted(remaining):
                core.append(u)
                if len(core) >= t:
                    key = (colours[idx], frozenset(core[-t:]))
                    for e in by_window.get(key, ()):
                        if e not in used:
                            used.append(e)
                            found = grow(idx, core, used, remaining - {u})
                            if found is not None:
                                return found
                            used.pop()
                else:
                    found = grow(idx, core, used, remaining - {u})
                    if found is not None:
                        return found
                core.pop()
            return None

        return next_path(0, all_vertices)

    for m in range(1, s + 1):
        for colours in itertools.combinations(range(1, r + 1), m):
            family = build_family(colours)
            if family is not None:
                witness = tuple(family)
                report = verify_family(witness, window, params, oracle)
                if not report.ok:
                    raise AssertionError(f"internal: witness failed verification: {report}")
                return CoverSearchResult(True, witness, nodes)
    return CoverSearchResult(False, None, nodes)
