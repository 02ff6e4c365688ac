"""Induced multi-colourings, homogeneous-set search and clique-chains.

For an anchor vertex i and a j-set f, the induced multi-colouring labels f
with every colour appearing on a window edge containing {i} union f. A set is
homogeneous for colour c when all of its (t-1)-subsets carry c; nested
homogeneous sets, one per anchor, form a clique-chain whose per-anchor colour
sets (the intersection of the labels over the chain set) drive the path
builder. Chains are grown greedily, keeping for each anchor a set that hits
as many of the still-surviving colour blocks as possible; when no block
survives every anchor the build is inconclusive and the caller retries on a
larger window.

All searches are deterministic: candidates are scanned in ascending order and
ties break to the lexicographically least set, then the smallest colour.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .core import Params
from .errors import BudgetExceededError, Inconclusive, ParameterError
from .oracles import ColouringOracle

DEFAULT_NODE_BUDGET = 10**6


class InducedColouring:
    """Lazy view of the colours reachable from {anchor} union f inside a window.

    Membership queries scan the supersets of {anchor} union f in ascending
    order and memoise, per f, which colours have been confirmed and how far
    the scan has progressed; a colour is reported absent only after the scan
    is exhausted, so answers are exact.
    """

    def __init__(self, oracle: ColouringOracle, window: int, anchor: int, j: int):
        if not 1 <= j < oracle.k:
            raise ParameterError(f"need 1 <= j < k, got j={j}, k={oracle.k}")
        if window < oracle.k:
            raise ParameterError(f"window {window} too small for k={oracle.k}")
        if not 1 <= anchor <= window:
            raise ParameterError(f"anchor {anchor} outside window [1, {window}]")
        self.oracle = oracle
        self.window = window
        self.anchor = anchor
        self.j = j
        self._extra_size = oracle.k - j - 1
        self._candidates = tuple(v for v in range(1, window + 1) if v != anchor)
        # f -> [confirmed colours, filtered extras consumed, exhausted?]
        self._memo: dict[tuple[int, ...], list] = {}

    def _normalise(self, f) -> tuple[int, ...]:
        fs = tuple(sorted(f))
        if len(fs) != self.j or len(set(fs)) != self.j:
            raise ParameterError(f"need a set of {self.j} distinct vertices, got {f!r}")
        if self.anchor in fs:
            raise ParameterError(f"anchor {self.anchor} must not belong to {fs}")
        if fs and (fs[0] < 1 or fs[-1] > self.window):
            raise ParameterError(f"{fs} not within window [1, {self.window}]")
        return fs

    def _scan(self, fs: tuple[int, ...], want) -> set[int]:
        """Advance the superset scan until want(confirmed) or exhaustion.

        Extras are enumerated in ascending combination order, skipping tuples
        that meet fs; the consumed count makes resumed scans deterministic.
        """
        state = self._memo.get(fs)
        if state is None:
            state = self._memo[fs] = [set(), 0, False]
        seen = state[0]
        if state[2] or want(seen):
            return seen
        base = (self.anchor,) + fs
        fset = set(fs)
        colour = self.oracle._colour
        extras = (x for x in itertools.combinations(self._candidates, self._extra_size)
                  if fset.isdisjoint(x))
        for extra in itertools.islice(extras, state[1], None):
            seen.add(colour(tuple(sorted(base + extra))))
            state[1] += 1
            if want(seen):
                return seen
        state[2] = True
        return seen

    def _has_sorted(self, fs: tuple[int, ...], c: int) -> bool:
        """Membership fast path for already-sorted valid subsets."""
        state = self._memo.get(fs)
        if state is not None and (c in state[0] or state[2]):
            return c in state[0]
        return c in self._scan(fs, lambda seen: c in seen)

    def has(self, f, c: int) -> bool:
        """Is c among the colours of the window edges containing {anchor} union f?"""
        return self._has_sorted(self._normalise(f), c)

    def full(self, f) -> frozenset[int]:
        """The complete label of f (scan stops early once all r colours appear)."""
        fs = self._normalise(f)
        return frozenset(self._scan(fs, lambda seen: len(seen) >= self.oracle.r))


def induced_multicolouring(oracle: ColouringOracle, window: int, anchor: int, j: int, f) -> frozenset[int]:
    """Colours of all window edges containing {anchor} union f, |f| = j."""
    return InducedColouring(oracle, window, anchor, j).full(f)


def _lex_least_homogeneous(pool: list[int], q: int, j: int, member, node_budget: int):
    """First q-subset of pool, in lexicographic order, all of whose j-subsets
    satisfy member. Returns None when provably absent; raises on budget."""
    if q > len(pool):
        return None
    if q <= 0:
        return ()
    chosen: list[int] = []
    nodes = 0

    def dfs(start: int):
        nonlocal nodes
        if len(chosen) == q:
            return True
        for idx in range(start, len(pool)):
            if len(chosen) + (len(pool) - idx) < q:
                return False
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceededError(
                    f"homogeneous-set search exceeded {node_budget} nodes",
                    pool_size=len(pool), q=q,
                )
            v = pool[idx]
            if all(member(sub + (v,)) for sub in itertools.combinations(chosen, j - 1)):
                chosen.append(v)
                if dfs(idx + 1):
                    return True
                chosen.pop()
        return False

    return tuple(chosen) if dfs(0) else None


def find_homogeneous_set(labels, pool, c: int, q: int, *,
                         subset_size: int | None = None,
                         node_budget: int = DEFAULT_NODE_BUDGET) -> frozenset[int] | None:
    """Lexicographically least q-subset S of pool with c in labels[f] for every
    (t-1)-subset f of S, or None if the complete search finds none.

    labels must be keyed by frozensets and total on the subsets of pool; the
    subset size is inferred from the keys unless given. A search that hits
    node_budget raises BudgetExceededError rather than answering absent.
    """
    pool_sorted = sorted(pool)
    if q > len(pool_sorted):
        return None
    if subset_size is None:
        if not labels:
            raise ParameterError("cannot infer the subset size from empty labels")
        subset_size = len(next(iter(labels)))

    def member(f: tuple[int, ...]) -> bool:
        try:
            return c in labels[frozenset(f)]
        except KeyError:
            raise ParameterError(f"labels not total: missing {set(f)}") from None

    found = _lex_least_homogeneous(pool_sorted, q, subset_size, member, node_budget)
    return None if found is None else frozenset(found)


@dataclass(frozen=True)
class ColourBlocks:
    """Partition of [r] into k-t+1 colour blocks of size s."""

    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(frozenset(b) for b in self.blocks))
        if not self.blocks:
            raise ParameterError("at least one colour block required")
        sizes = {len(b) for b in self.blocks}
        if len(sizes) != 1:
            raise ParameterError(f"blocks must share one size, got sizes {sorted(sizes)}")
        union = set().union(*self.blocks)
        if len(union) != sum(len(b) for b in self.blocks):
            raise ParameterError("colour blocks must be disjoint")
        if union != set(range(1, len(union) + 1)):
            raise ParameterError(f"blocks must partition [1, r], got {sorted(union)}")

    @property
    def s(self) -> int:
        return len(self.blocks[0])

    @property
    def r(self) -> int:
        return self.s * len(self.blocks)

    @classmethod
    def default(cls, s: int, count: int) -> "ColourBlocks":
        """Consecutive runs: block i holds colours (i-1)*s+1 .. i*s."""
        if s < 1 or count < 1:
            raise ParameterError(f"need s >= 1 and count >= 1, got s={s}, count={count}")
        return cls(tuple(
            frozenset(range((i - 1) * s + 1, i * s + 1)) for i in range(1, count + 1)
        ))

    def indices(self) -> frozenset[int]:
        return frozenset(range(1, len(self.blocks) + 1))

    def hit_by(self, colours) -> frozenset[int]:
        """1-based indices of the blocks meeting the given colour set."""
        return frozenset(i for i, b in enumerate(self.blocks, 1) if b & colours)


def select_max_mono_clique(oracle: ColouringOracle, window: int, params: Params,
                           anchor: int, pool, blocks: ColourBlocks, d_indices, q: int, *,
                           node_budget: int = DEFAULT_NODE_BUDGET,
                           induced: InducedColouring | None = None):
    """Choose a q-subset of pool that is homogeneous for some colour under the
    anchor's induced colouring, maximising how many of the still-surviving
    blocks its exact colour set hits.

    Candidates are the lexicographically least homogeneous set per colour.
    Returns (vertex set, exact colour set, hit block indices intersected with
    d_indices). Raises Inconclusive when no colour admits a q-set within the
    node budget.
    """
    pool_sorted = sorted(pool)
    if anchor in pool_sorted:
        raise ParameterError(f"anchor {anchor} must not belong to its own pool")
    if len(pool_sorted) < q:
        raise ParameterError(f"pool of {len(pool_sorted)} cannot host a {q}-set")
    ind = induced if induced is not None else InducedColouring(oracle, window, anchor, params.t - 1)
    d_set = frozenset(d_indices)

    candidates = []
    budget_hit = False
    for c in range(1, oracle.r + 1):
        try:
            # subsets built by the search are ascending, so the fast path applies
            found = _lex_least_homogeneous(
                pool_sorted, q, params.t - 1,
                lambda f, c=c: ind._has_sorted(f, c), node_budget,
            )
        except BudgetExceededError:
            budget_hit = True
            continue
        if found is not None:
            candidates.append((c, found))

    if not candidates:
        raise Inconclusive(
            "no homogeneous set for any colour"
            + (" within the node budget" if budget_hit else ""),
            anchor=anchor, q=q, pool_size=len(pool_sorted), budget_exhausted=budget_hit,
        )

    scored = []
    for c, vertices in candidates:
        subsets = list(itertools.combinations(vertices, params.t - 1))
        psi = frozenset(
            colour for colour in range(1, oracle.r + 1)
            if all(ind._has_sorted(f, colour) for f in subsets)
        )
        hit = blocks.hit_by(psi)
        scored.append((-len(hit & d_set), vertices, c, psi, hit))
    scored.sort()
    _, vertices, _, psi, hit = scored[0]
    return frozenset(vertices), psi, hit & d_set


@dataclass(frozen=True)
class CliqueChain:
    """Nested homogeneous vertex sets, one per anchor, with their colour data.

    sets[i] is homogeneous under anchor[i]'s induced colouring and contained
    in sets[i-1]; witness_colours[i] is the intersection of the labels of all
    (t-1)-subsets of sets[i]; selected_block is a 1-based block index hit by
    every anchor's colour set.
    """

    anchors: tuple[int, ...]
    sets: tuple[tuple[int, ...], ...]
    witness_colours: tuple[frozenset[int], ...]
    selected_block: int
    blocks: ColourBlocks
    d_history: tuple[frozenset[int], ...]

    @cached_property
    def _by_anchor(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.anchors)}

    def set_of(self, anchor: int) -> tuple[int, ...]:
        return self.sets[self._by_anchor[anchor]]

    def chi_of(self, anchor: int) -> frozenset[int]:
        return self.witness_colours[self._by_anchor[anchor]]

    def to_json_records(self) -> list[dict]:
        return [
            {
                "anchor": a,
                "set_size": len(self.sets[i]),
                "chi": sorted(self.witness_colours[i]),
                "D": sorted(self.d_history[i]),
            }
            for i, a in enumerate(self.anchors)
        ]


def build_clique_chain(oracle: ColouringOracle, window: int, params: Params,
                       blocks: ColourBlocks, q_schedule, *,
                       node_budget: int = DEFAULT_NODE_BUDGET) -> CliqueChain:
    """Process anchors 1, 2, ... through the q_schedule, nesting each anchor's
    homogeneous set inside the previous one and tracking which colour blocks
    every anchor so far can still hit. Succeeds when a block survives the
    whole schedule; raises Inconclusive (with the survival history) otherwise.
    """
    schedule = list(q_schedule)
    if not schedule:
        raise ParameterError("q_schedule must not be empty")
    if any(schedule[i] < schedule[i + 1] for i in range(len(schedule) - 1)):
        raise ParameterError("q_schedule must be non-increasing")
    if schedule[-1] < params.t - 1:
        raise ParameterError(f"final set size {schedule[-1]} below t-1 = {params.t - 1}")

    d_current = blocks.indices()
    previous: list[int] = list(range(1, window + 1))
    sets, chis, history = [], [], []

    for a, q in enumerate(schedule, start=1):
        pool = [v for v in previous if v != a]
        if len(pool) < q:
            raise Inconclusive(
                f"pool exhausted at anchor {a}: {len(pool)} vertices for a {q}-set",
                anchor=a, d_history=tuple(history),
            )
        ind = InducedColouring(oracle, window, a, params.t - 1)
        try:
            vertices, psi, achieved = select_max_mono_clique(
                oracle, window, params, a, pool, blocks, d_current, q,
                node_budget=node_budget, induced=ind,
            )
        except Inconclusive as exc:
            raise Inconclusive(
                f"anchor {a}: {exc}", anchor=a, d_history=tuple(history), cause=exc.diagnostics,
            ) from exc
        if not achieved:
            raise Inconclusive(
                f"no colour block survives anchor {a}",
                anchor=a, d_history=tuple(history) + (frozenset(),),
            )
        d_current = achieved
        sets.append(tuple(sorted(vertices)))
        chis.append(psi)
        history.append(d_current)
        previous = list(sets[-1])

    return CliqueChain(
        anchors=tuple(range(1, len(schedule) + 1)),
        sets=tuple(sets),
        witness_colours=tuple(chis),
        selected_block=min(d_current),
        blocks=blocks,
        d_history=tuple(history),
    )


def clique_colouring(chain: CliqueChain, oracle: ColouringOracle, window: int) -> dict[int, frozenset[int]]:
    """Recompute each anchor's colour set from scratch: the intersection of
    the induced labels over all (t-1)-subsets of the anchor's chain set.
    Independent of the construction bookkeeping; used as a cross-check."""
    # k - t + 1 blocks imply t = k - len(blocks) + 1, so the subsets have size t - 1
    j = oracle.k - len(chain.blocks.blocks)
    out: dict[int, frozenset[int]] = {}
    for anchor, vertices in zip(chain.anchors, chain.sets):
        ind = InducedColouring(oracle, window, anchor, j)
        subsets = list(itertools.combinations(sorted(vertices), j))
        out[anchor] = frozenset(
            c for c in range(1, oracle.r + 1)
            if all(ind._has_sorted(f, c) for f in subsets)
        )
    return out
