"""Simultaneous construction of s monochromatic t-tight Berge-paths whose
cores cover a prefix of the vertices.

The driver first builds a clique-chain over anchors 1..n and splits those
anchors into colour classes through the chain's selected colour block. Paths
are then grown round-robin: each step takes the smallest unused vertex of the
path's class, pulls the intermediate core vertices from that anchor's chain
set (so that every new core window is guaranteed a witness edge of the path's
colour inside the window), and appends t or t-1 vertices depending on whether
the two candidate witness edges for the last windows coincide. Every choice
is smallest-first, so runs are reproducible; on a dead end the whole attempt
restarts from scratch on a larger window.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from .core import BergePath, Edge, Params, VerifyReport, verify_family
from .errors import BudgetExceededError, Inconclusive, ParameterError
from .oracles import ColouringOracle, load_colouring
from .ramsey import DEFAULT_NODE_BUDGET, CliqueChain, ColourBlocks, build_clique_chain

log = logging.getLogger("berge.partition")


def assign_colour_classes(chain: CliqueChain, blocks: ColourBlocks):
    """Split the chain's anchors into classes via the selected colour block.

    Each anchor joins the class of the smallest colour in chi(anchor)
    intersected with the selected block; the colour map sends class index to
    that actual colour (realising "the used colours are 1..s" explicitly).
    Returns (classes, colour_map), both indexed 0..s-1; classes may be empty.
    """
    block = blocks.blocks[chain.selected_block - 1]
    colours = sorted(block)
    class_of = {c: i for i, c in enumerate(colours)}
    classes: list[list[int]] = [[] for _ in colours]
    for anchor in chain.anchors:
        available = chain.chi_of(anchor) & block
        if not available:
            raise ParameterError(
                f"invalid chain: anchor {anchor} misses the selected block {sorted(block)}"
            )
        classes[class_of[min(available)]].append(anchor)
    return [sorted(c) for c in classes], colours


class PathState:
    """One path under construction: its colour, class and used-class pointer."""

    def __init__(self, colour: int, klass: list[int]):
        self.colour = colour
        self.klass = klass
        self.core: list[int] = []
        self.edges: list[Edge] = []
        self.done = False
        self._next = 0

    def next_class_vertex(self, used: set[int]) -> int | None:
        while self._next < len(self.klass) and self.klass[self._next] in used:
            self._next += 1
        if self._next == len(self.klass):
            return None
        return self.klass[self._next]


class BuilderState:
    """Mutable bookkeeping shared by all paths: used vertices X, used edges Y
    and the vertices covered by Y, plus the chain and window in force."""

    def __init__(self, params: Params, chain: CliqueChain, classes, colour_map, window: int):
        self.params = params
        self.chain = chain
        self.window = window
        self.used_vertices: set[int] = set()
        self.used_edges: set[Edge] = set()
        self.edge_vertices: set[int] = set()
        self.steps = 0
        self.paths = [
            PathState(colour_map[i], klass)
            for i, klass in enumerate(classes)
            if klass
        ]
        for p in self.paths:
            p.core.append(p.klass[0])
            self.used_vertices.add(p.klass[0])

    def covered(self) -> set[int]:
        return self.used_vertices

    def record_edge(self, path: PathState, e: Edge):
        path.edges.append(e)
        self.used_edges.add(e)
        self.edge_vertices.update(e)

    def finished_paths(self) -> tuple[BergePath, ...]:
        return tuple(
            BergePath(p.colour, tuple(p.core), tuple(p.edges), self.params.t)
            for p in self.paths
        )


def _smallest_fresh(chain_set, state: BuilderState) -> int | None:
    for v in chain_set:
        if v not in state.used_vertices and v not in state.edge_vertices:
            return v
    return None


def _smallest_witness(state: BuilderState, oracle: ColouringOracle, colour: int, base) -> Edge | None:
    """Lexicographically least window edge of the given colour containing base
    and not yet used. Ascending extras yield ascending edges."""
    base_t = tuple(sorted(base))
    rest = [v for v in range(1, state.window + 1) if v not in base]
    for extra in itertools.combinations(rest, state.params.k - len(base_t)):
        e = tuple(sorted(base_t + extra))
        if e not in state.used_edges and oracle.colour(e) == colour:
            return e
    return None


def extend_path(state: BuilderState, i: int, oracle: ColouringOracle) -> bool:
    """One extension step for path i; returns False when the path's class is
    exhausted (the path is complete). Appends t or t-1 core vertices:

      1. a <- smallest class vertex outside X; a enters X immediately.
      2. t-2 intermediates from the anchor's chain set, each fresh (outside X
         and outside every used edge); every completed core window gets the
         smallest unused witness edge of the path's colour.
      3. A probe b from the chain set; the two candidate windows (..., b) and
         (..., b, a) get their smallest witnesses e1, e2. If e1 != e2, both b
         and a join the core with both edges; otherwise only a joins and the
         single shared edge witnesses the one new window (b is not consumed).

    Raises Inconclusive when the chain set or the witness pool is exhausted;
    the state is then stale and the caller must restart on a larger window.
    """
    p = state.paths[i]
    if p.done:
        return False
    a = p.next_class_vertex(state.used_vertices)
    if a is None:
        p.done = True
        return False

    t, colour = state.params.t, p.colour
    chain_set = state.chain.set_of(a)
    state.used_vertices.add(a)
    core = p.core

    for _ in range(t - 2):
        b_mid = _smallest_fresh(chain_set, state)
        if b_mid is None:
            raise Inconclusive(f"chain set of anchor {a} exhausted", anchor=a, path=i)
        core.append(b_mid)
        state.used_vertices.add(b_mid)
        if len(core) >= t:
            e = _smallest_witness(state, oracle, colour, core[-t:])
            if e is None:
                raise Inconclusive(f"no unused colour-{colour} edge over {core[-t:]}", path=i)
            state.record_edge(p, e)

    b = _smallest_fresh(chain_set, state)
    if b is None:
        raise Inconclusive(f"chain set of anchor {a} exhausted", anchor=a, path=i)
    f1 = tuple(core[-(t - 1):]) + (b,)
    f2 = (tuple(core[-(t - 2):]) if t > 2 else ()) + (b, a)
    e1 = _smallest_witness(state, oracle, colour, f1)
    e2 = _smallest_witness(state, oracle, colour, f2)
    if e1 is None or e2 is None:
        raise Inconclusive(f"no unused colour-{colour} witness for {f1 if e1 is None else f2}", path=i)

    if e1 != e2:
        core.append(b)
        state.used_vertices.add(b)
        core.append(a)
        state.record_edge(p, e1)
        state.record_edge(p, e2)
    else:
        core.append(a)
        state.record_edge(p, e1)

    state.steps += 1
    assert len(p.edges) == max(0, len(core) - t + 1), "edge/window misalignment"
    return True


@dataclass(frozen=True)
class BuildConfig:
    """Knobs for the covering driver; defaults follow the CLI."""

    initial_window: int | None = None      # default: 8 * n * k
    max_window: int = 2000
    node_budget: int = DEFAULT_NODE_BUDGET
    growth: int = 2


@dataclass(frozen=True)
class Certificate:
    """A verified covering: parameters, colouring descriptor, the paths and
    the largest prefix their cores cover, plus run statistics."""

    params: Params
    colouring: dict
    covered_prefix: int
    paths: tuple[BergePath, ...]
    stats: dict

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "colouring": self.colouring,
            "covered_prefix": self.covered_prefix,
            "paths": [p.to_json() for p in self.paths],
            "stats": dict(self.stats),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        try:
            params = Params.from_json(obj["params"])
            return cls(
                params=params,
                colouring=dict(obj["colouring"]),
                covered_prefix=int(obj["covered_prefix"]),
                paths=tuple(BergePath.from_json(p, params.t) for p in obj["paths"]),
                stats=dict(obj.get("stats", {})),
            )
        except KeyError as missing:
            raise ParameterError(f"certificate missing key {missing}") from None

    def verify(self, oracle: ColouringOracle | None = None) -> VerifyReport:
        if oracle is None:
            oracle = load_colouring(self.colouring)
        return verify_family(self.paths, self.covered_prefix, self.params, oracle)


def default_q_schedule(n: int, t: int, scale: int = 1) -> list[int]:
    """Chain set sizes for anchors 1..n: (t+2) per estimated remaining step
    plus t, so each anchor can feed every later extension drawing from it."""
    return [scale * ((t + 2) * (n - a + 1) + t) for a in range(1, n + 1)]


def _covered_prefix(paths) -> int:
    covered = set().union(*(p.core for p in paths)) if paths else set()
    m = 0
    while m + 1 in covered:
        m += 1
    return m


def cover_prefix(oracle: ColouringOracle, params: Params, n: int,
                 config: BuildConfig | None = None) -> Certificate:
    """Cover [1, n] with at most s monochromatic t-tight Berge-paths of
    pairwise distinct colours and disjoint cores.

    Retries with doubled window (and proportionally larger chain sets) on any
    inconclusive attempt, up to config.max_window; the returned certificate is
    re-verified before being handed out, so a successful return is always a
    valid covering.
    """
    cfg = config or BuildConfig()
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if oracle.k != params.k:
        raise ParameterError(f"oracle has k={oracle.k}, params expect k={params.k}")
    if oracle.r != params.r:
        raise ParameterError(f"oracle has r={oracle.r}, params expect r={params.r}")

    window = cfg.initial_window if cfg.initial_window is not None else 8 * n * params.k
    window = min(window, cfg.max_window)
    if oracle.window_hint is not None:
        window = min(window, oracle.window_hint)
    if window <= n:
        raise ParameterError(f"window {window} cannot cover prefix {n}")

    scale = 1
    restarts = 0
    failures: list[str] = []
    while True:
        try:
            blocks = ColourBlocks.default(params.s, params.k - params.t + 1)
            schedule = default_q_schedule(n, params.t, scale)
            chain = build_clique_chain(
                oracle, window, params, blocks, schedule, node_budget=cfg.node_budget
            )
            classes, colour_map = assign_colour_classes(chain, blocks)
            state = BuilderState(params, chain, classes, colour_map, window)

            target = set(range(1, n + 1))
            while not target <= state.used_vertices:
                progressed = False
                for i in range(len(state.paths)):
                    if extend_path(state, i, oracle):
                        progressed = True
                    if target <= state.used_vertices:
                        break
                if not progressed:
                    break
            paths = state.finished_paths()
            prefix = _covered_prefix(paths)
            if prefix < n:
                raise Inconclusive(f"classes exhausted at prefix {prefix} < {n}")

            cert = Certificate(
                params=params,
                colouring=oracle.descriptor(),
                covered_prefix=prefix,
                paths=paths,
                stats={"steps": state.steps, "window": window, "restarts": restarts},
            )
            report = cert.verify(oracle)
            if not report.ok:
                raise AssertionError(f"internal: built family failed verification: {report}")
            return cert
        except Inconclusive as exc:
            failures.append(str(exc))
            restarts += 1
            ceiling = cfg.max_window
            if oracle.window_hint is not None:
                ceiling = min(ceiling, oracle.window_hint)
            new_window = min(window * cfg.growth, ceiling)
            new_scale = scale * cfg.growth
            if default_q_schedule(n, params.t, new_scale)[0] + n + 1 > new_window:
                new_scale = scale
            if (new_window, new_scale) == (window, scale):
                raise BudgetExceededError(
                    f"window ceiling {ceiling} reached after {restarts} restarts",
                    restarts=restarts, window=window, failures=failures,
                ) from exc
            log.info("attempt failed (%s); growing window %d -> %d", exc, window, new_window)
            window, scale = new_window, new_scale
