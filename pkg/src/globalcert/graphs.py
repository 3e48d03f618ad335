"""Graphs, identifier assignments, and the strictly local view of a node.

Vertices are indexed 0..n-1 internally; verification code never sees the
indices, only identifiers, so everything a node learns flows through
:class:`LocalView`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .bits import Bits
from .errors import InvalidEdge, InvalidId, InvalidParams, ParseError

MAX_ID_RANGE = 1 << 128


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InvalidParams("graph needs at least one vertex")
        for u, v in self.edges:
            if u == v:
                raise InvalidEdge(f"self-loop at {u}")
            if not (0 <= u < v < self.vertex_count):
                raise InvalidEdge(f"bad edge ({u}, {v})")

    @classmethod
    def of(cls, vertex_count: int, edges: Iterable[tuple[int, int]] = ()) -> "Graph":
        """Build a graph, normalizing each pair to (min, max) and deduplicating."""
        normalized = set()
        for u, v in edges:
            if u == v:
                raise InvalidEdge(f"self-loop at {u}")
            normalized.add((u, v) if u < v else (v, u))
        return cls(vertex_count, frozenset(normalized))

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adjacency()[v]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def _adjacency(self) -> tuple[frozenset[int], ...]:
        adj = getattr(self, "_adj", None)
        if adj is None:
            sets: list[set[int]] = [set() for _ in range(self.vertex_count)]
            for u, v in self.edges:
                sets[u].add(v)
                sets[v].add(u)
            adj = tuple(frozenset(s) for s in sets)
            object.__setattr__(self, "_adj", adj)
        return adj


# The homomorphism target is an ordinary graph; the alias marks intent.
TargetGraph = Graph


def clique(k: int) -> Graph:
    return Graph.of(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def cycle(k: int) -> Graph:
    if k < 3:
        raise InvalidParams("cycle needs at least 3 vertices")
    return Graph.of(k, [(i, (i + 1) % k) for i in range(k)])


BUILTIN_TARGETS = {
    "K2": clique(2),
    "K3": clique(3),
    "C5": cycle(5),
}


@dataclass(frozen=True)
class IdAssignment:
    """Injective identifiers, one per vertex, drawn from {0, ..., id_range-1}."""

    ids: tuple[int, ...]
    id_range: int

    def __post_init__(self):
        if not 1 <= self.id_range <= MAX_ID_RANGE:
            raise InvalidId(f"id range {self.id_range} outside [1, 2^128]")
        for i in self.ids:
            if not 0 <= i < self.id_range:
                raise InvalidId(f"identifier {i} outside range {self.id_range}")
        if len(set(self.ids)) != len(self.ids):
            raise InvalidId("duplicate identifier")

    def id_of(self, vertex: int) -> int:
        return self.ids[vertex]

    def id_set(self) -> frozenset[int]:
        return frozenset(self.ids)


@dataclass(frozen=True)
class LocalView:
    """Everything a node may use to verify: its own identifier, the set of
    its neighbors' identifiers, and the shared certificate. Nothing else."""

    own_id: int
    neighbor_ids: frozenset[int]
    certificate: Bits

    def __post_init__(self):
        if self.own_id in self.neighbor_ids:
            raise InvalidParams("own id listed among neighbors")


def local_view(graph: Graph, ids: IdAssignment, vertex: int, certificate: Bits) -> LocalView:
    """Assemble the view of `vertex` under `ids` with the given certificate."""
    if not 0 <= vertex < graph.vertex_count:
        raise InvalidParams(f"vertex {vertex} out of range")
    if len(ids.ids) != graph.vertex_count:
        raise InvalidParams("id assignment does not cover the graph")
    return LocalView(
        own_id=ids.id_of(vertex),
        neighbor_ids=frozenset(ids.id_of(u) for u in graph.neighbors(vertex)),
        certificate=certificate,
    )


@dataclass(frozen=True)
class IdRangePolicy:
    """Identifier range M as a fixed function of n, shared by prover and
    verifier as part of the scheme's framework.

    kind is one of:
      fixed    -- M(n) = param for every n
      poly     -- M(n) = n ** param (integer exponent >= 1)
      doubexp  -- M(n) = min(2 ** 2 ** n, 2 ** 128)
    """

    kind: str
    param: int = 0

    def __post_init__(self):
        if self.kind == "fixed":
            if not 1 <= self.param <= MAX_ID_RANGE:
                raise InvalidParams("fixed id range outside [1, 2^128]")
        elif self.kind == "poly":
            if self.param < 1:
                raise InvalidParams("poly exponent must be >= 1 so M(n) >= n")
        elif self.kind == "doubexp":
            pass
        else:
            raise InvalidParams(f"unknown policy kind {self.kind!r}")

    def evaluate(self, n: int) -> int:
        if n < 1:
            raise InvalidParams("n must be positive")
        if self.kind == "fixed":
            m = self.param
        elif self.kind == "poly":
            m = n**self.param
            if m > MAX_ID_RANGE:
                raise InvalidParams(f"M(n) = {n}^{self.param} exceeds 2^128")
        else:
            m = min(1 << min(1 << n, 128), MAX_ID_RANGE) if n < 8 else MAX_ID_RANGE
        if m < n:
            raise InvalidParams(f"policy yields M = {m} < n = {n}")
        return m

    def describe(self) -> str:
        if self.kind == "fixed":
            return f"fixed:{self.param}"
        if self.kind == "poly":
            return f"poly:{self.param}"
        return "doubexp"

    @classmethod
    def parse(cls, text: str) -> "IdRangePolicy":
        if text == "doubexp":
            return cls("doubexp")
        for prefix in ("fixed", "poly"):
            if text.startswith(prefix + ":"):
                try:
                    return cls(prefix, int(text[len(prefix) + 1 :]))
                except ValueError:
                    raise InvalidParams(f"bad policy parameter in {text!r}") from None
        raise InvalidParams(f"cannot parse id-range policy {text!r}")

    @classmethod
    def fixed(cls, m: int) -> "IdRangePolicy":
        return cls("fixed", m)

    @classmethod
    def poly(cls, c: int) -> "IdRangePolicy":
        return cls("poly", c)

    @classmethod
    def doubly_exponential(cls) -> "IdRangePolicy":
        return cls("doubexp")


def parse_graph(text: str) -> tuple[Graph, IdAssignment]:
    """Parse the line-oriented graph format.

    Header `g <n> <M>`, then exactly n lines `id <vertex> <identifier>`,
    then zero or more `e <u> <v>` lines. `#` starts a comment.
    """
    header: tuple[int, int] | None = None
    ids: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "g":
                if header is not None:
                    raise ParseError(f"line {lineno}: duplicate header")
                if len(parts) != 3:
                    raise ParseError(f"line {lineno}: expected 'g <n> <M>'")
                header = (int(parts[1]), int(parts[2]))
            elif parts[0] == "id":
                if header is None:
                    raise ParseError(f"line {lineno}: 'id' before header")
                if len(parts) != 3:
                    raise ParseError(f"line {lineno}: expected 'id <vertex> <identifier>'")
                vertex, identifier = int(parts[1]), int(parts[2])
                if not 0 <= vertex < header[0]:
                    raise ParseError(f"line {lineno}: vertex {vertex} out of range")
                if vertex in ids:
                    raise ParseError(f"line {lineno}: vertex {vertex} assigned twice")
                ids[vertex] = identifier
            elif parts[0] == "e":
                if header is None:
                    raise ParseError(f"line {lineno}: 'e' before header")
                if len(parts) != 3:
                    raise ParseError(f"line {lineno}: expected 'e <u> <v>'")
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise ParseError(f"line {lineno}: unknown record {parts[0]!r}")
        except ValueError:
            raise ParseError(f"line {lineno}: not an integer") from None
    if header is None:
        raise ParseError("missing 'g <n> <M>' header")
    n, id_range = header
    if n < 1:
        raise ParseError("vertex count must be positive")
    if not 1 <= id_range <= MAX_ID_RANGE:
        raise InvalidId(f"id range {id_range} outside [1, 2^128]")
    if id_range < n:
        raise InvalidId(f"id range {id_range} smaller than vertex count {n}")
    if len(ids) != n:
        raise ParseError(f"expected {n} id lines, found {len(ids)}")
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidEdge(f"edge endpoint out of range: ({u}, {v})")
        if u == v:
            raise InvalidEdge(f"self-loop at {u}")
    graph = Graph.of(n, edges)
    assignment = IdAssignment(tuple(ids[v] for v in range(n)), id_range)
    return graph, assignment


def serialize_graph(graph: Graph, ids: IdAssignment) -> str:
    """Inverse of parse_graph; output is canonical (sorted edges)."""
    if len(ids.ids) != graph.vertex_count:
        raise InvalidParams("id assignment does not cover the graph")
    lines = [f"g {graph.vertex_count} {ids.id_range}"]
    lines.extend(f"id {v} {ids.id_of(v)}" for v in range(graph.vertex_count))
    lines.extend(f"e {u} {v}" for u, v in sorted(graph.edges))
    return "\n".join(lines) + "\n"


def random_h_colorable_graph(n: int, target: TargetGraph, density: float, seed: int) -> Graph:
    """Random graph that admits a homomorphism to `target` by construction.

    Each vertex gets a uniformly random target vertex; a candidate edge is
    kept with probability `density` only when its endpoint images form a
    target edge. Deterministic in `seed`.
    """
    if not 0 <= density <= 1:
        raise InvalidParams(f"density {density} outside [0, 1]")
    if density > 0 and not target.edges:
        raise InvalidParams("target has no edges; only density 0 is satisfiable")
    if n < 1:
        raise InvalidParams("n must be positive")
    rng = random.Random(seed)
    phi = [rng.randrange(target.vertex_count) for _ in range(n)]
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if target.has_edge(phi[u], phi[v]) and rng.random() < density:
                edges.append((u, v))
    return Graph.of(n, edges)


def random_id_assignment(n: int, id_range: int, seed: int) -> IdAssignment:
    """Uniform injective assignment into {0, ..., id_range-1}, seed-deterministic.

    Rejection sampling keeps this exact for ranges up to 2^128.
    """
    if id_range < n:
        raise InvalidId(f"id range {id_range} smaller than vertex count {n}")
    rng = random.Random(seed)
    chosen: list[int] = []
    seen: set[int] = set()
    while len(chosen) < n:
        candidate = rng.randrange(id_range)
        if candidate not in seen:
            seen.add(candidate)
            chosen.append(candidate)
    return IdAssignment(tuple(chosen), id_range)
