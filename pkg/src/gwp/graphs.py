"""Directed multigraphs and their path semigroupoid.

A word is either a vertex unit (the empty path sitting at a vertex) or a
nonempty admissible sequence of edges.  Words concatenate partially: w1*w2
exists exactly when the target of w1 is the source of w2, with vertex units
acting as one-sided identities.  The diagram of a word is its set of traversed
edges; two words are diagram-distinct when those footprints differ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class GraphSpecError(ValueError):
    """Raised when a graph description violates the validation rules."""


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class Graph:
    """Finite directed multigraph with string-identified vertices and edges.

    Vertex ids and edge ids live in disjoint namespaces.  Loops and parallel
    edges are permitted.  Instances are immutable; all derived lookup tables
    are built once at construction.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    _edge_by_id: dict[str, Edge] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )
    _out_edges: dict[str, tuple[Edge, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        by_id = {e.id: e for e in self.edges}
        out: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in sorted(self.edges, key=lambda e: e.id):
            out[e.src].append(e)
        object.__setattr__(self, "_edge_by_id", by_id)
        object.__setattr__(
            self, "_out_edges", {v: tuple(es) for v, es in out.items()}
        )

    # -- lookups -----------------------------------------------------------

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_by_id[edge_id]
        except KeyError:
            raise GraphSpecError(f"unknown edge id {edge_id!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self._out_edges

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        try:
            return self._out_edges[v]
        except KeyError:
            raise GraphSpecError(f"unknown vertex id {v!r}") from None

    # -- word constructors ---------------------------------------------------

    def vertex_unit(self, v: str) -> PathWord:
        if not self.has_vertex(v):
            raise GraphSpecError(f"unknown vertex id {v!r}")
        return PathWord(graph=self, edges=(), src=v, dst=v)

    def path(self, edge_ids: Sequence[str]) -> PathWord:
        """Build the word for a nonempty admissible edge sequence."""
        if not edge_ids:
            raise GraphSpecError("empty edge sequence; use vertex_unit instead")
        es = [self.edge(eid) for eid in edge_ids]
        for a, b in zip(es, es[1:]):
            if a.dst != b.src:
                raise GraphSpecError(
                    f"inadmissible path: edge {a.id!r} ends at {a.dst!r} "
                    f"but edge {b.id!r} starts at {b.src!r}"
                )
        return PathWord(
            graph=self, edges=tuple(e.id for e in es), src=es[0].src, dst=es[-1].dst
        )

    def word(self, spec: str) -> PathWord:
        """Parse a word flag: comma-separated edge ids, or a bare vertex id."""
        spec = spec.strip()
        if "," in spec:
            return self.path([part.strip() for part in spec.split(",")])
        if self.has_vertex(spec):
            return self.vertex_unit(spec)
        return self.path([spec])


@dataclass(frozen=True)
class PathWord:
    """Element of the path semigroupoid: a vertex unit or an edge path.

    ``edges`` is empty exactly for vertex units, where ``src == dst``.  The
    owning graph is carried for cross-graph guards but never takes part in
    equality or hashing.
    """

    graph: Graph = field(compare=False, repr=False)
    edges: tuple[str, ...] = ()
    src: str = ""
    dst: str = ""

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def is_vertex_unit(self) -> bool:
        return not self.edges

    def __str__(self) -> str:
        return f"[{self.src}]" if self.is_vertex_unit else ",".join(self.edges)

    def is_prefix_of(self, other: PathWord) -> bool:
        """True when ``other == self * h`` for some word h."""
        if self.src != other.src:
            return False
        k = len(self.edges)
        return other.edges[:k] == self.edges

    def strip_prefix(self, prefix: PathWord) -> PathWord | None:
        """Return h with ``self == prefix * h``, or None."""
        if not prefix.is_prefix_of(self):
            return None
        rest = self.edges[len(prefix.edges):]
        if not rest:
            return PathWord(graph=self.graph, edges=(), src=self.dst, dst=self.dst)
        return PathWord(graph=self.graph, edges=rest, src=prefix.dst, dst=self.dst)


@dataclass(frozen=True)
class Diagram:
    """Footprint of a word: its set of distinct edges.

    Vertex units have empty support and are tagged with their base vertex so
    that units at different vertices stay distinguishable.
    """

    edge_support: frozenset[str]
    base_vertex: str | None = None


def build_graph(
    vertices: Iterable[str],
    edges: Iterable[tuple[str, str, str] | Edge],
) -> Graph:
    """Validate and construct a graph from vertex ids and (id, src, dst) edges.

    Rejects duplicate ids, vertex/edge namespace collisions, and edges with
    endpoints outside the vertex set.
    """
    vs = list(vertices)
    vset = set(vs)
    if len(vset) != len(vs):
        raise GraphSpecError("duplicate vertex id")
    es: list[Edge] = []
    eids: set[str] = set()
    for item in edges:
        e = item if isinstance(item, Edge) else Edge(*item)
        if e.id in eids:
            raise GraphSpecError(f"duplicate edge id {e.id!r}")
        if e.id in vset:
            raise GraphSpecError(
                f"id {e.id!r} used for both a vertex and an edge"
            )
        if e.src not in vset:
            raise GraphSpecError(f"edge {e.id!r} has unknown source {e.src!r}")
        if e.dst not in vset:
            raise GraphSpecError(f"edge {e.id!r} has unknown range {e.dst!r}")
        eids.add(e.id)
        es.append(e)
    return Graph(vertices=tuple(vs), edges=tuple(es))


def concat(w1: PathWord, w2: PathWord) -> PathWord | None:
    """Concatenate two words, or None when the endpoints do not match."""
    if w1.graph is not w2.graph:
        raise GraphSpecError("cannot concatenate words from different graphs")
    if w1.dst != w2.src:
        return None
    if w1.is_vertex_unit:
        return w2
    if w2.is_vertex_unit:
        return w1
    return PathWord(
        graph=w1.graph, edges=w1.edges + w2.edges, src=w1.src, dst=w2.dst
    )


def endpoints(w: PathWord) -> tuple[str, str]:
    """Source and range of a word."""
    return (w.src, w.dst)


def diagram(w: PathWord) -> Diagram:
    if w.is_vertex_unit:
        return Diagram(edge_support=frozenset(), base_vertex=w.src)
    return Diagram(edge_support=frozenset(w.edges))


def diagram_distinct(w1: PathWord, w2: PathWord) -> bool:
    """True when the two words traverse different edge sets.

    A loop and its powers share a diagram and are never distinct.  This choice
    is conservative: words with equal support are never declared free.
    """
    if w1.graph is not w2.graph:
        raise GraphSpecError("cannot compare words from different graphs")
    return diagram(w1) != diagram(w2)


def iter_paths(g: Graph, max_len: int) -> Iterator[PathWord]:
    """Yield vertex units and admissible paths of length <= max_len.

    Order is deterministic: length-major, then lexicographic by edge id
    sequence (vertex units sorted by vertex id).
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    layer = [g.vertex_unit(v) for v in sorted(g.vertices)]
    yield from layer
    for _ in range(max_len):
        nxt: list[PathWord] = []
        for w in layer:
            for e in g.out_edges(w.dst):
                nxt.append(
                    PathWord(graph=g, edges=w.edges + (e.id,), src=w.src, dst=e.dst)
                )
        # within a fixed length, extending words in lexicographic order by
        # sorted out-edges preserves lexicographic order
        nxt.sort(key=lambda w: w.edges)
        if not nxt:
            return
        yield from nxt
        layer = nxt


def enumerate_paths(g: Graph, max_len: int) -> list[PathWord]:
    """All words of length <= max_len in the canonical deterministic order."""
    return list(iter_paths(g, max_len))
