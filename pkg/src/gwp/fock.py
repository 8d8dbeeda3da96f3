"""Truncated matrix representation of the word Hilbert space.

The basis is every word of length <= cutoff in the canonical deterministic
order, so representations are reproducible bit for bit.  Each edge gets a 0/1
creation matrix (column for word h carries a single 1 at row e*h when that
word is still inside the cutoff); annihilation matrices are their transposes
and vertex projections are diagonal.  This gives a numeric oracle that is
independent of the exact symbolic engine: walks of height at most the cutoff
are represented without truncation error, so moment computations of order n
on factors of word length <= l are exact whenever cutoff >= n*l.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .algebra import Element
from .graphs import Graph, PathWord

REL_TOL = 1e-9
ABS_TOL = 1e-12

DEFAULT_MAX_DIM = 1_000_000

_Key = tuple[str, tuple[str, ...]]


def values_close(exact: float, numeric: float) -> bool:
    """Numeric-vs-symbolic comparison at the standard tolerance."""
    return abs(numeric - exact) <= max(ABS_TOL, REL_TOL * abs(exact))


class FockBasis:
    """Ordered truncated word basis with O(1) index lookup."""

    def __init__(self, graph: Graph, cutoff: int, keys: list[_Key]):
        self.graph = graph
        self.cutoff = cutoff
        self._keys = keys
        self._index = {k: i for i, k in enumerate(keys)}

    def __len__(self) -> int:
        return len(self._keys)

    def index_of(self, w: PathWord) -> int:
        return self._index[(w.src, w.edges)]

    def key_index(self, key: _Key) -> int | None:
        return self._index.get(key)

    def word_at(self, i: int) -> PathWord:
        src, edges = self._keys[i]
        if not edges:
            return self.graph.vertex_unit(src)
        return self.graph.path(list(edges))

    def words(self) -> list[PathWord]:
        return [self.word_at(i) for i in range(len(self._keys))]

    def lengths(self) -> np.ndarray:
        return np.fromiter((len(e) for _, e in self._keys), dtype=np.int64)


class FockRep:
    """Immutable truncated representation: basis plus generator matrices."""

    def __init__(
        self,
        basis: FockBasis,
        edge_creation: dict[str, sparse.csr_matrix],
        vertex_projection: dict[str, sparse.csr_matrix],
    ):
        self.basis = basis
        self.graph = basis.graph
        self.cutoff = basis.cutoff
        self.dim = len(basis)
        self.edge_creation = edge_creation
        self.vertex_projection = vertex_projection

    def vacuum_vector(self, v: str) -> np.ndarray:
        x = np.zeros(self.dim)
        x[self.basis.index_of(self.graph.vertex_unit(v))] = 1.0
        return x

    def word_creation(self, w: PathWord) -> sparse.csr_matrix:
        """Matrix of the creation operator of a word (projection for a unit)."""
        if w.is_vertex_unit:
            return self.vertex_projection[w.src]
        m = self.edge_creation[w.edges[0]]
        for eid in w.edges[1:]:
            m = m @ self.edge_creation[eid]
        return m.tocsr()


def build_rep(g: Graph, cutoff: int, max_dim: int = DEFAULT_MAX_DIM) -> FockRep:
    """Enumerate the truncated basis and assemble all generator matrices.

    Words of length k are produced by prepending an edge to every admissible
    word of length k-1, which yields the canonical order and the creation
    matrix entries in the same pass.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    keys: list[_Key] = [(v, ()) for v in sorted(g.vertices)]
    rows: dict[str, list[int]] = {e.id: [] for e in g.edges}
    cols: dict[str, list[int]] = {e.id: [] for e in g.edges}
    sorted_edges = sorted(g.edges, key=lambda e: e.id)

    layer = list(range(len(keys)))  # indices of words of the previous length
    for _ in range(cutoff):
        new_layer: list[int] = []
        for e in sorted_edges:
            r, c = rows[e.id], cols[e.id]
            for hidx in layer:
                src, edges = keys[hidx]
                if src != e.dst:
                    continue
                if len(keys) >= max_dim:
                    raise ValueError(
                        f"basis would exceed {max_dim} words; raise max_dim "
                        "or lower the cutoff"
                    )
                idx = len(keys)
                keys.append((e.src, (e.id,) + edges))
                r.append(idx)
                c.append(hidx)
                new_layer.append(idx)
        if not new_layer:
            break
        layer = new_layer

    basis = FockBasis(g, cutoff, keys)
    dim = len(keys)
    creation = {
        eid: sparse.csr_matrix(
            (np.ones(len(rows[eid])), (rows[eid], cols[eid])), shape=(dim, dim)
        )
        for eid in rows
    }
    proj = {}
    srcs = np.array([src for src, _ in keys])
    for v in g.vertices:
        proj[v] = sparse.diags((srcs == v).astype(float), format="csr")
    return FockRep(basis, creation, proj)


def matrix_of(a: Element, rep: FockRep) -> sparse.csr_matrix:
    """Matrix of an element: sum of coeff * C(u) @ C(w)^T over its monomials.

    Agrees with the symbolic action on every column whose image stays inside
    the cutoff; columns near the boundary are truncated to zero.
    """
    if a.graph is not rep.graph:
        raise ValueError("element lives over a different graph")
    dim = rep.dim
    acc = sparse.csr_matrix((dim, dim))
    for (u, w), c in a.terms.items():
        m = rep.word_creation(u) @ rep.word_creation(w).T
        acc = acc + float(c) * m
    return acc.tocsr()


def vacuum_expectation(a: Element, rep: FockRep, v: str) -> float:
    """<a xi_v, xi_v> in the truncated representation.

    Exact (zero truncation error) provided no monomial word is longer than the
    cutoff, which is enforced.
    """
    if a.graph is not rep.graph:
        raise ValueError("element lives over a different graph")
    span = a.max_word_len()
    if span > rep.cutoff:
        raise ValueError(
            f"cutoff {rep.cutoff} too small for words of length {span}"
        )
    x = rep.vacuum_vector(v)
    i = rep.basis.index_of(rep.graph.vertex_unit(v))
    y = np.zeros_like(x)
    for (u, w), c in a.terms.items():
        z = rep.word_creation(w).T @ x
        z = rep.word_creation(u) @ z
        y += float(c) * z
    return float(y[i])


def vacuum_moment(a: Element, n: int, rep: FockRep, v: str) -> float:
    """<a^n xi_v, xi_v> by a sparse matvec chain, without expanding a^n.

    Exactness needs cutoff >= n * (longest word in a): the walk from xi_v can
    then never leave the truncated basis.
    """
    need = n * a.max_word_len()
    if need > rep.cutoff:
        raise ValueError(
            f"order-{n} moment of words up to length {a.max_word_len()} needs "
            f"cutoff >= {need}, have {rep.cutoff}"
        )
    m = matrix_of(a, rep)
    x = rep.vacuum_vector(v)
    for _ in range(n):
        x = m @ x
    return float(x[rep.basis.index_of(rep.graph.vertex_unit(v))])


def required_cutoff(a: Element, order: int) -> int:
    """Smallest cutoff making order-``order`` moments of ``a`` exact."""
    return max(1, order * a.max_word_len())


class RelationCheck:
    """One verified operator identity with its worst deviation."""

    def __init__(self, name: str, deviation: float, ok: bool, note: str = ""):
        self.name = name
        self.deviation = deviation
        self.ok = ok
        self.note = note

    def __repr__(self) -> str:
        flag = "ok" if self.ok else "FAIL"
        return f"<RelationCheck {self.name}: dev={self.deviation:.3e} {flag}>"


def _absmax(m: sparse.spmatrix) -> float:
    m = sparse.csr_matrix(m)
    if m.nnz == 0:
        return 0.0
    return float(np.abs(m.data).max())


def _col_masked_max(m: sparse.spmatrix, col_mask: np.ndarray) -> float:
    mc = sparse.csc_matrix(m)[:, np.flatnonzero(col_mask)]
    if mc.nnz == 0:
        return 0.0
    return float(np.abs(mc.data).max())


def verify_relations(rep: FockRep, max_word_len: int | None = None) -> list[RelationCheck]:
    """Check the generator identities numerically on the truncated space.

    For every word w up to length cutoff-1 (or max_word_len), on columns
    unaffected by truncation: A(w)C(w) equals the range projection and
    C(w)A(w)C(w) equals C(w).  The prefix projection C(w)A(w) is checked to be
    idempotent, self-adjoint, and dominated by the source projection; in this
    concrete representation it is a proper subprojection, not an equality.
    Vertex projections are checked to be self-adjoint idempotents.
    """
    g = rep.graph
    lens = rep.basis.lengths()
    limit = rep.cutoff - 1 if max_word_len is None else min(max_word_len, rep.cutoff - 1)
    checks: list[RelationCheck] = []

    dev_isometry = 0.0
    dev_partial = 0.0
    dev_idem = 0.0
    dev_sym = 0.0
    dev_sub = 0.0
    for i in range(rep.dim):
        w = rep.basis.word_at(i)
        if w.is_vertex_unit or len(w) > limit:
            continue
        cw = rep.word_creation(w)
        interior = lens <= (rep.cutoff - len(w))
        d = cw.T @ cw - rep.vertex_projection[w.dst]
        dev_isometry = max(dev_isometry, _col_masked_max(d, interior))
        d = cw @ cw.T @ cw - cw
        dev_partial = max(dev_partial, _col_masked_max(d, interior))
        q = cw @ cw.T
        dev_idem = max(dev_idem, _absmax(q @ q - q))
        dev_sym = max(dev_sym, _absmax(q - q.T))
        qd = q.diagonal()
        pd = rep.vertex_projection[w.src].diagonal()
        dev_sub = max(dev_sub, float(np.max(qd - pd, initial=0.0)))
    checks.append(
        RelationCheck(
            "A(w)C(w) = P(range w) on interior columns",
            dev_isometry,
            dev_isometry <= ABS_TOL,
        )
    )
    checks.append(
        RelationCheck(
            "C(w)A(w)C(w) = C(w) on interior columns",
            dev_partial,
            dev_partial <= ABS_TOL,
        )
    )
    checks.append(
        RelationCheck(
            "C(w)A(w) idempotent and self-adjoint",
            max(dev_idem, dev_sym),
            max(dev_idem, dev_sym) <= ABS_TOL,
        )
    )
    checks.append(
        RelationCheck(
            "C(w)A(w) <= P(source w) (subprojection)",
            dev_sub,
            dev_sub <= ABS_TOL,
            note=(
                "concrete representation: the prefix projection is a proper "
                "subprojection of the source projection, not an equality"
            ),
        )
    )

    dev_proj = 0.0
    for v in g.vertices:
        p = rep.vertex_projection[v]
        dev_proj = max(dev_proj, _absmax(p @ p - p), _absmax(p - p.T))
    checks.append(
        RelationCheck(
            "P(v) self-adjoint idempotent", dev_proj, dev_proj <= ABS_TOL
        )
    )
    return checks
