"""Normal-form *-algebra of creation/annihilation operators on path words.

Every operator is stored as a finite sum of monomials ``coeff * C(u) A(w)``,
where C(u) prepends the word u to basis vectors and A(w) = C(w)* strips the
prefix w.  This family is closed under products: a product of two monomials
reduces by the prefix trichotomy (the annihilated word of the left factor is
a prefix of the created word of the right factor, or vice versa, or the
product is zero), so equality of operators is decidable coefficient-wise.

Coefficients default to exact rationals (int / fractions.Fraction); floats are
accepted and simply propagate, switching the element to numeric arithmetic.

The conditional expectation onto the span of vertex projections is realised
by the vertex-vacuum pairing: E(a) keeps, for each vertex v, the coefficient
<a xi_v, xi_v>, which on normal forms is exactly the coefficient of the
monomial C(unit_v) A(unit_v).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .graphs import Graph, PathWord, concat

Coeff = Union[int, Fraction, float, complex]

_MonoKey = tuple[PathWord, PathWord]


def norm_coeff(c: Coeff) -> Coeff:
    """Canonicalize a coefficient: integral Fractions become ints."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Element:
    """Finite linear combination of normal-form monomials over one graph."""

    __slots__ = ("graph", "terms")

    def __init__(self, graph: Graph, terms: Mapping[_MonoKey, Coeff]):
        self.graph = graph
        self.terms: dict[_MonoKey, Coeff] = {
            k: norm_coeff(v) for k, v in terms.items() if v != 0
        }

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, graph: Graph) -> Element:
        return cls(graph, {})

    # -- basic structure -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> list[tuple[Coeff, PathWord, PathWord]]:
        """Terms as (coeff, created word, annihilated word), canonical order."""
        return [
            (c, u, w)
            for (u, w), c in sorted(
                self.terms.items(), key=lambda kv: _mono_sort_key(kv[0])
            )
        ]

    def max_word_len(self) -> int:
        """Longest created or annihilated word over all monomials."""
        if not self.terms:
            return 0
        return max(max(len(u), len(w)) for (u, w) in self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.graph is other.graph and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if self.is_zero():
            return "<Element 0>"
        parts = []
        for c, u, w in self.monomials():
            bits = []
            if not u.is_vertex_unit:
                bits.append(f"C({u})")
            if not w.is_vertex_unit:
                bits.append(f"A({w})")
            if not bits:
                bits.append(f"P({u.src})")
            parts.append(f"{c}*{'·'.join(bits)}")
        return "<Element " + " + ".join(parts) + ">"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: Element) -> Element:
        self._check_same_graph(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return Element(self.graph, out)

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def __neg__(self) -> Element:
        return Element(self.graph, {k: -c for k, c in self.terms.items()})

    def scaled(self, s: Coeff) -> Element:
        if s == 0:
            return Element.zero(self.graph)
        return Element(self.graph, {k: s * c for k, c in self.terms.items()})

    def __rmul__(self, s: Coeff) -> Element:
        if isinstance(s, Element):
            return NotImplemented
        return self.scaled(s)

    def __mul__(self, other: Element | Coeff) -> Element:
        if not isinstance(other, Element):
            return self.scaled(other)
        return multiply(self, other)

    def __pow__(self, n: int) -> Element:
        if n < 0:
            raise ValueError("negative operator powers are not defined")
        acc = identity(self.graph)
        for _ in range(n):
            acc = acc * self
        return acc

    def _check_same_graph(self, other: Element) -> None:
        if self.graph is not other.graph:
            raise ValueError("operands live over different graphs")


def _mono_sort_key(key: _MonoKey):
    u, w = key
    return (len(u.edges), u.src, u.edges, len(w.edges), w.src, w.edges)


def _check_monomial(g: Graph, u: PathWord, w: PathWord) -> None:
    if u.graph is not g or w.graph is not g:
        raise ValueError("monomial words belong to a different graph")
    if u.dst != w.dst:
        raise ValueError(
            f"zero monomial: created word ends at {u.dst!r} but annihilated "
            f"word ends at {w.dst!r}"
        )


def make_element(
    g: Graph, monomials: Iterable[tuple[Coeff, PathWord, PathWord]]
) -> Element:
    """Assemble an element from (coeff, created, annihilated) triples.

    Triples whose words end at different vertices denote the zero operator and
    are rejected rather than silently dropped.
    """
    terms: dict[_MonoKey, Coeff] = {}
    for c, u, w in monomials:
        _check_monomial(g, u, w)
        key = (u, w)
        s = terms.get(key, 0) + c
        if s == 0:
            terms.pop(key, None)
        else:
            terms[key] = s
    return Element(g, terms)


def creation(w: PathWord) -> Element:
    """The operator prepending the word w."""
    unit = w.graph.vertex_unit(w.dst)
    return Element(w.graph, {(w, unit): 1})


def annihilation(w: PathWord) -> Element:
    """The adjoint of creation(w): strips the prefix w."""
    unit = w.graph.vertex_unit(w.dst)
    return Element(w.graph, {(unit, w): 1})


def projection(g: Graph, v: str) -> Element:
    """The projection onto basis words with source v."""
    unit = g.vertex_unit(v)
    return Element(g, {(unit, unit): 1})


def identity(g: Graph) -> Element:
    """The unit: the sum of all vertex projections."""
    return make_element(
        g, [(1, g.vertex_unit(v), g.vertex_unit(v)) for v in g.vertices]
    )


def mul_monomials(
    u1: PathWord, w1: PathWord, u2: PathWord, w2: PathWord
) -> _MonoKey | None:
    """Reduce (C(u1) A(w1)) (C(u2) A(w2)) to a single monomial key, or None.

    A(w1) C(u2) equals: C(h) when u2 = w1*h, A(h) when w1 = u2*h, and zero
    otherwise; the surviving word merges into the matching outer factor.
    """
    h = u2.strip_prefix(w1)
    if h is not None:
        u = concat(u1, h)
        assert u is not None
        return (u, w2)
    h = w1.strip_prefix(u2)
    if h is not None:
        w = concat(w2, h)
        assert w is not None
        return (u1, w)
    return None


def multiply(a: Element, b: Element) -> Element:
    """Product in the normal-form algebra (bilinear over monomial reduction)."""
    a._check_same_graph(b)
    out: dict[_MonoKey, Coeff] = {}
    for (u1, w1), c1 in a.terms.items():
        for (u2, w2), c2 in b.terms.items():
            key = mul_monomials(u1, w1, u2, w2)
            if key is None:
                continue
            s = out.get(key, 0) + c1 * c2
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
    return Element(a.graph, out)


def adjoint(a: Element) -> Element:
    """The *-involution: (c C(u) A(w))* = conj(c) C(w) A(u)."""
    return Element(
        a.graph, {(w, u): c.conjugate() for (u, w), c in a.terms.items()}
    )


def linear_combine(coeffs: Sequence[Coeff], elements: Sequence[Element]) -> Element:
    if len(coeffs) != len(elements):
        raise ValueError("coefficient and element lists differ in length")
    if not elements:
        raise ValueError("cannot combine an empty list of elements")
    acc = Element.zero(elements[0].graph)
    for c, el in zip(coeffs, elements):
        acc = acc + el.scaled(c)
    return acc


class DiagonalElement:
    """Finitely supported map vertex -> coefficient (span of projections)."""

    __slots__ = ("graph", "coeffs")

    def __init__(self, graph: Graph, coeffs: Mapping[str, Coeff]):
        self.graph = graph
        self.coeffs: dict[str, Coeff] = {
            v: norm_coeff(c) for v, c in coeffs.items() if c != 0
        }

    @classmethod
    def zero(cls, graph: Graph) -> DiagonalElement:
        return cls(graph, {})

    def is_zero(self) -> bool:
        return not self.coeffs

    def get(self, v: str) -> Coeff:
        return self.coeffs.get(v, 0)

    def scalar(self) -> Coeff:
        """The unique coefficient on a one-vertex graph (0 when absent)."""
        if len(self.graph.vertices) != 1:
            raise ValueError("scalar() requires a one-vertex graph")
        return self.coeffs.get(self.graph.vertices[0], 0)

    def as_element(self) -> Element:
        g = self.graph
        return make_element(
            g, [(c, g.vertex_unit(v), g.vertex_unit(v)) for v, c in self.coeffs.items()]
        )

    def __add__(self, other: DiagonalElement) -> DiagonalElement:
        out = dict(self.coeffs)
        for v, c in other.coeffs.items():
            out[v] = out.get(v, 0) + c
        return DiagonalElement(self.graph, out)

    def __mul__(self, other: DiagonalElement | Coeff) -> DiagonalElement:
        if isinstance(other, DiagonalElement):
            # pointwise product: vertex projections are orthogonal idempotents
            return DiagonalElement(
                self.graph,
                {
                    v: c * other.coeffs[v]
                    for v, c in self.coeffs.items()
                    if v in other.coeffs
                },
            )
        return self.scaled(other)

    def scaled(self, s: Coeff) -> DiagonalElement:
        return DiagonalElement(self.graph, {v: s * c for v, c in self.coeffs.items()})

    def __rmul__(self, s: Coeff) -> DiagonalElement:
        return self.scaled(s)

    def __neg__(self) -> DiagonalElement:
        return self.scaled(-1)

    def __sub__(self, other: DiagonalElement) -> DiagonalElement:
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiagonalElement):
            return NotImplemented
        return self.graph is other.graph and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "<Diagonal 0>"
        inner = " + ".join(f"{c}*P({v})" for v, c in sorted(self.coeffs.items()))
        return f"<Diagonal {inner}>"


def expectation(a: Element) -> DiagonalElement:
    """Conditional expectation onto the diagonal.

    Keeps exactly the vertex-projection coefficients of the normal form;
    equivalently the vacuum pairing v -> <a xi_v, xi_v>.
    """
    out: dict[str, Coeff] = {}
    for (u, w), c in a.terms.items():
        if u.is_vertex_unit and w.is_vertex_unit:
            out[u.src] = out.get(u.src, 0) + c
    return DiagonalElement(a.graph, out)


def trace(a: Element) -> Coeff:
    """Scalar expectation on a one-vertex graph."""
    if len(a.graph.vertices) != 1:
        raise ValueError("trace requires a one-vertex graph; use expectation")
    return expectation(a).scalar()


@dataclass(frozen=True)
class Support:
    """Index set of a pure element, split into vertex and path parts."""

    vertex_part: frozenset[str]
    path_part: frozenset[tuple[PathWord, str]]  # flavor: "plain" | "starred"


def support(a: Element) -> Support:
    """Support of an element lying in span{projections, C(w), A(w)}.

    Raises for mixed monomials (created and annihilated words both nontrivial)
    since the support decomposition is only defined for pure expansions.
    """
    verts: set[str] = set()
    paths: set[tuple[PathWord, str]] = set()
    for (u, w) in a.terms:
        if u.is_vertex_unit and w.is_vertex_unit:
            verts.add(u.src)
        elif w.is_vertex_unit:
            paths.add((u, "plain"))
        elif u.is_vertex_unit:
            paths.add((w, "starred"))
        else:
            raise ValueError(
                "support is undefined for elements with mixed monomials"
            )
    return Support(vertex_part=frozenset(verts), path_part=frozenset(paths))


def apply_to_basis(a: Element, h: PathWord) -> dict[PathWord, Coeff]:
    """Expand a * xi_h in the word basis.

    A(w) sends xi_{w h'} to xi_{h'} and kills everything else; C(u) sends
    xi_{h'} to xi_{u h'} when the endpoints match.  No truncation is involved.
    """
    if h.graph is not a.graph:
        raise ValueError("basis word belongs to a different graph")
    out: dict[PathWord, Coeff] = {}
    for (u, w), c in a.terms.items():
        rest = h.strip_prefix(w)
        if rest is None:
            continue
        target = concat(u, rest)
        if target is None:
            continue
        s = out.get(target, 0) + c
        if s == 0:
            out.pop(target, None)
        else:
            out[target] = s
    return out
