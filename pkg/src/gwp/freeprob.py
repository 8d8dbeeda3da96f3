"""Semicircular systems, moment series, R-transforms and free-group embedding.

On a one-vertex graph with N loops, the sum of the N self-adjoint generators
C(l) + A(l) has even moments equal to Catalan numbers times N^(n/2) and free
cumulant series N z^2 -- the signature of the sum of N free standard
semicircular variables.  Any graph with N loops concentrated on one vertex
hosts the same system; all expectations of words in the generators then stay
supported on that vertex.

Normalization: the generators carry unit scale by default.  In this concrete
representation the expectation of C(l)A(l) vanishes, so unit scale is what
yields variance 1 per summand; the conventional 1/sqrt(2) factor would shrink
every even moment of order n by 2^(-n/2).  The scale stays a parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    Coeff,
    DiagonalElement,
    Element,
    adjoint,
    annihilation,
    creation,
    norm_coeff,
    projection,
)
from .graphs import Graph, PathWord, diagram_distinct
from .noncrossing import (
    catalan,
    enumerate_nc_pairings,
    mixed_cumulant,
    moments_to_cumulants,
)

#: double-precision 1/sqrt(2), the conventional semicircular normalization
INV_SQRT2 = 0.7071067811865476


@dataclass(frozen=True)
class PowerSeries:
    """Truncated formal power series with zero constant term."""

    coeffs: tuple[Coeff, ...]  # coefficient of z^n at index n-1

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def coeff(self, n: int) -> Coeff:
        if not 1 <= n <= len(self.coeffs):
            raise IndexError(f"series truncated at order {len(self.coeffs)}")
        return self.coeffs[n - 1]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __str__(self) -> str:
        parts = [
            f"{c} z^{n}" for n, c in enumerate(self.coeffs, start=1) if c != 0
        ]
        return " + ".join(parts) if parts else "0"


def loops_at(g: Graph, v0: str) -> list[str]:
    """Edge ids of the loops based at v0, in sorted order."""
    return [e.id for e in g.out_edges(v0) if e.dst == v0]


def semicircular(g: Graph, loop_edge: str, scale: Coeff = 1) -> Element:
    """scale * (C(l) + A(l)) for a loop edge l: a semicircular generator."""
    e = g.edge(loop_edge)
    if e.src != e.dst:
        raise ValueError(
            f"edge {loop_edge!r} is not a loop ({e.src!r} -> {e.dst!r}); "
            "semicircularity needs a loop"
        )
    w = g.path([loop_edge])
    x = creation(w) + annihilation(w)
    return x.scaled(scale) if scale != 1 else x


def generating_operator(g: Graph, v0: str, scale: Coeff = 1) -> Element:
    """Sum of the semicircular generators over every loop at v0."""
    loops = loops_at(g, v0)
    if not loops:
        raise ValueError(f"no loops at vertex {v0!r}")
    acc = Element.zero(g)
    for l in loops:
        acc = acc + semicircular(g, l, scale)
    return acc


def _resolve_vertex(a: Element, vertex: str | None) -> str:
    if vertex is not None:
        if not a.graph.has_vertex(vertex):
            raise ValueError(f"unknown vertex id {vertex!r}")
        return vertex
    if len(a.graph.vertices) != 1:
        raise ValueError("a base vertex is required on multi-vertex graphs")
    return a.graph.vertices[0]


def moment_coefficients(
    a: Element, order: int, vertex: str | None = None
) -> list[Coeff]:
    """Exact state values <a^n xi_v, xi_v> for n = 1..order.

    Computed by iterating the element's action on the word basis from the
    vertex vacuum; each step records the vacuum coefficient.  No truncation is
    involved, and integer/rational inputs stay exact.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    v = _resolve_vertex(a, vertex)
    monos = []
    for (u, w), c in a.terms.items():
        out_src = u.src if u.edges else w.dst
        monos.append((c, out_src, u.edges, w.src, w.edges, len(w.edges)))
    vac = (v, ())
    vec: dict[tuple[str, tuple[str, ...]], Coeff] = {vac: 1}
    out: list[Coeff] = []
    for _ in range(order):
        nxt: dict[tuple[str, tuple[str, ...]], Coeff] = {}
        get = nxt.get
        for (hsrc, hedges), x in vec.items():
            for c, osrc, uedges, wsrc, wedges, wlen in monos:
                if hsrc != wsrc:
                    continue
                if wlen and hedges[:wlen] != wedges:
                    continue
                key = (osrc, uedges + hedges[wlen:])
                nxt[key] = get(key, 0) + c * x
        vec = {k: val for k, val in nxt.items() if val != 0}
        out.append(norm_coeff(vec.get(vac, 0)))
    return out


def moment_series(a: Element, order: int, vertex: str | None = None) -> PowerSeries:
    """Moment series of a under the trace / vertex state, to the given order."""
    return PowerSeries(coeffs=tuple(moment_coefficients(a, order, vertex)))


def r_transform(a: Element, order: int, vertex: str | None = None) -> PowerSeries:
    """Free cumulant series of a: Moebius inversion of the moment series."""
    ms = moment_coefficients(a, order, vertex)
    return PowerSeries(coeffs=tuple(moments_to_cumulants(ms)))


def expectation_powers(a: Element, order: int) -> list[DiagonalElement]:
    """Diagonal expectations E(a^n) for n = 1..order, exactly."""
    g = a.graph
    per_vertex = {v: moment_coefficients(a, order, v) for v in g.vertices}
    return [
        DiagonalElement(g, {v: per_vertex[v][n] for v in g.vertices})
        for n in range(order)
    ]


def catalan_moment_formula(n_loops: int, n: int) -> int:
    """Closed form for the n-th moment of the generating operator:
    catalan(n/2) * N^(n/2) for even n, zero for odd n."""
    if n_loops < 1 or n < 1:
        raise ValueError("need n_loops >= 1 and n >= 1")
    if n % 2:
        return 0
    return catalan(n // 2) * n_loops ** (n // 2)


def nc2_moment_sum(n_loops: int, n: int) -> int:
    """The same moment through the pairing route: sum of N^|pi| over
    non-crossing pair partitions of {1..n}."""
    if n % 2:
        return 0
    return sum(n_loops ** p.block_count() for p in enumerate_nc_pairings(n))


@dataclass(frozen=True)
class DistributionComparison:
    equal: bool
    order: int
    first_mismatch: tuple[int, Coeff, Coeff] | None
    series_a: PowerSeries
    series_b: PowerSeries


def identically_distributed(
    a: Element,
    b: Element,
    order: int,
    vertex_a: str | None = None,
    vertex_b: str | None = None,
) -> DistributionComparison:
    """Compare free cumulant series coefficient-by-coefficient, exactly."""
    ra = r_transform(a, order, vertex_a)
    rb = r_transform(b, order, vertex_b)
    mismatch = None
    for n in range(1, order + 1):
        if ra.coeff(n) != rb.coeff(n):
            mismatch = (n, ra.coeff(n), rb.coeff(n))
            break
    return DistributionComparison(
        equal=mismatch is None,
        order=order,
        first_mismatch=mismatch,
        series_a=ra,
        series_b=rb,
    )


def _word_expr(w: PathWord, starred: bool) -> str:
    """Grammar-conformant label for C(w) or A(w) (starred reverses edges)."""
    if starred:
        return "*".join(f"Ls({e})" for e in reversed(w.edges))
    return "*".join(f"L({e})" for e in w.edges)


def _algebra_monomials(w: PathWord, degree: int) -> list[tuple[str, Element]]:
    """Nonzero monomials of degree <= degree in C(w), A(w), deduplicated."""
    gens = [(_word_expr(w, False), creation(w)), (_word_expr(w, True), annihilation(w))]
    out: list[tuple[str, Element]] = list(gens)
    prev = list(gens)
    for _ in range(degree - 1):
        nxt = []
        for lbl1, e1 in prev:
            for lbl2, e2 in gens:
                prod = e1 * e2
                if not prod.is_zero():
                    nxt.append((f"{lbl1}*{lbl2}", prod))
        out.extend(nxt)
        prev = nxt
    seen: dict[Element, str] = {}
    dedup: list[tuple[str, Element]] = []
    for lbl, el in out:
        if el not in seen:
            seen[el] = lbl
            dedup.append((lbl, el))
    return dedup


@dataclass(frozen=True)
class FreenessWitness:
    order: int
    labels: tuple[str, ...]
    value: DiagonalElement


@dataclass(frozen=True)
class FreenessReport:
    word1: str
    word2: str
    diagram_distinct: bool
    scan_order: int
    scanned: int
    witnesses: tuple[FreenessWitness, ...]

    @property
    def free_evidence(self) -> bool:
        return not self.witnesses

    @property
    def consistent(self) -> bool:
        """Diagram-distinct words must produce a clean scan (the scan not
        finding anything for non-distinct words only means it was too narrow).
        """
        return not (self.diagram_distinct and self.witnesses)


def freeness_check(
    w1: PathWord, w2: PathWord, scan_order: int = 4, degree: int = 2
) -> FreenessReport:
    """Diagram verdict plus a mixed-cumulant scan.

    The scan evaluates every cumulant of order 2..scan_order whose arguments
    alternate between monomials (of degree <= degree) of the *-algebras
    generated by the two words; each nonzero value is reported as a witness
    against freeness.
    """
    if scan_order < 2:
        raise ValueError("scan_order must be >= 2")
    arms = (_algebra_monomials(w1, degree), _algebra_monomials(w2, degree))
    distinct = diagram_distinct(w1, w2)
    witnesses: list[FreenessWitness] = []
    scanned = 0
    seen: set[tuple[Element, ...]] = set()
    for n in range(2, scan_order + 1):
        for start in (0, 1):
            choices = [arms[(start + i) % 2] for i in range(n)]
            idx = [0] * n
            while True:
                factors = tuple(choices[i][idx[i]][1] for i in range(n))
                if factors not in seen:
                    seen.add(factors)
                    val = mixed_cumulant(factors)
                    scanned += 1
                    if not val.is_zero():
                        labels = tuple(choices[i][idx[i]][0] for i in range(n))
                        witnesses.append(
                            FreenessWitness(order=n, labels=labels, value=val)
                        )
                # odometer over the choice lists
                pos = n - 1
                while pos >= 0 and idx[pos] == len(choices[pos]) - 1:
                    idx[pos] = 0
                    pos -= 1
                if pos < 0:
                    break
                idx[pos] += 1
    return FreenessReport(
        word1=str(w1),
        word2=str(w2),
        diagram_distinct=distinct,
        scan_order=scan_order,
        scanned=scanned,
        witnesses=tuple(witnesses),
    )


@dataclass(frozen=True)
class SemicircularSystem:
    """N unit-variance semicircular generators on loops at one vertex, with
    the moment checks of their sum attached."""

    graph: Graph
    vertex: str
    loop_edges: tuple[str, ...]
    scale: Coeff
    generators: tuple[Element, ...]
    generating: Element
    moment_checks: tuple[tuple[int, DiagonalElement, bool], ...]


def embed_free_group_factor(
    g: Graph, v0: str, n_loops: int, verify_order: int = 8, scale: Coeff = 1
) -> SemicircularSystem:
    """Build the semicircular system on the first N loops at v0 and verify
    that the moments of its sum match the closed form, concentrated at v0."""
    available = loops_at(g, v0)
    if len(available) < n_loops:
        raise ValueError(
            f"graph cannot host a rank-{n_loops} free system at {v0!r}: "
            f"only {len(available)} loop(s) available"
        )
    chosen = tuple(available[:n_loops])
    gens = tuple(semicircular(g, l, scale) for l in chosen)
    total = gens[0]
    for x in gens[1:]:
        total = total + x
    diag_powers = expectation_powers(total, verify_order)
    checks = []
    for n in range(1, verify_order + 1):
        expected = DiagonalElement(
            g, {v0: catalan_moment_formula(n_loops, n)} if n % 2 == 0 else {}
        )
        checks.append((n, diag_powers[n - 1], diag_powers[n - 1] == expected))
    return SemicircularSystem(
        graph=g,
        vertex=v0,
        loop_edges=chosen,
        scale=scale,
        generators=gens,
        generating=total,
        moment_checks=tuple(checks),
    )


def compress_to_vertex(a: Element, v: str) -> Element:
    """Two-sided compression P(v) a P(v)."""
    p = projection(a.graph, v)
    return p * a * p


def self_adjoint(a: Element) -> bool:
    return adjoint(a) == a


__all__ = [
    "INV_SQRT2",
    "PowerSeries",
    "loops_at",
    "semicircular",
    "generating_operator",
    "moment_coefficients",
    "moment_series",
    "r_transform",
    "expectation_powers",
    "catalan_moment_formula",
    "nc2_moment_sum",
    "DistributionComparison",
    "identically_distributed",
    "FreenessWitness",
    "FreenessReport",
    "freeness_check",
    "SemicircularSystem",
    "embed_free_group_factor",
    "compress_to_vertex",
    "self_adjoint",
]
