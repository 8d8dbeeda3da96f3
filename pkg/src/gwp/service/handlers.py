"""Command implementations: one handler per endpoint/subcommand.

Each handler takes a validated request model and returns a Report; the
FastAPI app serializes it as JSON and the CLI renders it as a table or JSON.
Verification failures set row flags rather than raising, so callers can map
them to exit codes or HTTP payloads uniformly.
"""

from __future__ import annotations

from fractions import Fraction

from .. import fock
from ..algebra import Coeff, Element
from ..exprparse import parse_element_expr
from ..freeprob import (
    INV_SQRT2,
    PowerSeries,
    catalan_moment_formula,
    compress_to_vertex,
    embed_free_group_factor,
    freeness_check,
    generating_operator,
    loops_at,
    moment_coefficients,
    nc2_moment_sum,
)
from ..graphs import Graph
from ..noncrossing import moments_to_cumulants
from ..reporting import Report, diag_str, exact_str
from .models import (
    CumulantsRequest,
    EmbedCheckRequest,
    FreenessRequest,
    MomentsRequest,
    RelationsRequest,
    RTransformRequest,
    VerifyCatalanRequest,
)

PAPER_NORMALIZATION_WARNING = (
    "1/sqrt(2) normalization in effect: in the concrete representation the "
    "expectation of C(l)A(l) vanishes, so even moments of order n are "
    "2^(-n/2) times the unit-scale values"
)

SUBPROJECTION_WARNING = (
    "C(w)A(w) is a proper subprojection of the source projection in this "
    "representation; the stated equality C(w)A(w) = P(source) does not hold"
)

MAX_WITNESS_ROWS = 10


def _resolve_vertex(g: Graph, vertex: str | None) -> str:
    if vertex is not None:
        if not g.has_vertex(vertex):
            raise ValueError(f"unknown vertex id {vertex!r}")
        return vertex
    if len(g.vertices) == 1:
        return g.vertices[0]
    raise ValueError("--vertex is required on multi-vertex graphs")


def _resolve_scale(scale: str, paper_normalization: bool) -> tuple[Coeff, bool]:
    s: Coeff = Fraction(scale)
    if isinstance(s, Fraction) and s.denominator == 1:
        s = s.numerator
    if paper_normalization:
        return float(s) * INV_SQRT2, True
    return s, False


def _prepare_element(req) -> tuple[Graph, str, Element, list[str]]:
    g = req.graph.to_graph()
    v = _resolve_vertex(g, req.vertex)
    scale, papered = _resolve_scale(req.scale, req.paper_normalization)
    warnings = [PAPER_NORMALIZATION_WARNING] if papered else []
    if req.expr:
        a = parse_element_expr(req.expr, g)
        if scale != 1:
            a = a.scaled(scale)
    else:
        a = generating_operator(g, v, scale)
    return g, v, a, warnings


def _numeric_moments(a: Element, order: int, v: str) -> list[float]:
    rep = fock.build_rep(a.graph, fock.required_cutoff(a, order))
    m = fock.matrix_of(a, rep)
    x = rep.vacuum_vector(v)
    i = rep.basis.index_of(rep.graph.vertex_unit(v))
    out = []
    for _ in range(order):
        x = m @ x
        out.append(float(x[i]))
    return out


def _exact_and_numeric_rows(
    report: Report,
    labels: list[str],
    exact_vals: list[Coeff] | None,
    numeric_vals: list[float] | None,
) -> None:
    n = len(labels)
    for i in range(n):
        exact = exact_str(exact_vals[i]) if exact_vals is not None else None
        numeric = numeric_vals[i] if numeric_vals is not None else None
        if exact_vals is not None and numeric_vals is not None:
            ok = fock.values_close(float(exact_vals[i]), numeric_vals[i])
        else:
            ok = True
        report.add(labels[i], exact, numeric, ok)


def run_moments(req: MomentsRequest) -> Report:
    g, v, a, warns = _prepare_element(req)
    report = Report(command=f"moments order={req.order} mode={req.mode} vertex={v}")
    for w in warns:
        report.warn(w)
    exact = (
        moment_coefficients(a, req.order, v) if req.mode != "numeric" else None
    )
    numeric = _numeric_moments(a, req.order, v) if req.mode != "symbolic" else None
    _exact_and_numeric_rows(
        report, [f"m_{n}" for n in range(1, req.order + 1)], exact, numeric
    )
    return report


def run_cumulants(req: CumulantsRequest) -> Report:
    g, v, a, warns = _prepare_element(req)
    report = Report(command=f"cumulants order={req.order} mode={req.mode} vertex={v}")
    for w in warns:
        report.warn(w)
    exact = (
        moments_to_cumulants(moment_coefficients(a, req.order, v))
        if req.mode != "numeric"
        else None
    )
    numeric = (
        [float(x) for x in moments_to_cumulants(_numeric_moments(a, req.order, v))]
        if req.mode != "symbolic"
        else None
    )
    _exact_and_numeric_rows(
        report, [f"k_{n}" for n in range(1, req.order + 1)], exact, numeric
    )
    return report


def run_rtransform(req: RTransformRequest) -> Report:
    g, v, a, warns = _prepare_element(req)
    report = Report(command=f"rtransform order={req.order} mode={req.mode} vertex={v}")
    for w in warns:
        report.warn(w)
    exact = (
        moments_to_cumulants(moment_coefficients(a, req.order, v))
        if req.mode != "numeric"
        else None
    )
    numeric = (
        [float(x) for x in moments_to_cumulants(_numeric_moments(a, req.order, v))]
        if req.mode != "symbolic"
        else None
    )
    _exact_and_numeric_rows(
        report, [f"k_{n}" for n in range(1, req.order + 1)], exact, numeric
    )
    series = PowerSeries(coeffs=tuple(exact if exact is not None else numeric))
    report.add("R(z)", str(series), None, report.all_verified)
    return report


def run_verify_catalan(req: VerifyCatalanRequest) -> Report:
    g = req.graph.to_graph()
    v = _resolve_vertex(g, req.vertex)
    scale, papered = _resolve_scale(req.scale, req.paper_normalization)
    n_loops = len(loops_at(g, v))
    if n_loops == 0:
        raise ValueError(f"no loops at vertex {v!r}")
    a = generating_operator(g, v, scale)
    report = Report(
        command=(
            f"verify-catalan max_order={req.max_order} mode={req.mode} "
            f"vertex={v} loops={n_loops}"
        )
    )
    if papered:
        report.warn(PAPER_NORMALIZATION_WARNING)

    closed = [
        scale ** n * catalan_moment_formula(n_loops, n)
        for n in range(1, req.max_order + 1)
    ]
    pairing = [
        scale ** n * nc2_moment_sum(n_loops, n)
        for n in range(1, req.max_order + 1)
    ]
    exact = (
        moment_coefficients(a, req.max_order, v) if req.mode != "numeric" else None
    )
    numeric = (
        _numeric_moments(a, req.max_order, v) if req.mode != "symbolic" else None
    )
    for n in range(1, req.max_order + 1):
        i = n - 1
        ok = True
        shown_exact = None
        if exact is not None:
            if isinstance(closed[i], float) or isinstance(exact[i], float):
                ok = ok and fock.values_close(float(closed[i]), float(exact[i]))
                ok = ok and fock.values_close(float(pairing[i]), float(exact[i]))
            else:
                ok = ok and exact[i] == closed[i] == pairing[i]
            shown_exact = exact_str(exact[i])
        shown_numeric = None
        if numeric is not None:
            ok = ok and fock.values_close(float(closed[i]), numeric[i])
            shown_numeric = numeric[i]
        report.add(
            f"tr(T^{n}) == {exact_str(closed[i])}", shown_exact, shown_numeric, ok
        )
    return report


def run_freeness(req: FreenessRequest) -> Report:
    g = req.graph.to_graph()
    w1 = g.word(req.w1)
    w2 = g.word(req.w2)
    res = freeness_check(w1, w2, req.scan_order)
    report = Report(
        command=f"freeness w1={req.w1} w2={req.w2} scan_order={req.scan_order}"
    )
    report.add(
        f"diagram_distinct({req.w1}, {req.w2})",
        "true" if res.diagram_distinct else "false",
        None,
        res.diagram_distinct,
    )
    if res.witnesses:
        for wit in res.witnesses[:MAX_WITNESS_ROWS]:
            report.add(
                f"k{wit.order}({', '.join(wit.labels)})",
                diag_str(wit.value),
                None,
                False,
            )
        if len(res.witnesses) > MAX_WITNESS_ROWS:
            report.warn(
                f"{len(res.witnesses) - MAX_WITNESS_ROWS} further nonzero "
                "mixed cumulants suppressed"
            )
    else:
        report.add(
            f"mixed-cumulant scan to order {req.scan_order}",
            f"all {res.scanned} scanned cumulants vanish",
            None,
            True,
        )
    if not res.consistent:
        report.warn(
            "diagram-distinct words produced a nonzero mixed cumulant; this "
            "contradicts the freeness criterion and should be reported"
        )
    return report


def run_relations(req: RelationsRequest) -> Report:
    g = req.graph.to_graph()
    rep = fock.build_rep(g, req.cutoff)
    checks = fock.verify_relations(rep, req.max_word_len)
    report = Report(
        command=f"relations cutoff={req.cutoff} dim={rep.dim}"
    )
    for chk in checks:
        report.add(chk.name, None, chk.deviation, chk.ok)
        if chk.note:
            report.warn(SUBPROJECTION_WARNING)
    return report


def run_embed_check(req: EmbedCheckRequest) -> Report:
    g = req.graph.to_graph()
    v = _resolve_vertex(g, req.vertex)
    available = loops_at(g, v)
    n_loops = req.loops if req.loops is not None else len(available)
    system = embed_free_group_factor(g, v, n_loops, verify_order=req.max_order)
    report = Report(
        command=(
            f"embed-check vertex={v} loops={n_loops} max_order={req.max_order} "
            f"compress_order={req.compress_order}"
        )
    )
    report.add(
        f"loops at {v}",
        f"{len(available)} available, using {n_loops}",
        None,
        True,
    )
    for n, diag, ok in system.moment_checks:
        expected = catalan_moment_formula(n_loops, n)
        report.add(
            f"E(T^{n}) == {expected}*V({v})" if expected else f"E(T^{n}) == 0",
            diag_str(diag),
            None,
            ok,
        )
    for j, gen in enumerate(system.generators, start=1):
        power = gen
        for k in range(1, req.compress_order + 1):
            ok = compress_to_vertex(power, v) == power
            report.add(
                f"x_{j}^{k} == V({v})*x_{j}^{k}*V({v})",
                "true" if ok else "false",
                None,
                ok,
            )
            power = power * gen
    return report


COMMANDS = {
    "moments": (MomentsRequest, run_moments),
    "cumulants": (CumulantsRequest, run_cumulants),
    "rtransform": (RTransformRequest, run_rtransform),
    "verify-catalan": (VerifyCatalanRequest, run_verify_catalan),
    "freeness": (FreenessRequest, run_freeness),
    "relations": (RelationsRequest, run_relations),
    "embed-check": (EmbedCheckRequest, run_embed_check),
}
