"""Acceptance suite: one test per criterion, each printing a PASS line.

Exact identities are asserted in rational/integer arithmetic; the numeric
oracle is held to relative 1e-9.  Runtime expectations are asserted with a 3x
headroom so a loaded machine does not flake the suite.
"""

import itertools
import json
import random
import time
from fractions import Fraction

import pytest

from gwp.algebra import (
    DiagonalElement,
    annihilation,
    creation,
    trace,
)
from gwp.cli import main as cli_main
from gwp.fock import build_rep, values_close, verify_relations, vacuum_moment
from gwp.freeprob import (
    catalan_moment_formula,
    compress_to_vertex,
    embed_free_group_factor,
    freeness_check,
    generating_operator,
    moment_coefficients,
    nc2_moment_sum,
    r_transform,
    semicircular,
)
from gwp.graphs import build_graph
from gwp.noncrossing import (
    NCPartition,
    catalan,
    cumulants_to_moments,
    enumerate_nc,
    enumerate_nc_pairings,
    kreweras,
    mixed_cumulant,
    mobius_to_top,
    moments_to_cumulants,
    theorem13_factor,
)

MAX_ORDER = 12
LOOP_COUNTS = (1, 2, 3)


def _ok(criterion: int, message: str) -> None:
    print(f"criterion {criterion:02d} PASS - {message}")


def loop_graph(n_loops: int):
    return build_graph(["v"], [(f"l{j}", "v", "v") for j in range(1, n_loops + 1)])


@pytest.fixture(scope="module")
def exact_moments():
    """Criterion 1's symbolic moment tables, reused by criteria 2 and 3."""
    tables = {}
    t0 = time.monotonic()
    for n_loops in LOOP_COUNTS:
        g = loop_graph(n_loops)
        t = generating_operator(g, "v")
        tables[n_loops] = moment_coefficients(t, MAX_ORDER)
    return tables, time.monotonic() - t0


def test_criterion_01_catalan_moment_law(exact_moments):
    tables, elapsed = exact_moments
    for n_loops in LOOP_COUNTS:
        ms = tables[n_loops]
        for n in range(1, MAX_ORDER + 1):
            want = catalan_moment_formula(n_loops, n)
            assert ms[n - 1] == want, (n_loops, n)
            assert isinstance(ms[n - 1], int)
    assert elapsed < 30.0, f"symbolic path took {elapsed:.1f}s"
    _ok(1, f"tr(T^n) = c(n/2) N^(n/2) exactly, N in {LOOP_COUNTS}, "
           f"n <= {MAX_ORDER} ({elapsed:.2f}s)")


def test_criterion_02_numeric_oracle_agreement(exact_moments):
    tables, _ = exact_moments
    t0 = time.monotonic()
    for n_loops in LOOP_COUNTS:
        g = loop_graph(n_loops)
        t = generating_operator(g, "v")
        rep = build_rep(g, MAX_ORDER)
        for n in range(1, MAX_ORDER + 1):
            num = vacuum_moment(t, n, rep, "v")
            assert values_close(float(tables[n_loops][n - 1]), num), (n_loops, n)
    elapsed = time.monotonic() - t0
    assert elapsed < 90.0, f"numeric path took {elapsed:.1f}s"
    _ok(2, f"truncated-representation moments within 1e-9, basis up to "
           f"3^{MAX_ORDER + 1} words ({elapsed:.2f}s)")


def test_criterion_03_pairing_route(exact_moments):
    tables, _ = exact_moments
    for n_loops in LOOP_COUNTS:
        for n in range(2, MAX_ORDER + 1, 2):
            pairing = sum(
                n_loops ** p.block_count() for p in enumerate_nc_pairings(n)
            )
            assert pairing == tables[n_loops][n - 1], (n_loops, n)
            assert pairing == nc2_moment_sum(n_loops, n)
    _ok(3, f"sum over pair partitions of N^|pi| matches, even n <= {MAX_ORDER}")


def test_criterion_04_r_transform():
    for n_loops in LOOP_COUNTS:
        g = loop_graph(n_loops)
        series = r_transform(generating_operator(g, "v"), 10)
        for n in range(1, 11):
            assert series.coeff(n) == (n_loops if n == 2 else 0), (n_loops, n)
    _ok(4, "R-transform of the generating operator is N z^2 exactly, order 10")


def test_criterion_05_semicircularity():
    # one-vertex case and a loop living inside a larger graph
    cases = [
        (loop_graph(1), "l1", "v"),
        (
            build_graph(
                ["v0", "u", "w"],
                [("l1", "v0", "v0"), ("l2", "v0", "v0"),
                 ("e1", "u", "v0"), ("e2", "v0", "w")],
            ),
            "l1",
            "v0",
        ),
    ]
    for g, loop, base in cases:
        x = semicircular(g, loop)
        for n in range(1, 9):
            got = mixed_cumulant([x] * n)
            want = DiagonalElement(g, {base: 1} if n == 2 else {})
            assert got == want, (loop, n)
    _ok(5, "free cumulants k1..k8 of a loop generator are (0,1,0,...,0)*P(range)")


def test_criterion_06_freeness_and_witness():
    g = loop_graph(2)
    wa, wb = g.path(["l1"]), g.path(["l2"])
    gens = {
        "l1": (creation(wa), annihilation(wa)),
        "l2": (creation(wb), annihilation(wb)),
    }
    checked = 0
    for n in range(2, 7):
        for letters in itertools.product(("l1", "l2"), repeat=n):
            if len(set(letters)) < 2:
                continue
            for flavors in itertools.product((0, 1), repeat=n):
                factors = [gens[l][f] for l, f in zip(letters, flavors)]
                assert mixed_cumulant(factors).is_zero(), (letters, flavors)
                checked += 1
    # semicircular combinations across the two loops
    xs = {"l1": semicircular(g, "l1"), "l2": semicircular(g, "l2")}
    for n in range(2, 7):
        for letters in itertools.product(("l1", "l2"), repeat=n):
            if len(set(letters)) < 2:
                continue
            assert mixed_cumulant([xs[l] for l in letters]).is_zero()
            checked += 1

    # negative witness: a loop against its square
    g2 = build_graph(["v"], [("a", "v", "v"), ("b", "v", "v")])
    waa = g2.path(["a", "a"])
    direct = mixed_cumulant(
        [annihilation(waa), creation(g2.path(["a"])) * creation(g2.path(["a"]))]
    )
    assert direct == DiagonalElement(g2, {"v": 1})
    scan = freeness_check(g2.path(["a"]), waa, scan_order=2)
    assert not scan.diagram_distinct
    hits = [
        w for w in scan.witnesses
        if w.labels == ("Ls(a)*Ls(a)", "L(a)*L(a)") and w.order == 2
    ]
    assert hits and hits[0].value == DiagonalElement(g2, {"v": 1})
    _ok(6, f"{checked} mixed cumulants across distinct loops vanish (orders <= 6); "
           "witness k2 = 1 reported for (a, aa)")


def _owner(p: NCPartition) -> tuple[int, ...]:
    owner = [0] * (p.n + 1)
    for bi, b in enumerate(p.blocks):
        for x in b:
            owner[x] = bi
    return tuple(owner)


def _coarser_table(parts):
    """For each partition index, the indices of all strictly coarser ones."""
    owners = [_owner(p) for p in parts]
    blocks = [p.blocks for p in parts]
    out = []
    for i, p in enumerate(parts):
        chain = []
        for j, q in enumerate(parts):
            if i == j or len(blocks[j]) >= len(blocks[i]):
                continue
            qo = owners[j]
            if all(
                all(qo[x] == qo[b[0]] for x in b[1:]) for b in blocks[i]
            ):
                chain.append(j)
        out.append(chain)
    return out


def test_criterion_07_nc_lattice_suite():
    for n in range(1, MAX_ORDER + 1):
        assert len(enumerate_nc(n)) == catalan(n), n

    for n in range(1, 11):
        for p in enumerate_nc(n):
            assert p.block_count() + kreweras(p).block_count() == n + 1

    for n in range(1, 9):
        parts = enumerate_nc(n)
        coarser = _coarser_table(parts)
        mus = [mobius_to_top(p) for p in parts]
        full_index = next(
            i for i, p in enumerate(parts) if p.block_count() == 1
        )
        # defining identity of the Moebius function
        for i, p in enumerate(parts):
            total = mus[i] + sum(mus[j] for j in coarser[i])
            assert total == (1 if i == full_index else 0), (n, p)
        # recursion values agree with the Kreweras factorization
        order = sorted(range(len(parts)), key=lambda i: len(parts[i].blocks))
        mu_rec = {}
        for i in order:
            mu_rec[i] = (1 if i == full_index else 0) - sum(
                mu_rec[j] for j in coarser[i]
            )
            assert mu_rec[i] == mus[i], (n, parts[i])
    _ok(7, f"|NC(n)| = catalan(n) to n={MAX_ORDER}; Moebius identity and "
           "recursion to n=8; Kreweras size identity to n=10")


def test_criterion_08_transform_inversion():
    rng = random.Random(20260808)
    for trial in range(100):
        ms = [
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(8)
        ]
        assert cumulants_to_moments(moments_to_cumulants(ms)) == ms, trial
        assert moments_to_cumulants(cumulants_to_moments(ms)) == ms, trial
    _ok(8, "moments <-> cumulants round trip is the identity on 100 random "
           "rational sequences of length 8")


def test_criterion_09_cumulant_factorization():
    g = loop_graph(2)
    words = {
        "l1": g.path(["l1"]),
        "l2": g.path(["l2"]),
        "l1l1": g.path(["l1", "l1"]),
    }
    tuples = []
    for w1, w2 in itertools.product(words.values(), repeat=2):
        for f1, f2 in itertools.product(("plain", "starred"), repeat=2):
            tuples.append([(w1, f1), (w2, f2)])
    embed = build_graph(
        ["v0", "u", "w"],
        [("l1", "v0", "v0"), ("e1", "u", "v0"), ("e2", "v0", "w")],
    )
    for flavors in itertools.product(("plain", "starred"), repeat=2):
        tuples.append(
            [(embed.path(["e1"]), flavors[0]), (embed.path(["e1"]), flavors[1])]
        )
    w = words["l1"]
    z = words["l2"]
    tuples.extend(
        [
            [(w, "starred"), (w, "plain"), (w, "starred"), (w, "plain")],
            [(w, "plain"), (w, "starred"), (w, "plain"), (w, "starred")],
            [(w, "starred"), (w, "plain"), (z, "starred"), (z, "plain")],
            [(w, "plain"), (z, "plain"), (z, "starred"), (w, "starred")],
            [(w, "starred"), (z, "plain"), (z, "starred"), (w, "plain")],
            [(w, "plain"), (w, "plain"), (w, "starred"), (w, "starred")],
            [(words["l1l1"], "starred"), (w, "plain"), (w, "plain")],
            [(w, "starred"), (w, "starred"), (words["l1l1"], "plain")],
        ]
    )
    assert len(tuples) >= 20
    anomalies = 0
    for tup in tuples:
        res = theorem13_factor(tup)
        assert res.identity_holds, tup
        assert res.cumulant == res.product_expectation.scaled(res.mu)
        anomalies += len(res.anomalous)
    assert anomalies == 0
    _ok(9, f"cumulant = mu * E(product) exactly on {len(tuples)} generator "
           "tuples of length <= 4")


def test_criterion_10_embedding():
    g = build_graph(
        ["v0", "u", "w"],
        [("l1", "v0", "v0"), ("l2", "v0", "v0"),
         ("e1", "u", "v0"), ("e2", "v0", "w")],
    )
    system = embed_free_group_factor(g, "v0", 2, verify_order=8)
    for n, diag, ok in system.moment_checks:
        assert ok, n
        if n % 2 == 0:
            want = catalan(n // 2) * 2 ** (n // 2)
            assert diag == DiagonalElement(g, {"v0": want})
        else:
            assert diag.is_zero()
    for j, x in enumerate(system.generators, start=1):
        power = x
        for k in range(1, 7):
            assert compress_to_vertex(power, "v0") == power, (j, k)
            power = power * x
    _ok(10, "E(T^n) = c(n/2) 2^(n/2) P(v0) on the 3-vertex host, n <= 8; "
            "compression identity to k = 6")


def test_criterion_11_operator_relations():
    g = build_graph(["v"], [("a", "v", "v"), ("b", "v", "v")])
    checks = verify_relations(build_rep(g, 5))
    by_name = {c.name: c for c in checks}
    exact_names = [
        "A(w)C(w) = P(range w) on interior columns",
        "C(w)A(w)C(w) = C(w) on interior columns",
        "P(v) self-adjoint idempotent",
        "C(w)A(w) idempotent and self-adjoint",
    ]
    for name in exact_names:
        assert by_name[name].deviation == 0.0, name
        assert by_name[name].ok
    sub = by_name["C(w)A(w) <= P(source w) (subprojection)"]
    assert sub.ok and sub.note
    _ok(11, "generator relations exact on interior columns; prefix projection "
            "verified as a subprojection (documented deviation)")


def test_criterion_12_traciality_shadow():
    g = loop_graph(2)
    gens = [semicircular(g, "l1"), semicircular(g, "l2")]
    rng = random.Random(424242)

    def word(degree: int):
        el = gens[rng.randrange(2)]
        for _ in range(degree - 1):
            el = el * gens[rng.randrange(2)]
        return el

    for trial in range(200):
        dp = rng.randint(1, 5)
        dq = rng.randint(1, 6 - dp)
        p, q = word(dp), word(dq)
        assert trace(p * q) == trace(q * p), trial
    _ok(12, "trace(pq) = trace(qp) exactly on 200 random generator words of "
            "total degree <= 6")


def _run_cli_bytes(capsys, argv) -> tuple[int, bytes]:
    code = cli_main(argv)
    out = capsys.readouterr().out
    return code, out.encode()


def test_criterion_13_cli_end_to_end(capsys, graphs_dir):
    runs = {
        "verify-catalan": [
            "verify-catalan", "--graph", str(graphs_dir / "g2loops.json"),
            "--vertex", "v", "--max-order", "8", "--json",
        ],
        "rtransform": [
            "rtransform", "--graph", str(graphs_dir / "g3loops.json"),
            "--vertex", "v", "--order", "10", "--json",
        ],
        "freeness": [
            "freeness", "--graph", str(graphs_dir / "g2loops.json"),
            "--w1", "a", "--w2", "b", "--scan-order", "4", "--json",
        ],
        "embed-check": [
            "embed-check", "--graph", str(graphs_dir / "gembed.json"),
            "--vertex", "v0", "--loops", "2", "--max-order", "8", "--json",
        ],
    }
    for name, argv in runs.items():
        code1, out1 = _run_cli_bytes(capsys, argv)
        code2, out2 = _run_cli_bytes(capsys, argv)
        assert code1 == 0, name
        assert code2 == 0, name
        assert out1 == out2, f"{name} output not byte-stable"
        payload = json.loads(out1)
        assert payload["rows"], name
    _ok(13, "verify-catalan, rtransform, freeness, embed-check all exit 0 "
            "with byte-stable JSON")
