import random
from fractions import Fraction

import pytest

from gwp.algebra import (
    DiagonalElement,
    Element,
    adjoint,
    annihilation,
    apply_to_basis,
    creation,
    expectation,
    identity,
    linear_combine,
    make_element,
    multiply,
    projection,
    support,
    trace,
)
from gwp.graphs import enumerate_paths


def random_element(g, rng, max_monomials=4, max_len=2):
    """Random exact element: monomials over words of bounded length."""
    words = enumerate_paths(g, max_len)
    terms = []
    for _ in range(rng.randint(1, max_monomials)):
        u = rng.choice(words)
        compatible = [w for w in words if w.dst == u.dst]
        w = rng.choice(compatible)
        coeff = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
        if coeff:
            terms.append((coeff, u, w))
    return make_element(g, terms) if terms else Element.zero(g)


class TestMakeElement:
    def test_scalar_projection(self, two_loops):
        unit = two_loops.vertex_unit("v")
        el = make_element(two_loops, [(3, unit, unit)])
        assert el.terms == {(unit, unit): 3}

    def test_self_adjoint_generator(self, one_loop):
        w = one_loop.path(["a"])
        el = make_element(
            one_loop,
            [(1, w, one_loop.vertex_unit("v")), (1, one_loop.vertex_unit("v"), w)],
        )
        assert el == creation(w) + annihilation(w)
        assert adjoint(el) == el

    def test_endpoint_mismatch_rejected(self, two_vertex):
        e = two_vertex.path(["e"])
        unit_u = two_vertex.vertex_unit("u")
        with pytest.raises(ValueError, match="zero monomial"):
            make_element(two_vertex, [(1, e, unit_u)])

    def test_merging_and_zero_cleanup(self, one_loop):
        w = one_loop.path(["a"])
        unit = one_loop.vertex_unit("v")
        el = make_element(one_loop, [(2, w, unit), (-2, w, unit)])
        assert el.is_zero()


class TestMultiply:
    def test_annihilation_then_creation_is_range_projection(self, one_loop):
        a = one_loop.path(["a"])
        assert annihilation(a) * creation(a) == projection(one_loop, "v")

    def test_creations_concatenate(self, two_loops):
        a, b = two_loops.path(["a"]), two_loops.path(["b"])
        assert creation(a) * creation(b) == creation(two_loops.path(["a", "b"]))

    def test_inadmissible_product_vanishes(self, two_vertex):
        e = two_vertex.path(["e"])
        assert (creation(e) * creation(e)).is_zero()

    def test_mixed_monomial_reduction(self, two_loops):
        # (C(a)A(b)) (C(b)A(a)) = C(a)A(a): inner pair cancels exactly
        a, b = two_loops.path(["a"]), two_loops.path(["b"])
        lhs = (creation(a) * annihilation(b)) * (creation(b) * annihilation(a))
        assert lhs == creation(a) * annihilation(a)

    def test_associativity_on_random_elements(self, two_loops, embed_graph):
        rng = random.Random(101)
        for g in (two_loops, embed_graph):
            for _ in range(40):
                x = random_element(g, rng)
                y = random_element(g, rng)
                z = random_element(g, rng)
                assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))

    def test_cross_graph_rejected(self, two_loops, one_loop):
        with pytest.raises(ValueError, match="different graphs"):
            multiply(identity(two_loops), identity(one_loop))

    def test_partial_isometry_relation_all_short_words(self, two_loops, embed_graph):
        for g in (two_loops, embed_graph):
            for w in enumerate_paths(g, 3):
                if w.is_vertex_unit:
                    continue
                c, s = creation(w), annihilation(w)
                assert c * s * c == c
                assert s * c * s == s

    def test_vertex_idempotents(self, embed_graph):
        for v in embed_graph.vertices:
            p = projection(embed_graph, v)
            assert p * p == p
            assert adjoint(p) == p


class TestAdjoint:
    def test_swaps_creation_and_annihilation(self, one_loop):
        w = one_loop.path(["a"])
        assert adjoint(creation(w)) == annihilation(w)

    def test_involution_on_random_elements(self, two_loops):
        rng = random.Random(7)
        for _ in range(50):
            x = random_element(two_loops, rng)
            assert adjoint(adjoint(x)) == x

    def test_antimultiplicative(self, two_loops, embed_graph):
        rng = random.Random(13)
        for g in (two_loops, embed_graph):
            for _ in range(30):
                x = random_element(g, rng)
                y = random_element(g, rng)
                assert adjoint(x * y) == adjoint(y) * adjoint(x)


class TestLinearCombine:
    def test_cancellation(self, two_loops):
        x = creation(two_loops.path(["a"]))
        assert linear_combine([1, -1], [x, x]).is_zero()

    def test_numeric_scale(self, one_loop):
        w = one_loop.path(["a"])
        x = creation(w) + annihilation(w)
        scaled = linear_combine([0.7071067811865476], [x])
        unit = one_loop.vertex_unit("v")
        assert scaled.terms[(w, unit)] == pytest.approx(0.7071067811865476)

    def test_merges_projections(self, one_loop):
        p = projection(one_loop, "v")
        assert linear_combine([2, 3], [p, p]) == p.scaled(5)

    def test_length_mismatch(self, one_loop):
        with pytest.raises(ValueError, match="length"):
            linear_combine([1], [identity(one_loop), identity(one_loop)])


class TestExpectation:
    def test_keeps_vertex_terms_only(self, one_loop):
        w = one_loop.path(["a"])
        a = projection(one_loop, "v").scaled(3) + creation(w).scaled(2)
        assert expectation(a) == DiagonalElement(one_loop, {"v": 3})

    def test_reduced_product_is_seen(self, one_loop):
        w = one_loop.path(["a"])
        assert expectation(annihilation(w) * creation(w)) == DiagonalElement(
            one_loop, {"v": 1}
        )

    def test_prefix_projection_has_zero_expectation(self, one_loop):
        # vacuum pairing: C(a)A(a) annihilates the vertex vector
        w = one_loop.path(["a"])
        assert expectation(creation(w) * annihilation(w)).is_zero()

    def test_bimodule_property(self, embed_graph):
        rng = random.Random(23)
        for _ in range(30):
            a = random_element(embed_graph, rng)
            d1 = DiagonalElement(
                embed_graph,
                {v: Fraction(rng.randint(-3, 3)) for v in embed_graph.vertices},
            )
            d2 = DiagonalElement(
                embed_graph,
                {v: Fraction(rng.randint(-3, 3)) for v in embed_graph.vertices},
            )
            lhs = expectation(d1.as_element() * a * d2.as_element())
            rhs = d1 * expectation(a) * d2
            assert lhs == rhs

    def test_fixes_diagonals(self, embed_graph):
        d = DiagonalElement(embed_graph, {"v0": Fraction(1, 2), "w": -2})
        assert expectation(d.as_element()) == d

    def test_positivity_and_norm_identity(self, two_loops, embed_graph):
        rng = random.Random(31)
        for g in (two_loops, embed_graph):
            for _ in range(25):
                a = random_element(g, rng)
                e = expectation(adjoint(a) * a)
                for v in g.vertices:
                    image = apply_to_basis(a, g.vertex_unit(v))
                    norm_sq = sum(c * c for c in image.values())
                    assert e.get(v) == norm_sq
                    assert e.get(v) >= 0


class TestTrace:
    def test_identity_has_trace_one(self, one_loop):
        assert trace(projection(one_loop, "v")) == 1

    def test_squared_generator(self, one_loop):
        w = one_loop.path(["a"])
        x = creation(w) + annihilation(w)
        assert trace(x * x) == 1

    def test_pure_creation_is_traceless(self, one_loop):
        assert trace(creation(one_loop.path(["a"]))) == 0

    def test_requires_one_vertex(self, two_vertex):
        with pytest.raises(ValueError, match="one-vertex"):
            trace(identity(two_vertex))


class TestSupport:
    def test_partition_into_vertex_and_path_parts(self, two_loops):
        a, b = two_loops.path(["a"]), two_loops.path(["b"])
        el = (
            projection(two_loops, "v").scaled(2)
            + creation(a)
            - annihilation(b)
        )
        s = support(el)
        assert s.vertex_part == frozenset({"v"})
        assert s.path_part == frozenset({(a, "plain"), (b, "starred")})

    def test_projection_only(self, one_loop):
        s = support(projection(one_loop, "v"))
        assert s.vertex_part == frozenset({"v"})
        assert s.path_part == frozenset()

    def test_mixed_monomial_rejected(self, two_loops):
        a, b = two_loops.path(["a"]), two_loops.path(["b"])
        with pytest.raises(ValueError, match="mixed"):
            support(creation(a) * annihilation(b))


class TestApplyToBasis:
    def test_creation_on_vacuum(self, one_loop):
        w = one_loop.path(["a"])
        out = apply_to_basis(creation(w), one_loop.vertex_unit("v"))
        assert out == {w: 1}

    def test_annihilation_strips_prefix(self, one_loop):
        a = one_loop.path(["a"])
        aa = one_loop.path(["a", "a"])
        out = apply_to_basis(annihilation(a), aa)
        assert out == {a: 1}

    def test_annihilation_kills_short_words(self, one_loop):
        a = one_loop.path(["a"])
        assert apply_to_basis(annihilation(a), one_loop.vertex_unit("v")) == {}

    def test_composition_consistency(self, two_loops, embed_graph):
        rng = random.Random(47)
        for g in (two_loops, embed_graph):
            words = enumerate_paths(g, 2)
            for _ in range(20):
                a = random_element(g, rng)
                b = random_element(g, rng)
                h = rng.choice(words)
                direct = apply_to_basis(multiply(a, b), h)
                staged: dict = {}
                for mid, c in apply_to_basis(b, h).items():
                    for out, c2 in apply_to_basis(a, mid).items():
                        staged[out] = staged.get(out, 0) + c * c2
                staged = {k: v for k, v in staged.items() if v != 0}
                assert direct == staged


class TestElementProtocol:
    def test_power_zero_is_identity(self, two_loops):
        x = creation(two_loops.path(["a"]))
        assert x ** 0 == identity(two_loops)

    def test_scalar_multiplication_normalizes(self, one_loop):
        p = projection(one_loop, "v")
        assert (Fraction(6, 3) * p).terms == p.scaled(2).terms

    def test_hashable_and_usable_in_sets(self, two_loops):
        x = creation(two_loops.path(["a"]))
        y = creation(two_loops.path(["a"]))
        assert len({x, y}) == 1
