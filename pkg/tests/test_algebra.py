import random

import pytest

from frobkit.algebra import (
    AlgebraMap,
    compose_maps,
    diagonal_map,
    direct_product,
    identity_map,
    localize_principal,
    make_algebra,
    make_map,
    polynomial_extension,
    prime_field,
    quotient_algebra,
    structure_map,
    tensor_product,
)
from frobkit.errors import ContextMismatch, InvalidContext, InvalidModulus, NotAHomomorphism
from frobkit.groebner import Ideal, eliminate, ideal_equal
from frobkit.lemma_suite import random_poly


class TestMakeAlgebra:
    def test_free(self):
        A = make_algebra(2, ["x"])
        assert A.to_str() == "F_2[x]"
        assert not A.is_zero_ring
        assert A.dimension() is None

    def test_quotient(self):
        A = make_algebra(2, ["x"], ["x^2"])
        assert A.dimension() == 2
        assert A.is_zero(A.element("x^2"))

    def test_zero_ring(self):
        A = make_algebra(3, ["x"], ["x", "x+1"])
        assert A.is_zero_ring
        assert A.dimension() == 0

    def test_errors(self):
        with pytest.raises(InvalidModulus):
            make_algebra(4, ["x"])
        with pytest.raises(InvalidContext):
            make_algebra(2, ["x", "x"])


class TestMaps:
    def test_valid(self):
        A = make_algebra(2, ["x"], ["x^2"])
        B = make_algebra(2, ["y"], ["y^4"])
        f = make_map(A, B, ["y^2"])
        assert f.apply(A.element("x+1")) == B.element("y^2+1")

    def test_not_a_homomorphism(self):
        A = make_algebra(2, ["x"], ["x^2"])
        B = make_algebra(2, ["y"])
        with pytest.raises(NotAHomomorphism) as exc:
            make_map(A, B, ["y"])
        assert str(exc.value.remainder) == "y^2"

    def test_wrong_image_count(self):
        A, B = make_algebra(2, ["x"]), make_algebra(2, ["y"])
        with pytest.raises(Exception):
            make_map(A, B, [])

    def test_identity_law(self):
        A = make_algebra(3, ["x", "y"], ["x*y"])
        B = make_algebra(3, ["u"])
        g = make_map(A, B, ["u^2", "0"])
        assert compose_maps(identity_map(A), g) == g
        assert compose_maps(g, identity_map(B)) == g

    def test_composition_substitutes(self):
        T, X, U = make_algebra(3, ["t"]), make_algebra(3, ["x"]), make_algebra(3, ["u"])
        gf = compose_maps(make_map(T, X, ["x^2"]), make_map(X, U, ["u^3"]))
        assert gf.images[0] == U.element("u^6")

    def test_chain_mismatch(self):
        A, B = make_algebra(2, ["x"]), make_algebra(2, ["y"])
        f = make_map(A, B, ["y"])
        with pytest.raises(ContextMismatch):
            compose_maps(f, f)

    def test_equality_after_normal_form(self):
        A = make_algebra(2, ["x"])
        B = make_algebra(2, ["y"], ["y^2+y"])
        assert make_map(A, B, ["y^2"]) == make_map(A, B, ["y"])

    def test_kernel_and_injectivity(self):
        A = make_algebra(2, ["s", "t"])
        B = make_algebra(2, ["x"])
        f = make_map(A, B, ["x^2", "x^3"])
        K = f.kernel()
        assert ideal_equal(K, Ideal(A.ctx, [A.element("s^3+t^2")]))
        assert not f.is_injective()
        assert not f.is_surjective()
        assert make_map(make_algebra(2, ["s"]), B, ["x"]).is_surjective()


class TestConstructions:
    def test_quotient_algebra(self):
        A = make_algebra(2, ["x"])
        Q, q = quotient_algebra(A, [A.element("x^2")])
        assert Q.dimension() == 2 and q.is_surjective()
        Q0, q0 = quotient_algebra(A, [])
        assert Q0 == A
        Z, _ = quotient_algebra(A, [A.ctx.one()])
        assert Z.is_zero_ring

    def test_localization(self):
        A = make_algebra(3, ["x"])
        B, loc = localize_principal(A, "x")
        assert B.names == ("x", "t")
        assert B.is_zero(B.element("x*t-1"))
        N = make_algebra(2, ["x"], ["x^2"])
        Z, _ = localize_principal(N, "x")
        assert Z.is_zero_ring
        one, _ = localize_principal(A, 1)
        assert one.is_zero(one.element("t-1"))

    def test_polynomial_extension(self):
        A = make_algebra(2, ["t"])
        B, inc = polynomial_extension(A, ("t",))
        assert B.names == ("t", "t1")
        assert inc.is_injective()

    def test_tensor_free(self):
        B, C = make_algebra(2, ["u"]), make_algebra(2, ["v"])
        T, iB, iC = tensor_product(structure_map(B), structure_map(C))
        assert T.to_str() == "F_2[u,v]"
        assert iB.source == B and iC.source == C and iB.target == T

    def test_tensor_of_identities_collapses(self):
        A = make_algebra(3, ["x"], ["x^3-x"])
        T, iB, iC = tensor_product(identity_map(A), identity_map(A))
        # the diagonal relation identifies the two copies
        assert T.dimension() == A.dimension() == 3
        assert T.equal(iB.images[0], iC.images[0])

    def test_tensor_gluing(self):
        A = make_algebra(2, ["s"])
        B, C = make_algebra(2, ["u"]), make_algebra(2, ["v"])
        T, _, _ = tensor_product(make_map(A, B, ["u^2"]), make_map(A, C, ["v^2"]))
        want = Ideal(T.ctx, [T.ctx.parse("u^2-v^2")])
        assert ideal_equal(T.relations, want)

    def test_direct_product_of_fields(self):
        P, pB, pC = direct_product(prime_field(2), prime_field(2))
        assert P.dimension() == 2
        assert P.is_zero(P.element("w^2-w"))

    def test_direct_product_dimension(self):
        B = make_algebra(2, ["u"], ["u^2"])
        P, pB, pC = direct_product(B, prime_field(2))
        assert P.dimension() == 3
        assert pB.is_surjective() and pC.is_surjective()

    def test_direct_product_with_zero_ring(self):
        Z = make_algebra(2, ["z"], ["1"])
        C = make_algebra(2, ["v"], ["v^2+v+1"])
        P, _, pC = direct_product(Z, C)
        assert P.dimension() == C.dimension()
        assert pC.is_injective() and pC.is_surjective()

    def test_constant_relations(self):
        # relations with constant terms need the idempotent adjustment
        B = make_algebra(3, ["u"], ["u^2-1"])
        C = make_algebra(3, ["v"], ["v+1"])
        P, pB, pC = direct_product(B, C)
        assert P.dimension() == 3

    @pytest.mark.parametrize("seed", range(6))
    def test_product_kernels_intersect_trivially(self, seed):
        rng = random.Random(seed)
        p = rng.choice([2, 3])
        B = make_algebra(p, ["u"], [f"u^{rng.randint(1, 3)}+{rng.randrange(p)}"])
        C = make_algebra(p, ["v"], [f"v^{rng.randint(1, 2)}"])
        P, pB, pC = direct_product(B, C)
        kb, kc = pB.kernel(), pC.kernel()
        # a ∈ ker pB ∩ ker pC: eliminate the tag variable from the intersection ideal
        ctx = P.ctx
        from frobkit.field_poly import Context

        big = Context(p, ("tag",) + ctx.names)
        tag = big.var(0)
        gens = [tag * g.rename(big, range(1, big.nvars)) for g in kb.generators]
        gens += [(1 - tag) * g.rename(big, range(1, big.nvars)) for g in kc.generators]
        gens += [r.rename(big, range(1, big.nvars)) for r in P.relations.generators]
        inter = eliminate(Ideal(big, gens), ["tag"])
        assert all(P.is_zero(g.rename(ctx, range(ctx.nvars))) for g in inter.generators)

    @pytest.mark.parametrize("seed", range(20))
    def test_tensor_universal_property(self, seed):
        """Compatible pairs out of B and C glue to a map out of the tensor product."""
        rng = random.Random(seed)
        p = rng.choice([2, 3])
        A = make_algebra(p, ["s"])
        B = make_algebra(p, ["u"])
        C = make_algebra(p, ["v"])
        D = make_algebra(p, ["z"])
        a_img = random_poly(rng, D.ctx, 2, 2)
        # u: s -> u^k, v: s -> v^l, and β(u)^k = γ(v)^l = a_img^(kl) keeps the square commutative
        k, l = rng.randint(1, 2), rng.randint(1, 2)
        u = make_map(A, B, [f"u^{k}"])
        v = make_map(A, C, [f"v^{l}"])
        beta = make_map(B, D, [a_img**l])
        gamma = make_map(C, D, [a_img**k])
        assert compose_maps(u, beta) == compose_maps(v, gamma)
        T, iB, iC = tensor_product(u, v)
        glued = AlgebraMap(T, D, list(beta.images) + list(gamma.images))
        assert compose_maps(iB, glued) == beta
        assert compose_maps(iC, glued) == gamma

    def test_diagonal(self):
        A = make_algebra(2, ["s"])
        B, u = polynomial_extension(A, ("x",))
        C, v = quotient_algebra(A, [A.element("s^2")])
        P, pB, pC = direct_product(B, C)
        d = diagonal_map(P, u, v)
        assert compose_maps(d, pB) == u and compose_maps(d, pC) == v
