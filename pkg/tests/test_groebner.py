import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from frobkit.algebra import identity_map, make_algebra, make_map
from frobkit.errors import BudgetExceeded, ContextMismatch
from frobkit.field_poly import GREVLEX, LEX, Context, Poly
from frobkit.frobenius import image_spans
from frobkit.groebner import (
    Ideal,
    buchberger_criterion,
    check_certificate,
    eliminate,
    groebner_basis,
    ideal_contains,
    ideal_equal,
    module_finiteness,
    normal_form,
)


def ideal(p, names, *gens):
    ctx = Context(p, tuple(names))
    return Ideal(ctx, [ctx.parse(g) for g in gens])


def gb_strings(G, order=None):
    return sorted(g.to_str(order or G.order) for g in G.elements)


def sympy_gb(I, order):
    gens = sympy.symbols(I.ctx.names)
    exprs = [sympy.sympify(g.to_str(), locals=dict(zip(I.ctx.names, gens))) for g in I.generators]
    G = sympy.groebner(exprs, *gens, order=order, modulus=I.ctx.p)
    out = set()
    for g in G.exprs:
        terms = sympy.Poly(g, *gens, modulus=I.ctx.p).terms()
        out.add(Poly(I.ctx, {m: int(c) % I.ctx.p for m, c in terms}))
    return out


class TestExamples:
    def test_lex_example(self):
        I = ideal(2, "xy", "x^2-y", "x*y-1")
        G = groebner_basis(I, LEX)
        ctx = I.ctx
        assert set(G.elements) == {ctx.parse("x+y^2"), ctx.parse("y^3+1")}
        assert set(G.elements) == sympy_gb(I, "lex")

    def test_zero_ideal(self):
        ctx = Context(3, ("x",))
        G = groebner_basis(Ideal(ctx, [ctx.zero()]))
        assert len(G) == 0
        assert not G.is_unit()

    def test_unit_ideal(self):
        I = ideal(5, "x", "x", "x+1")
        G = groebner_basis(I)
        assert G.is_unit()
        assert [g.to_str() for g in G.elements] == ["1"]

    def test_normal_form_examples(self):
        I = ideal(2, "xy", "x^2-y", "x*y-1")
        G = groebner_basis(I, LEX)
        ctx = I.ctx
        assert normal_form(ctx.parse("y^3"), G) == ctx.one()
        assert normal_form(ctx.parse("x^2*y - y^2"), G).is_zero()
        assert normal_form(ctx.one(), G) == ctx.one()

    def test_ideal_equal_examples(self):
        ctx = Context(2, ("x", "y"))
        P = ctx.parse
        assert ideal_equal(Ideal(ctx, [P("x")]), Ideal(ctx, [P("x"), P("x^2")]))
        assert not ideal_equal(Ideal(ctx, [P("x")]), Ideal(ctx, [P("x^2")]))
        assert ideal_equal(Ideal(ctx, [P("x+y"), P("y")]), Ideal(ctx, [P("x"), P("y")]))

    def test_ideal_equal_needs_same_context(self):
        a = Ideal(Context(2, ("x",)), [])
        b = Ideal(Context(2, ("y",)), [])
        with pytest.raises(ContextMismatch):
            ideal_equal(a, b)

    def test_eliminate_examples(self):
        I = ideal(3, ["t", "x"], "t-x^2")
        E = eliminate(I, ["t"])
        assert E.ctx.names == ("x",) and len(E) == 0
        I = ideal(5, "xyz", "y-x^2", "z-x^3")
        E = eliminate(I, ["x"])
        ctx = E.ctx
        assert ideal_equal(E, Ideal(ctx, [ctx.parse("z^2-y^3")]))
        I = ideal(2, "xy", "1")
        E = eliminate(I, ["x"])
        assert ideal_equal(E, Ideal(E.ctx, [E.ctx.one()]))

    def test_budget(self):
        I = ideal(7, "xyz", "x^3*y+z^2+1", "y^3*z+x^2+2", "z^3*x+y^2+3")
        with pytest.raises(BudgetExceeded):
            groebner_basis(I, budget=1)


class TestOracle:
    @pytest.mark.parametrize("seed", range(12))
    def test_against_sympy(self, seed):
        rng = random.Random(seed)
        p = rng.choice([2, 3, 5])
        ctx = Context(p, ("x", "y", "z")[: rng.randint(2, 3)])
        gens = []
        for _ in range(rng.randint(1, 3)):
            terms = {
                tuple(rng.randint(0, 2) for _ in ctx.names): rng.randrange(1, p)
                for _ in range(rng.randint(1, 3))
            }
            gens.append(Poly(ctx, terms))
        I = Ideal(ctx, gens)
        for order, name in ((LEX, "lex"), (GREVLEX, "grevlex")):
            assert set(groebner_basis(I, order).elements) == sympy_gb(I, name)

    @pytest.mark.parametrize("seed", range(6))
    def test_elimination_against_sympy(self, seed):
        rng = random.Random(100 + seed)
        p = rng.choice([2, 3])
        ctx = Context(p, ("t", "x", "y"))
        gens = [
            ctx.parse("x") - Poly(ctx, {(rng.randint(1, 3), 0, 0): 1, (0, 0, 0): rng.randrange(p)}),
            ctx.parse("y") - Poly(ctx, {(rng.randint(1, 3), 0, 0): 1}),
        ]
        I = Ideal(ctx, gens)
        E = eliminate(I, ["t"])
        full = sympy_gb(I, "lex")  # lex t > x > y eliminates t
        want = [Poly(E.ctx, {m[1:]: c for m, c in g.terms.items()}) for g in full if all(m[0] == 0 for m in g.terms)]
        assert ideal_equal(E, Ideal(E.ctx, want))


polys2 = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(1, 4), min_size=1, max_size=3
)


class TestProperties:
    @given(st.lists(polys2, min_size=1, max_size=3), st.randoms(use_true_random=False))
    def test_unique_reduced_basis_under_shuffles(self, gens, rnd):
        ctx = Context(5, ("x", "y"))
        gs = [Poly(ctx, g) for g in gens]
        G1 = groebner_basis(Ideal(ctx, gs))
        rnd.shuffle(gs)
        gs = gs + [gs[0] * ctx.parse("x+1")]
        G2 = groebner_basis(Ideal(ctx, gs))
        assert G1.elements == G2.elements
        assert buchberger_criterion(G1)
        # reduced: monic and no term divisible by another leading monomial
        lms = G1.leading_monomials
        for g, lm in zip(G1.elements, lms):
            assert g.leading_coefficient(G1.order) == 1
            for m in g.terms:
                for other in lms:
                    if other != lm:
                        assert not all(a <= b for a, b in zip(other, m))

    @given(st.lists(polys2, min_size=1, max_size=2), polys2)
    def test_normal_form_idempotent_and_congruent(self, gens, f):
        ctx = Context(3, ("x", "y"))
        I = Ideal(ctx, [Poly(ctx, g) for g in gens])
        G = groebner_basis(I)
        f = Poly(ctx, f)
        r = normal_form(f, G)
        assert normal_form(r, G) == r
        assert G.contains(f - r)

    def test_contains(self):
        I = ideal(2, "xy", "x^2", "y")
        J = ideal(2, "xy", "x^2*y+x^4")
        assert ideal_contains(I, J)
        assert not ideal_contains(J, I)


class TestModuleFiniteness:
    def test_square_map(self):
        A, B = make_algebra(2, ["t"]), make_algebra(2, ["x"])
        v = module_finiteness(make_map(A, B, ["x^2"]))
        assert v.finite and v.outcome == "finite"
        assert [str(g) for g in v.certificate.generators] == ["1", "x"]
        assert check_certificate(v.certificate)

    def test_negative(self):
        A, B = make_algebra(2, ["t"]), make_algebra(2, ["x", "y"])
        v = module_finiteness(make_map(A, B, ["x"]))
        assert not v.finite and v.outcome == "infinite"
        assert v.witness_variable == "y"
        # no pure power of y leads in the block basis
        yi = B.names.index("y")
        for lm in v.basis.leading_monomials:
            pure_y = lm[yi] and not any(lm[:yi] + lm[yi + 1:])
            assert not pure_y

    @pytest.mark.parametrize("spec", [(2, ["x"], []), (3, ["x", "y"], ["x*y"]), (5, ["u"], ["u^3"])])
    def test_identity(self, spec):
        A = make_algebra(*spec)
        v = module_finiteness(identity_map(A))
        assert v.finite
        assert [str(g) for g in v.certificate.generators] == ["1"]

    def test_zero_ring_target(self):
        A, Z = make_algebra(3, ["x"]), make_algebra(3, ["y"], ["1"])
        v = module_finiteness(make_map(A, Z, ["0"]))
        assert v.finite and v.certificate.generators == []

    @pytest.mark.parametrize("seed", range(10))
    def test_finite_dimensional_targets_span(self, seed):
        """Finite-dimensional targets: always finite, and the generators span by linear algebra."""
        rng = random.Random(seed)
        p = rng.choice([2, 3])
        B = make_algebra(p, ["x", "y"], [f"x^{rng.randint(2, 3)}", f"y^{rng.randint(1, 3)}", "x*y^2"])
        A = make_algebra(p, ["s"])
        img = rng.choice(["x", "y", "x+y", "x^2", "x*y+y", "0"])
        f = make_map(A, B, [img])
        v = module_finiteness(f)
        assert v.finite
        assert check_certificate(v.certificate)
        assert image_spans(f, B.dimension())

    def test_tampered_certificate_rejected(self):
        A, B = make_algebra(3, ["t"]), make_algebra(3, ["x"])
        v = module_finiteness(make_map(A, B, ["x^3"]))
        cert = v.certificate
        key = next(iter(cert.expansions))
        l, c = next(iter(cert.expansions[key].items()))
        cert.expansions[key] = {l: c + 1}
        assert not check_certificate(cert)
