"""Finitely presented F_p-algebras, their homomorphisms and standard constructions."""

from __future__ import annotations

from .errors import ContextMismatch, IllFormedMap, NotAHomomorphism
from .field_poly import GREVLEX, Context, Poly
from .groebner import (
    DEFAULT_BUDGET,
    GroebnerBasis,
    Ideal,
    eliminate,
    graph_basis,
    graph_ring,
    groebner_basis,
    normal_form,
)


class PresentedAlgebra:
    """``F_p[x_1..x_n] / I`` with its reduced grevlex Gröbner basis computed up front."""

    def __init__(self, ctx: Context, relations=(), provenance: str = "base", budget: int = DEFAULT_BUDGET):
        if not isinstance(relations, Ideal):
            relations = Ideal(ctx, relations)
        if relations.ctx != ctx:
            raise ContextMismatch("relations live in a different context")
        self.ctx = ctx
        self.relations = relations
        self.provenance = provenance
        self.gb: GroebnerBasis = groebner_basis(relations, GREVLEX, budget)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def names(self) -> tuple:
        return self.ctx.names

    @property
    def nvars(self) -> int:
        return self.ctx.nvars

    @property
    def is_zero_ring(self) -> bool:
        return self.gb.is_unit()

    def element(self, value) -> Poly:
        return self.reduce(self.ctx.coerce(value))

    def gens(self) -> list:
        return self.ctx.gens()

    def reduce(self, f: Poly) -> Poly:
        return normal_form(f, self.gb)

    def is_zero(self, f) -> bool:
        return not self.reduce(self.ctx.coerce(f))

    def equal(self, a, b) -> bool:
        return self.is_zero(self.ctx.coerce(a) - self.ctx.coerce(b))

    def standard_monomials(self, max_degree=None):
        return self.gb.standard_monomials(max_degree)

    def dimension(self):
        """F_p-dimension, or ``None`` when infinite."""
        std = self.gb.standard_monomials()
        return None if std is None else len(std)

    def __eq__(self, other):
        return (
            isinstance(other, PresentedAlgebra)
            and self.ctx == other.ctx
            and self.gb.elements == other.gb.elements
        )

    def __hash__(self):
        return hash((self.ctx, self.gb.elements))

    def to_str(self, order=GREVLEX) -> str:
        ring = f"F_{self.p}[{','.join(self.names)}]" if self.names else f"F_{self.p}"
        if not self.relations.generators:
            return ring
        return f"{ring}/({', '.join(g.to_str(order) for g in self.relations.generators)})"

    def __repr__(self):
        return f"<PresentedAlgebra {self.to_str()}>"


def make_algebra(p: int, vars=(), rels=(), provenance: str = "base", budget: int = DEFAULT_BUDGET) -> PresentedAlgebra:
    ctx = Context(p, tuple(vars))
    return PresentedAlgebra(ctx, [ctx.coerce(r) for r in rels], provenance, budget)


class AlgebraMap:
    """Homomorphism given by one target element per source variable.

    Construction checks that every source relation maps to zero.
    """

    def __init__(self, source: PresentedAlgebra, target: PresentedAlgebra, images, check: bool = True):
        if source.p != target.p:
            raise ContextMismatch(f"characteristics {source.p} and {target.p} differ")
        images = list(images)
        if len(images) != source.nvars:
            raise IllFormedMap(
                f"{len(images)} images given for {source.nvars} source variables"
            )
        self.source = source
        self.target = target
        self.images = tuple(target.reduce(target.ctx.coerce(v)) for v in images)
        if check:
            for r in source.relations.generators:
                rem = self.apply(r)
                if rem:
                    raise NotAHomomorphism(r, rem)

    def apply(self, f) -> Poly:
        f = self.source.ctx.coerce(f)
        return f.substitute(self.images, self.target.ctx, reduce=self.target.reduce)

    __call__ = apply

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraMap)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def kernel(self, budget: int = DEFAULT_BUDGET) -> Ideal:
        """Kernel as an ideal of the source's polynomial ring (contains the source relations)."""
        gr = graph_ring(self)
        gens = [gr.from_target(g) for g in self.target.gb.elements]
        for j, img in enumerate(self.images):
            gens.append(gr.ctx.var(gr.ntarget + j) - gr.from_target(img))
        elim = eliminate(Ideal(gr.ctx, gens), range(gr.ntarget), budget)
        src = self.source.ctx
        return Ideal(src, [Poly(src, g.terms) for g in elim.generators])

    def is_injective(self, budget: int = DEFAULT_BUDGET) -> bool:
        ker = self.kernel(budget)
        return all(self.source.is_zero(g) for g in ker.generators)

    def preimage(self, f, budget: int = DEFAULT_BUDGET):
        """A source element mapping to ``f``, or ``None`` if ``f`` is not in the image."""
        gr, G = graph_basis(self, budget)
        nf = normal_form(gr.from_target(self.target.ctx.coerce(f)), G)
        n = gr.ntarget
        if any(any(m[:n]) for m in nf.terms):
            return None
        return self.source.reduce(Poly(self.source.ctx, {m[n:]: c for m, c in nf.terms.items()}))

    def is_surjective(self, budget: int = DEFAULT_BUDGET) -> bool:
        return all(self.preimage(y, budget) is not None for y in self.target.gens())

    def to_str(self, order=GREVLEX) -> str:
        pairs = ", ".join(
            f"{n} -> {img.to_str(order)}" for n, img in zip(self.source.names, self.images)
        )
        return "{" + pairs + "}"

    def __repr__(self):
        return f"<AlgebraMap {self.source.to_str()} -> {self.target.to_str()} {self.to_str()}>"


def make_map(A: PresentedAlgebra, B: PresentedAlgebra, images) -> AlgebraMap:
    return AlgebraMap(A, B, images)


def identity_map(A: PresentedAlgebra) -> AlgebraMap:
    return AlgebraMap(A, A, A.gens())


def structure_map(B: PresentedAlgebra) -> AlgebraMap:
    """The unique map ``F_p -> B``."""
    return AlgebraMap(prime_field(B.p), B, [])


def prime_field(p: int) -> PresentedAlgebra:
    return make_algebra(p, (), ())


def compose_maps(f: AlgebraMap, g: AlgebraMap) -> AlgebraMap:
    """``g ∘ f``."""
    if f.target != g.source:
        raise ContextMismatch("target of the first map is not the source of the second")
    return AlgebraMap(f.source, g.target, [g.apply(v) for v in f.images])


def fresh_name(taken, base: str) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def quotient_algebra(A: PresentedAlgebra, I) -> tuple[PresentedAlgebra, AlgebraMap]:
    if not isinstance(I, Ideal):
        I = Ideal(A.ctx, I)
    if I.ctx != A.ctx:
        raise ContextMismatch("ideal lives in a different context")
    B = PresentedAlgebra(A.ctx, A.relations + I, "quotient")
    return B, AlgebraMap(A, B, A.gens())


def _extend(A: PresentedAlgebra, names) -> tuple[Context, list]:
    ctx = Context(A.p, A.names + tuple(names))
    rels = [r.rename(ctx, range(A.nvars)) for r in A.relations.generators]
    return ctx, rels


def localize_principal(A: PresentedAlgebra, f, name: str = "t") -> tuple[PresentedAlgebra, AlgebraMap]:
    """``A_f = A[t] / (f t - 1)``; localizing at a nilpotent gives the zero ring."""
    f = A.ctx.coerce(f)
    t = fresh_name(A.names, name)
    ctx, rels = _extend(A, [t])
    rels.append(f.rename(ctx, range(A.nvars)) * ctx.var(t) - 1)
    B = PresentedAlgebra(ctx, rels, "localization")
    return B, AlgebraMap(A, B, [g.rename(ctx, range(A.nvars)) for g in A.gens()])


def polynomial_extension(A: PresentedAlgebra, names=("t",), rels=()) -> tuple[PresentedAlgebra, AlgebraMap]:
    """``A[t_1..t_k] / (rels)`` with the inclusion of ``A``; ``rels`` are polynomials or strings."""
    new = []
    for n in names:
        new.append(fresh_name(A.names + tuple(new), n))
    ctx, relations = _extend(A, new)
    relations += [ctx.coerce(r) for r in rels]
    B = PresentedAlgebra(ctx, relations, "base")
    return B, AlgebraMap(A, B, [g.rename(ctx, range(A.nvars)) for g in A.gens()])


def tensor_product(u: AlgebraMap, v: AlgebraMap):
    """``B ⊗_A C`` for ``u: A -> B`` and ``v: A -> C``; returns ``(T, B -> T, C -> T)``."""
    if u.source != v.source:
        raise ContextMismatch("the two maps do not share a source")
    B, C = u.target, v.target
    if B.p != C.p:
        raise ContextMismatch("different characteristics")
    c_names = []
    for n in C.names:
        cand = n if n not in B.names else f"{n}_2"
        c_names.append(fresh_name(B.names + tuple(c_names), cand))
    ctx = Context(B.p, B.names + tuple(c_names))
    bpos = list(range(B.nvars))
    cpos = list(range(B.nvars, B.nvars + C.nvars))
    rels = [r.rename(ctx, bpos) for r in B.relations.generators]
    rels += [r.rename(ctx, cpos) for r in C.relations.generators]
    rels += [ub.rename(ctx, bpos) - vc.rename(ctx, cpos) for ub, vc in zip(u.images, v.images)]
    T = PresentedAlgebra(ctx, rels, "tensor")
    iB = AlgebraMap(B, T, [ctx.var(i) for i in bpos])
    iC = AlgebraMap(C, T, [ctx.var(i) for i in cpos])
    return T, iB, iC


def direct_product(B: PresentedAlgebra, C: PresentedAlgebra, idempotent: str = "w"):
    """``B × C`` presented with an idempotent ``w``; returns ``(P, P -> B, P -> C)``."""
    if B.p != C.p:
        raise ContextMismatch("different characteristics")
    w = fresh_name(B.names + C.names, idempotent)
    b_names = list(B.names)
    c_names = []
    for n in C.names:
        c_names.append(fresh_name([w] + b_names + c_names, n if n not in B.names else f"{n}_2"))
    ctx = Context(B.p, (w,) + tuple(b_names) + tuple(c_names))
    W = ctx.var(0)
    bpos = list(range(1, 1 + B.nvars))
    cpos = list(range(1 + B.nvars, 1 + B.nvars + C.nvars))
    bs = [ctx.var(i) for i in bpos]
    cs = [ctx.var(i) for i in cpos]
    rels = [W * W - W]
    rels += [W * b - b for b in bs]
    rels += [(1 - W) * c - c for c in cs]
    rels += [b * c for b in bs for c in cs]
    for r in B.relations.generators:
        r0 = r.constant_value()
        rels.append(r.rename(ctx, bpos) - r0 + W * r0)
    for r in C.relations.generators:
        r0 = r.constant_value()
        rels.append(r.rename(ctx, cpos) - r0 + (1 - W) * r0)
    P = PresentedAlgebra(ctx, rels, "product")
    pB = AlgebraMap(P, B, [B.ctx.one()] + B.gens() + [B.ctx.zero()] * C.nvars)
    pC = AlgebraMap(P, C, [C.ctx.zero()] + [C.ctx.zero()] * B.nvars + C.gens())
    return P, pB, pC


def diagonal_map(P: PresentedAlgebra, u: AlgebraMap, v: AlgebraMap) -> AlgebraMap:
    """``A -> B × C``, ``a ↦ (u(a), v(a))``, for ``P`` built by :func:`direct_product`."""
    B, C = u.target, v.target
    W = P.ctx.var(0)
    bpos = list(range(1, 1 + B.nvars))
    cpos = list(range(1 + B.nvars, 1 + B.nvars + C.nvars))
    images = [
        W * ub.rename(P.ctx, bpos) + (1 - W) * vc.rename(P.ctx, cpos)
        for ub, vc in zip(u.images, v.images)
    ]
    return AlgebraMap(u.source, P, images)
