"""Bracket powers, the Frobenius pushout and relative Frobenius maps.

For ``f: A -> B`` with ``A = F_p[x]/I``, ``B = F_p[y]/J`` and
``f(x_j) = F_j(y)`` the pushout ``B^(e) ⊗_{A^(e)} A`` is presented as

    F_p[Y, X] / (J(Y) + I(X) + (F_j(Y) - X_j^(p^e)))

and the relative Frobenius ``phi_e`` sends ``Y_i ↦ y_i^(p^e)`` and
``X_j ↦ F_j(y)``.  Over F_p the twist ``A^(e)`` has the same presentation as
``A``, so all the twisting lives in these structure maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import AlgebraMap, PresentedAlgebra, compose_maps, tensor_product
from .errors import ContextMismatch, InvalidTwist
from .field_poly import Context, Poly, frobenius_power_poly
from .groebner import (
    DEFAULT_BUDGET,
    FinitenessCertificate,
    FinitenessVerdict,
    Ideal,
    certificate_problems,
    eliminate,
    ideal_equal,
    module_finiteness,
)

DEFAULT_E_MAX = 3


def _check_twist(e, e_max=DEFAULT_E_MAX):
    if isinstance(e, bool) or not isinstance(e, int) or e < 1:
        raise InvalidTwist(f"twist exponent must be a positive integer, got {e!r}")
    if e_max is not None and e > e_max:
        raise InvalidTwist(f"twist exponent {e} exceeds the cap {e_max}")


def bracket_power(I: Ideal, e: int) -> Ideal:
    """``I^[p^e]``: generated by the ``p^e``-th powers of the generators of ``I``."""
    _check_twist(e, None)
    return Ideal(I.ctx, [frobenius_power_poly(g, e) for g in I.generators])


@dataclass(frozen=True)
class PushoutData:
    pushout: PresentedAlgebra
    from_twisted_target: AlgebraMap
    from_source: AlgebraMap
    phi: AlgebraMap
    e: int
    f: AlgebraMap = field(repr=False)

    @property
    def twisted_positions(self) -> list:
        return list(range(self.f.target.nvars))

    @property
    def source_positions(self) -> list:
        n = self.f.target.nvars
        return list(range(n, n + self.f.source.nvars))


def radu_andre_pushout(f: AlgebraMap, e: int, e_max: int | None = DEFAULT_E_MAX) -> PushoutData:
    _check_twist(e, e_max)
    A, B = f.source, f.target
    q = A.p**e
    n, m = B.nvars, A.nvars
    names = tuple(f"Y{i + 1}" for i in range(n)) + tuple(f"X{j + 1}" for j in range(m))
    ctx = Context(A.p, names)
    ypos = list(range(n))
    xpos = list(range(n, n + m))
    rels = [r.rename(ctx, ypos) for r in B.relations.generators]
    rels += [r.rename(ctx, xpos) for r in A.relations.generators]
    for j, img in enumerate(f.images):
        rels.append(img.rename(ctx, ypos) - ctx.var(n + j) ** q)
    P = PresentedAlgebra(ctx, rels, "pushout")
    from_twisted = AlgebraMap(B, P, [ctx.var(i) for i in ypos])
    from_source = AlgebraMap(A, P, [ctx.var(j) for j in xpos])
    phi = AlgebraMap(P, B, [y**q for y in B.gens()] + list(f.images))
    return PushoutData(P, from_twisted, from_source, phi, e, f)


def relative_frobenius(f: AlgebraMap, e: int, e_max: int | None = DEFAULT_E_MAX) -> AlgebraMap:
    return radu_andre_pushout(f, e, e_max).phi


def frobenius_endomorphism(B: PresentedAlgebra, e: int = 1) -> AlgebraMap:
    """The absolute Frobenius ``F^e: B^(e) -> B``, ``b ↦ b^(p^e)``."""
    _check_twist(e, None)
    q = B.p**e
    return AlgebraMap(B, B, [y**q for y in B.gens()])


def certify_f_finite(
    f: AlgebraMap, e: int = 1, budget: int = DEFAULT_BUDGET, e_max: int | None = DEFAULT_E_MAX
) -> FinitenessVerdict:
    """Decide finiteness of ``phi_e(A, B)`` and return a validated certificate when finite."""
    pd = radu_andre_pushout(f, e, e_max)
    verdict = module_finiteness(pd.phi, budget)
    if verdict.finite and not validate_certificate(verdict.certificate, pd):
        raise AssertionError("certificate from module_finiteness failed validation")
    return verdict


def validate_certificate(cert: FinitenessCertificate, pd) -> bool:
    """Independent re-check of a certificate; ``pd`` is a :class:`PushoutData` or the map itself."""
    phi = pd.phi if isinstance(pd, PushoutData) else pd
    if cert.map != phi:
        return False
    return not certificate_problems(cert)


def check_naturality(f: AlgebraMap, g: AlgebraMap, e: int = 1, e_max: int | None = DEFAULT_E_MAX) -> bool:
    """Commutativity of ``g ∘ phi_e(A,B) = phi_e(A,C) ∘ (g^(e) ⊗ 1)``."""
    if f.target != g.source:
        raise ContextMismatch("maps are not composable")
    pd_b = radu_andre_pushout(f, e, e_max)
    pd_c = radu_andre_pushout(compose_maps(f, g), e, e_max)
    PC = pd_c.pushout
    ypos = pd_c.twisted_positions
    images = [img.rename(PC.ctx, ypos) for img in g.images]
    images += [PC.ctx.var(j) for j in pd_c.source_positions]
    twist = AlgebraMap(pd_b.pushout, PC, images)
    return compose_maps(pd_b.phi, g) == compose_maps(twist, pd_c.phi)


def kappa_map(f: AlgebraMap, e: int, e2: int, e_max: int | None = DEFAULT_E_MAX):
    """Comparison map ``kappa`` from the ``(e+e2)`` pushout to the ``e`` pushout."""
    big = radu_andre_pushout(f, e + e2, e_max)
    small = radu_andre_pushout(f, e, e_max)
    q2 = f.source.p**e2
    ctx = small.pushout.ctx
    images = [ctx.var(i) ** q2 for i in small.twisted_positions]
    images += [ctx.var(j) for j in small.source_positions]
    return big, small, AlgebraMap(big.pushout, small.pushout, images)


def kappa_factorization(f: AlgebraMap, e: int, e2: int, e_max: int | None = DEFAULT_E_MAX) -> bool:
    """``phi_(e+e2) = phi_e ∘ kappa`` with ``kappa`` validated as a homomorphism."""
    big, small, kappa = kappa_map(f, e, e2, e_max)
    return compose_maps(kappa, small.phi) == big.phi


# -- purity --------------------------------------------------------------------


@dataclass
class PurityOutcome:
    """``pure`` is True only with a verified witness and a free basis inside the bound.

    ``split_up_to_degree`` marks outcomes where the truncated retraction exists
    but freeness could not be confirmed.
    """

    pure: bool
    degree_bound: int
    retraction: dict = field(default_factory=dict)
    basis: list = field(default_factory=list)
    split_up_to_degree: bool = False
    reason: str = ""

    @property
    def outcome(self) -> str:
        if self.pure:
            return "pure"
        return "split-up-to-degree" if self.split_up_to_degree else "unknown"


def purity_witness(pd: PushoutData, degree_bound: int, budget: int = DEFAULT_BUDGET) -> PurityOutcome:
    """Search for a source-linear retraction of ``phi_e`` on degree-truncated monomials.

    The linear system imposes ``ρ(phi(s)) = s`` for pushout standard monomials
    ``s`` and ``ρ(f(a_j)·v) = X_j·ρ(v)`` for target standard monomials ``v``,
    whenever both sides stay within ``degree_bound``.  A solution is labelled
    pure only if the target is also free over the pushout on the certificate's
    generators, all of degree at most the bound.
    """
    if degree_bound < 1:
        return PurityOutcome(False, degree_bound, reason="degree bound leaves no room for a witness")
    phi = pd.phi
    P, B = phi.source, phi.target
    p = P.p
    D = degree_bound
    V = B.standard_monomials(D)
    W = P.standard_monomials(D)
    if not V or not W:
        return PurityOutcome(False, D, reason="zero ring")
    vidx = {m: k for k, m in enumerate(V)}
    nW = len(W)
    nunk = len(V) * nW

    def in_v(poly):
        coords = {}
        for m, c in poly.terms.items():
            if m not in vidx:
                return None
            coords[vidx[m]] = c
        return coords

    rows, rhs = [], []
    # retraction: sum_v c_v ρ(v) = s
    for si, s in enumerate(W):
        image = in_v(B.reduce(phi.apply(P.ctx.monomial(s))))
        if image is None:
            continue
        for wi in range(nW):
            row = np.zeros(nunk, dtype=np.int64)
            for v, c in image.items():
                row[v * nW + wi] = c
            rows.append(row)
            rhs.append(1 if wi == si else 0)
    # source linearity: ρ(f(a_j) v) = X_j ρ(v)
    xs = [P.ctx.var(j) for j in pd.source_positions]
    fa = list(pd.f.images)
    for xj, faj in zip(xs, fa):
        shifted = [P.reduce(xj * P.ctx.monomial(w)) for w in W]
        coords = sorted({m for g in shifted for m in g.terms} | set(W), key=lambda m: (sum(m), m))
        cidx = {m: k for k, m in enumerate(coords)}
        widx = {m: k for k, m in enumerate(W)}
        for vi, v in enumerate(V):
            lhs = in_v(B.reduce(faj * B.ctx.monomial(v)))
            if lhs is None:
                continue
            block = np.zeros((len(coords), nunk), dtype=np.int64)
            for v2, c in lhs.items():
                for w, wi in widx.items():
                    block[cidx[w], v2 * nW + wi] = (block[cidx[w], v2 * nW + wi] + c) % p
            for wi, g in enumerate(shifted):
                for m, c in g.terms.items():
                    k = cidx[m]
                    block[k, vi * nW + wi] = (block[k, vi * nW + wi] - c) % p
            for r in block:
                if r.any():
                    rows.append(r)
                    rhs.append(0)
    if rows:
        sol = linalg.solve(np.array(rows), np.array(rhs), p)
    else:
        sol = np.zeros(nunk, dtype=np.int64)
    if sol is None:
        return PurityOutcome(False, D, reason="no retraction on the truncation")
    retraction = {}
    for vi, v in enumerate(V):
        coeffs = {W[wi]: int(sol[vi * nW + wi]) for wi in range(nW) if sol[vi * nW + wi]}
        retraction[v] = Poly(P.ctx, coeffs)
    bad = _retraction_violations(pd, retraction, V, W)
    if bad:
        return PurityOutcome(False, D, retraction, reason="witness failed re-verification: " + bad[0])
    free, basis, why = _free_basis_within(pd, D, budget)
    if not free:
        return PurityOutcome(False, D, retraction, basis, split_up_to_degree=True, reason=why)
    return PurityOutcome(True, D, retraction, basis)


def _retraction_violations(pd, retraction, V, W) -> list:
    phi = pd.phi
    P, B = phi.source, phi.target
    vset = set(V)

    def rho(b):
        total = P.ctx.zero()
        for m, c in b.terms.items():
            if m not in vset:
                return None
            total = total + retraction[m].scale(c)
        return P.reduce(total)

    out = []
    for s in W:
        sp = P.ctx.monomial(s)
        back = rho(B.reduce(phi.apply(sp)))
        if back is not None and back != P.reduce(sp):
            out.append(f"ρ(phi({sp})) = {back}")
    for j, faj in zip(pd.source_positions, pd.f.images):
        xj = P.ctx.var(j)
        for v in V:
            lhs = rho(B.reduce(faj * B.ctx.monomial(v)))
            if lhs is not None and lhs != P.reduce(xj * retraction[v]):
                out.append(f"source-linearity fails at {B.ctx.monomial(v)}")
    return out


def _free_basis_within(pd, D, budget):
    """Is the target free over the pushout on the certificate generators, all of degree ≤ D?"""
    verdict = module_finiteness(pd.phi, budget)
    if not verdict.finite:
        return False, [], f"target not finite over the pushout (no pure power of {verdict.witness_variable})"
    gens = verdict.certificate.generators
    if any(g.degree() > D for g in gens):
        return False, gens, "free basis candidates exceed the degree bound"
    n = pd.phi.target.nvars
    for lm in verdict.basis.leading_monomials:
        if any(lm[:n]) and any(lm[n:]):
            return False, gens, "mixed leading monomial; freeness not established"
    if not pd.phi.is_injective(budget):
        return False, gens, "relative Frobenius is not injective"
    return True, gens, ""


# -- base change -----------------------------------------------------------------


def base_change_certificate(
    f: AlgebraMap,
    h: AlgebraMap,
    cert: FinitenessCertificate,
    e: int = 1,
    budget: int = DEFAULT_BUDGET,
    e_max: int | None = DEFAULT_E_MAX,
) -> FinitenessVerdict:
    """Transport a certificate for ``f`` along ``h: A -> Ã`` to ``Ã -> Ã ⊗_A B``.

    Falls back to a fresh computation if the transported certificate does not
    validate.
    """
    if f.source != h.source:
        raise ContextMismatch("f and h must share their source")
    Bt, i_at, i_b = tensor_product(h, f)
    ft = i_at
    pd = radu_andre_pushout(ft, e, e_max)
    Pt = pd.pushout
    old_pd = radu_andre_pushout(f, e, e_max)
    # P -> P~: Y_i^B ↦ Y of the matching B~ variable, X_j^A ↦ h(a_j)(X~)
    nb_t = Bt.nvars
    xpos = pd.source_positions
    # tensor_product lays out Ã's variables first, then B's
    na = h.target.nvars
    a_pos = list(range(na))
    b_pos = list(range(na, nb_t))
    images = [Pt.ctx.var(k) for k in b_pos]
    images += [img.rename(Pt.ctx, xpos) for img in h.images]
    transport = AlgebraMap(old_pd.pushout, Pt, images)
    gens = [i_b.apply(g) for g in cert.generators]
    expansions = {}
    b_index = {k: i for i, k in enumerate(b_pos)}
    a_index = {k: j for j, k in enumerate(a_pos)}
    for var in range(nb_t):
        for k in range(len(gens)):
            if var in b_index:
                old = cert.expansions.get((b_index[var], k), {})
                expansions[(var, k)] = {l: transport.apply(c) for l, c in old.items()}
            else:
                expansions[(var, k)] = {k: Pt.ctx.var(xpos[a_index[var]])}
    moved = FinitenessCertificate(pd.phi, gens, expansions, "transported along the base change")
    if validate_certificate(moved, pd):
        return FinitenessVerdict(True, moved)
    return module_finiteness(pd.phi, budget)


def quotient_kernel_matches(A: PresentedAlgebra, I: Ideal, e: int, budget: int = DEFAULT_BUDGET) -> bool:
    """The X-only part of the pushout of ``A -> A/I`` equals ``I^[p^e] + rel(A)``."""
    from .algebra import quotient_algebra

    B, proj = quotient_algebra(A, I)
    pd = radu_andre_pushout(proj, e, None)
    P = pd.pushout
    x_only = eliminate(P.relations, pd.twisted_positions, budget)
    expected = bracket_power(I, e) + A.relations
    got = Ideal(A.ctx, [Poly(A.ctx, g.terms) for g in x_only.generators])
    return ideal_equal(got, expected, budget=budget)


def image_spans(phi: AlgebraMap, max_degree: int) -> bool:
    """Brute-force oracle: for finite-dimensional targets, source monomials up to
    ``max_degree`` times the certificate generators span the target."""
    B = phi.target
    std = B.standard_monomials()
    if std is None:
        raise ValueError("target is not finite-dimensional")
    verdict = module_finiteness(phi)
    idx = {m: k for k, m in enumerate(std)}
    vecs = []
    src = phi.source
    for m in itertools.chain.from_iterable(
        _monos(src.nvars, d) for d in range(max_degree + 1)
    ):
        a = phi.apply(src.ctx.monomial(m))
        for g in verdict.certificate.generators:
            r = B.reduce(a * g)
            v = np.zeros(len(std), dtype=np.int64)
            for mm, c in r.terms.items():
                v[idx[mm]] = c
            vecs.append(v)
    if not std:
        return True
    return linalg.rank(np.array(vecs).reshape(-1, len(std)), B.p) == len(std)


def _monos(n, d):
    for combo in itertools.combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        yield tuple(e)
