"""Named, seeded verification scenarios over concrete instances.

Each scenario draws instances from a ``random.Random`` seeded by the scenario
name and the suite seed, checks one implication per instance and counts
violations.  Instances that hit the S-pair budget are counted as skipped.
"""

from __future__ import annotations

import itertools
import random
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from .algebra import (
    AlgebraMap,
    PresentedAlgebra,
    compose_maps,
    direct_product,
    diagonal_map,
    localize_principal,
    make_algebra,
    polynomial_extension,
    prime_field,
    quotient_algebra,
    structure_map,
    tensor_product,
)
from .errors import BudgetExceeded, FrobkitError
from .field_poly import Context, Poly
from .finmod import verify_surjectivity_descent
from .frobenius import (
    base_change_certificate,
    certify_f_finite,
    check_naturality,
    frobenius_endomorphism,
    kappa_factorization,
    purity_witness,
    quotient_kernel_matches,
    radu_andre_pushout,
    validate_certificate,
)
from .groebner import DEFAULT_BUDGET, Ideal, ideal_contains, module_finiteness

SUITES = (
    "example_2_3",
    "lemma_2_2",
    "naturality",
    "nilpotent",
    "finite_injective",
    "products",
    "section3_finite",
    "main_theorem_instances",
)
ALIASES = {"section3": "section3_finite"}


@dataclass
class ScenarioReport:
    name: str
    anchor: str
    instances: int = 0
    violations: list = field(default_factory=list)
    skipped: int = 0
    counts: dict = field(default_factory=dict)
    wall_ms: float = 0.0

    def bump(self, key, k=1):
        self.counts[key] = self.counts.get(key, 0) + k

    def violate(self, message):
        self.violations.append(message)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self, timings: bool = False) -> dict:
        d = {
            "name": self.name,
            "anchor": self.anchor,
            "instances": self.instances,
            "violations": len(self.violations),
            "violation_details": list(self.violations),
            "skipped": self.skipped,
            "counts": dict(sorted(self.counts.items())),
            "holds": self.passed,
        }
        if timings:
            d["wall_ms"] = round(self.wall_ms, 3)
        return d


@dataclass
class SuiteReport:
    suite: str
    seed: int
    budget: int
    scenarios: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(len(s.violations) for s in self.scenarios)

    @property
    def instances(self) -> int:
        return sum(s.instances for s in self.scenarios)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def scenario(self, name) -> ScenarioReport:
        for s in self.scenarios:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "budget": self.budget,
            "instances": self.instances,
            "violations": self.violations,
            "passed": self.passed,
            "scenarios": [s.to_dict(timings) for s in sorted(self.scenarios, key=lambda s: s.name)],
        }


# -- random instance generators ------------------------------------------------


def _monomials(n, d):
    out = []
    for total in range(d + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def random_poly(rng, ctx: Context, max_degree=2, max_terms=3, positions=None, nonconstant=True) -> Poly:
    positions = list(range(ctx.nvars)) if positions is None else list(positions)
    if not positions:
        return ctx.const(rng.randrange(1, ctx.p))
    sub = _monomials(len(positions), max_degree)
    while True:
        terms = {}
        for m in rng.sample(sub, min(len(sub), rng.randint(1, max_terms))):
            full = [0] * ctx.nvars
            for k, pos in enumerate(positions):
                full[pos] = m[k]
            terms[tuple(full)] = rng.randrange(1, ctx.p)
        f = Poly(ctx, terms)
        if not nonconstant or f.degree() > 0:
            return f


def random_base(rng, p) -> PresentedAlgebra:
    """``F_p``, ``F_p[s]`` or ``F_p[s]/(r)``."""
    kind = rng.randrange(3)
    if kind == 0:
        return prime_field(p)
    A = make_algebra(p, ["s"])
    if kind == 1:
        return A
    r = A.ctx.var(0) ** rng.randint(2, 3) + random_poly(rng, A.ctx, 1, 2, nonconstant=False)
    return make_algebra(p, ["s"], [r])


def random_step(rng, B: PresentedAlgebra, kinds=("ext", "quot", "loc", "subst")):
    """A random map out of ``B``: adjoin a variable, quotient, localize or substitute."""
    kinds = [k for k in kinds if k != "subst" or (not B.relations.generators and B.nvars <= 1)]
    if B.nvars == 0:
        kinds = [k for k in kinds if k in ("ext", "subst")] or ["ext"]
    kind = rng.choice(kinds)
    if kind == "ext":
        C, g = polynomial_extension(B, ("x",))
        if rng.random() < 0.5:
            t = C.ctx.var(C.nvars - 1)
            low = random_poly(rng, C.ctx, 1, 2, positions=range(C.nvars), nonconstant=False)
            rel = t ** rng.randint(2, 3) + low
            C, q = quotient_algebra(C, [rel])
            g = compose_maps(g, q)
        return C, g
    if kind == "quot":
        return quotient_algebra(B, [random_poly(rng, B.ctx, 2, 2)])
    if kind == "loc":
        return localize_principal(B, random_poly(rng, B.ctx, 1, 2))
    # substitution into a fresh polynomial ring in one or two variables
    k = rng.randint(1, 2)
    C = make_algebra(B.p, ["u", "v"][:k])
    return C, AlgebraMap(B, C, [random_poly(rng, C.ctx, 2, 2) for _ in range(B.nvars)])


def random_tower(rng, p, max_vars=3):
    """Composable ``f: A -> B``, ``g: B -> C`` with at most ``max_vars`` variables in ``C``."""
    while True:
        A = random_base(rng, p)
        B, f = random_step(rng, A)
        C, g = random_step(rng, B)
        if C.nvars <= max_vars:
            return f, g


@contextmanager
def _instance(rep):
    try:
        yield
    except BudgetExceeded:
        rep.skipped += 1


def _rng(name, seed):
    return random.Random(f"{name}:{seed}")


# -- scenarios -------------------------------------------------------------------


def _example_2_3(rep, rng, budget):
    for p in (2, 3, 5):
        with _instance(rep):
            # polynomial rings: generators 1, x, ..., x^(p-1)
            B = make_algebra(p, ["x"])
            v = certify_f_finite(structure_map(B), 1, budget)
            rep.instances += 1
            want = [B.ctx.var(0) ** k for k in range(p)]
            if not v.finite or sorted(map(str, v.certificate.generators)) != sorted(map(str, want)):
                rep.violate(f"F_{p} -> F_{p}[x]: generators {v.certificate and v.certificate.generators}")
            rep.bump("polynomial")
            A = random_base(rng, p)
            Ax, inc = polynomial_extension(A, ("x",))
            rep.instances += 1
            v = certify_f_finite(inc, 1, budget)
            if not v.finite:
                rep.violate(f"{A} -> {A}[x] not finite")
            rep.bump("polynomial")
            # localization: phi_e is an isomorphism
            for e in (1, 2):
                A = random_base(rng, p)
                if A.nvars == 0:
                    A = make_algebra(p, ["s"])
                B, loc = localize_principal(A, random_poly(rng, A.ctx, 1, 2))
                pd = radu_andre_pushout(loc, e)
                rep.instances += 1
                rep.bump("localization")
                if not pd.phi.is_surjective(budget) or not pd.phi.is_injective(budget):
                    rep.violate(f"localization {B.to_str()} at e={e}: phi not an isomorphism")
                v = module_finiteness(pd.phi, budget)
                if not v.finite or len(v.certificate.generators) > 1:
                    rep.violate(f"localization {B.to_str()}: generators {v.certificate and v.certificate.generators}")
            # quotients: the pushout is A / I^[p^e]
            for e in (1, 2):
                A = make_algebra(p, ["s", "r"][: rng.randint(1, 2)])
                I = Ideal(A.ctx, [random_poly(rng, A.ctx, 3, 2) for _ in range(rng.randint(1, 2))])
                rep.instances += 1
                rep.bump("quotient")
                if not quotient_kernel_matches(A, I, e, budget):
                    rep.violate(f"quotient by {I} at e={e}: kernel differs from the bracket power")
            # essentially of finite type: localization of a finite-type algebra
            A = random_base(rng, p)
            B, f = random_step(rng, A, ("ext",))
            C, g = random_step(rng, B, ("loc",))
            rep.instances += 1
            rep.bump("essentially_finite_type")
            if not certify_f_finite(compose_maps(f, g), 1, budget).finite:
                rep.violate(f"{C.to_str()} not finite over {A.to_str()}")


def _lemma_2_2(rep, rng, budget, n=60):
    for k in range(n):
        with _instance(rep):
            p = (2, 3)[k % 2]
            f, g = random_tower(rng, p)
            gf = compose_maps(f, g)
            rep.instances += 1
            vf1, vf2 = certify_f_finite(f, 1, budget), certify_f_finite(f, 2, budget)
            if vf1.finite != vf2.finite:
                rep.violate(f"e-independence fails for {f.to_str()}")
            rep.bump("e_independence")
            vg = certify_f_finite(g, 1, budget)
            vgf = certify_f_finite(gf, 1, budget)
            if vf1.finite and vg.finite:
                rep.bump("composition")
                if not vgf.finite:
                    rep.violate(f"composition fails for {f.to_str()} then {g.to_str()}")
            if vgf.finite:
                rep.bump("right_factor")
                if not vg.finite:
                    rep.violate(f"right factor fails for {g.to_str()}")
            # the ring F_p -> A is F-finite iff the Frobenius of A is finite
            for R in (f.source, f.target):
                absolute = certify_f_finite(structure_map(R), 1, budget).finite
                frob = module_finiteness(frobenius_endomorphism(R), budget).finite
                rep.bump("absolute")
                if absolute != frob:
                    rep.violate(f"absolute F-finiteness mismatch for {R.to_str()}")
            # base change along a random map out of A
            if vf1.finite:
                At, h = random_step(rng, f.source, ("ext", "quot", "subst"))
                bc = base_change_certificate(f, h, vf1.certificate, 1, budget)
                rep.bump("base_change")
                if not bc.finite or not validate_certificate(bc.certificate, bc.certificate.map):
                    rep.violate(f"base change of {f.to_str()} along {h.to_str()} not certified")
            # B F-finite implies f F-finite; A and f F-finite imply B F-finite
            b_abs = certify_f_finite(structure_map(f.target), 1, budget).finite
            a_abs = certify_f_finite(structure_map(f.source), 1, budget).finite
            if b_abs:
                rep.bump("part6")
                if not vf1.finite:
                    rep.violate(f"B F-finite but f not: {f.to_str()}")
            if a_abs and vf1.finite:
                rep.bump("part7")
                if not b_abs:
                    rep.violate(f"A and f F-finite but B not: {f.to_str()}")


def _naturality(rep, rng, budget, n=60):
    for k in range(n):
        with _instance(rep):
            p = (2, 3)[k % 2]
            e = 1 + (k // 2) % 2
            f, g = random_tower(rng, p, max_vars=3)
            rep.instances += 1
            rep.bump("square")
            if not check_naturality(f, g, e):
                rep.violate(f"naturality square fails for {f.to_str()} then {g.to_str()} at e={e}")
            e1, e2 = (1, 1) if k % 3 else (1, 2)
            rep.bump("kappa")
            if not kappa_factorization(f, e1, e2):
                rep.violate(f"kappa factorization fails for {f.to_str()} at ({e1},{e2})")


def _nilpotent_ideal(rng, p):
    """``B`` with a nilpotent ideal ``I``: a nilpotent variable adjoined to a random algebra."""
    A = random_base(rng, p)
    Ax, f0 = polynomial_extension(A, ("z",))
    z = Ax.ctx.var(Ax.nvars - 1)
    k = rng.randint(2, 3)
    B, q = quotient_algebra(Ax, [z**k])
    f = compose_maps(f0, q)
    gens = [z]
    if A.nvars and rng.random() < 0.5:
        gens.append(z * random_poly(rng, B.ctx, 1, 2, positions=range(A.nvars), nonconstant=False))
    return f, Ideal(B.ctx, gens), k


def _is_nilpotent(B: PresentedAlgebra, I: Ideal, r: int, budget) -> bool:
    power = Ideal(B.ctx, [B.ctx.one()])
    for _ in range(r):
        power = Ideal(B.ctx, [a * b for a in power.generators for b in I.generators])
    return ideal_contains(B.relations, power, budget=budget)


def _nilpotent(rep, rng, budget, n=25):
    for k in range(n):
        with _instance(rep):
            p = (2, 3)[k % 2]
            f, I, r = _nilpotent_ideal(rng, p)
            B = f.target
            rep.instances += 1
            if not _is_nilpotent(B, I, r, budget):
                rep.violate(f"generated ideal {I} is not nilpotent in {B.to_str()}")
                continue
            Bq, q = quotient_algebra(B, I)
            # F-finite version
            if certify_f_finite(compose_maps(f, q), 1, budget).finite:
                rep.bump("f_finite")
                if not certify_f_finite(f, 1, budget).finite:
                    rep.violate(f"B/I F-finite over A but B not: {B.to_str()}")
            # module-finite version along the pushout map
            if module_finiteness(compose_maps(f, q), budget).finite:
                rep.bump("module_finite")
                if not module_finiteness(f, budget).finite:
                    rep.violate(f"B/I finite over A but B not: {B.to_str()}")


def _finite_injective(rep, rng, budget, n=25):
    done = 0
    tries = 0
    while done < n and tries < 20 * n:
        with _instance(rep):
            tries += 1
            p = (2, 3)[done % 2]
            A = random_base(rng, p)
            B, f = random_step(rng, A, ("ext", "loc"))
            # g: B -> B[t]/(monic) is finite; injective unless B is the zero ring
            C, g0 = polynomial_extension(B, ("t",))
            t = C.ctx.var(C.nvars - 1)
            low = random_poly(rng, C.ctx, 1, 2, positions=range(C.nvars - 1), nonconstant=False)
            C, q = quotient_algebra(C, [t ** rng.randint(2, 3) + low * t])
            g = compose_maps(g0, q)
            if C.nvars > 4:
                continue
            if not module_finiteness(g, budget).finite or not g.is_injective(budget):
                rep.bump("hypothesis_false")
                continue
            rep.instances += 1
            done += 1
            if certify_f_finite(compose_maps(f, g), 1, budget).finite:
                rep.bump("checked")
                if not certify_f_finite(f, 1, budget).finite:
                    rep.violate(f"C F-finite over A, g finite injective, but B not: {B.to_str()}")


def _products(rep, rng, budget, n=12):
    for k in range(n):
        with _instance(rep):
            p = (2, 3)[k % 2]
            A = random_base(rng, p)
            B, u = random_step(rng, A, ("ext", "quot", "loc"))
            C, v = random_step(rng, A, ("ext", "quot", "loc"))
            rep.instances += 1
            fu, fv = certify_f_finite(u, 1, budget), certify_f_finite(v, 1, budget)
            if not (fu.finite and fv.finite):
                rep.bump("hypothesis_false")
                continue
            T, iB, iC = tensor_product(u, v)
            ut = compose_maps(u, iB)
            vt = certify_f_finite(ut, 1, budget)
            rep.bump("tensor")
            if not vt.finite or not validate_certificate(vt.certificate, vt.certificate.map):
                rep.violate(f"tensor {T.to_str()} not certified over {A.to_str()}")
            P, pB, pC = direct_product(B, C)
            rep.bump("projections")
            try:
                # projections are validated on construction; re-check explicitly
                AlgebraMap(P, B, pB.images)
                AlgebraMap(P, C, pC.images)
            except FrobkitError as exc:
                rep.violate(f"projection of {P.to_str()} invalid: {exc}")
                continue
            d = diagonal_map(P, u, v)
            if compose_maps(d, pB) != u or compose_maps(d, pC) != v:
                rep.violate("diagonal map does not recover the factors")
            vp = certify_f_finite(d, 1, budget)
            rep.bump("product")
            if not vp.finite or not validate_certificate(vp.certificate, vp.certificate.map):
                rep.violate(f"product {P.to_str()} not certified over {A.to_str()}")


def _section3(rep, rng, budget):
    report = verify_surjectivity_descent(seed=rng.randrange(2**31))
    rep.instances += report.total
    for key, val in report.to_dict().items():
        if key != "violations" and not isinstance(val, bool):
            rep.bump(key, val)
    if report.truncated:
        rep.bump("sampled", 1)
    for v in report.violations:
        rep.violate(v)
    if report.split_not_detected_by_tensor:
        rep.violate("an injective non-split map stayed injective after every tensor")


def main_theorem_bases(p):
    """Rings ``B`` over F_p used for the main-theorem triples."""
    out = [prime_field(p), make_algebra(p, ["x"]), make_algebra(p, ["x"], ["x^2"])]
    irreducible = {2: "x^3+x+1", 3: "x^2+1", 5: "x^2+2"}
    out.append(make_algebra(p, ["x"], [irreducible[p]]))
    return out


def _main_theorem(rep, rng, budget):
    triples = [(p, B) for p in (2, 3) for B in main_theorem_bases(p)]
    for p, B in triples:
        with _instance(rep):
            C, g = polynomial_extension(B, ("t",))
            f = structure_map(B)
            rep.instances += 1
            pd = radu_andre_pushout(g, 1)
            pure = purity_witness(pd, 2 * p, budget)
            rep.bump("pure" if pure.pure else "unknown")
            if not pure.pure:
                rep.violate(f"no purity witness for {B.to_str()} -> {C.to_str()}: {pure.reason}")
                continue
            # freeness with basis containing 1 makes Spec C -> Spec B surjective
            if not any(b == 1 for b in pure.basis):
                rep.violate(f"free basis for {C.to_str()} misses 1")
            gf = certify_f_finite(compose_maps(f, g), 1, budget)
            if not gf.finite:
                rep.violate(f"{C.to_str()} not F-finite over F_{p}")
                continue
            concl = certify_f_finite(f, 1, budget)
            rep.bump("conclusion")
            if not concl.finite or not validate_certificate(concl.certificate, radu_andre_pushout(f, 1)):
                rep.violate(f"{B.to_str()} not certified F-finite")


_SCENARIOS = {
    "example_2_3": ("polynomial, localization and quotient examples", _example_2_3),
    "lemma_2_2": ("basic properties of F-finite maps", _lemma_2_2),
    "naturality": ("naturality square and comparison maps", _naturality),
    "nilpotent": ("nilpotent thickenings", _nilpotent),
    "finite_injective": ("finite injective right factors", _finite_injective),
    "products": ("tensor and direct products", _products),
    "section3_finite": ("surjectivity descent along pure maps of finite modules", _section3),
    "main_theorem_instances": ("descent of F-finiteness along pure Frobenius maps", _main_theorem),
}


def run_scenario(name: str, seed: int = 0, budget: int = DEFAULT_BUDGET) -> ScenarioReport:
    name = ALIASES.get(name, name)
    if name not in _SCENARIOS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    anchor, fn = _SCENARIOS[name]
    rep = ScenarioReport(name, anchor)
    start = time.perf_counter()
    try:
        fn(rep, _rng(name, seed), budget)
    except BudgetExceeded:
        rep.skipped += 1
    rep.wall_ms = (time.perf_counter() - start) * 1000
    return rep


def run_suite(name: str = "all", seed: int = 0, budget: int = DEFAULT_BUDGET) -> SuiteReport:
    name = ALIASES.get(name, name)
    names = SUITES if name == "all" else (name,)
    if name != "all" and name not in _SCENARIOS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    report = SuiteReport(name, seed, budget)
    for n in names:
        report.scenarios.append(run_scenario(n, seed, budget))
    return report
