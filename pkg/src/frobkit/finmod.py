"""Finite-dimensional modules over finite-dimensional presented algebras.

A module is an F_p-space with one action matrix per ring variable (acting
on column vectors).  Over these rings every module is pure-injective, so a
map is pure exactly when it is split injective; :func:`is_pure_finite`
decides that with one linear solve.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import AlgebraMap, PresentedAlgebra, make_algebra, make_map
from .errors import ContextMismatch, FrobkitError


class ModuleError(FrobkitError):
    pass


def _poly_at_matrices(f, mats, dim, p):
    total = np.zeros((dim, dim), dtype=np.int64)
    powers = {}
    for exps, c in f.terms.items():
        term = np.eye(dim, dtype=np.int64) * c
        for i, e in enumerate(exps):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = _matpow(mats[i], e, p)
                term = linalg.matmul(term, powers[key], p)
        total = (total + term) % p
    return total


def _matpow(a, e, p):
    result = np.eye(a.shape[0], dtype=np.int64)
    while e:
        if e & 1:
            result = linalg.matmul(result, a, p)
        a = linalg.matmul(a, a, p)
        e >>= 1
    return result


class FiniteModule:
    def __init__(self, ring: PresentedAlgebra, actions, check: bool = True):
        self.ring = ring
        p = ring.p
        actions = [np.asarray(a, dtype=np.int64) % p for a in actions]
        if len(actions) != ring.nvars:
            raise ModuleError(f"need {ring.nvars} action matrices, got {len(actions)}")
        dims = {a.shape for a in actions}
        if len(dims) > 1:
            raise ModuleError("action matrices differ in shape")
        if actions:
            d0, d1 = actions[0].shape
            if d0 != d1:
                raise ModuleError("action matrices must be square")
            self.dim = d0
        else:
            self.dim = None
        self.actions = tuple(actions)
        if check:
            self._validate()

    def _validate(self):
        p = self.ring.p
        if self.dim is None:
            raise ModuleError("dimension unknown; use FiniteModule.vector_space")
        for a, b in itertools.combinations(self.actions, 2):
            if not np.array_equal(linalg.matmul(a, b, p), linalg.matmul(b, a, p)):
                raise ModuleError("action matrices do not commute")
        for r in self.ring.relations.generators:
            if _poly_at_matrices(r, self.actions, self.dim, p).any():
                raise ModuleError(f"relation {r} does not act as zero")

    @classmethod
    def vector_space(cls, ring: PresentedAlgebra, dim: int) -> "FiniteModule":
        """``dim``-dimensional module over a ring without variables (a prime field)."""
        if ring.nvars:
            raise ModuleError("vector_space is for rings without variables")
        m = cls.__new__(cls)
        m.ring, m.actions, m.dim = ring, (), dim
        if dim and ring.is_zero_ring:
            raise ModuleError("the zero ring has only the zero module")
        return m

    @property
    def p(self) -> int:
        return self.ring.p

    def act(self, f) -> np.ndarray:
        """Matrix of multiplication by a ring element."""
        f = self.ring.ctx.coerce(f)
        return _poly_at_matrices(f, self.actions, self.dim, self.p)

    def __repr__(self):
        return f"<FiniteModule dim={self.dim} over {self.ring.to_str()}>"


def zero_module(R: PresentedAlgebra) -> FiniteModule:
    if not R.nvars:
        return FiniteModule.vector_space(R, 0)
    return FiniteModule(R, [np.zeros((0, 0), dtype=np.int64)] * R.nvars)


def regular_module(R: PresentedAlgebra) -> FiniteModule:
    std = R.standard_monomials()
    if std is None:
        raise ModuleError("ring is not finite-dimensional")
    return _multiplication_module(R, R, std)


def _multiplication_module(R, Q, std):
    idx = {m: k for k, m in enumerate(std)}
    n = len(std)
    if not R.nvars:
        return FiniteModule.vector_space(R, n)
    acts = []
    for i in range(R.nvars):
        a = np.zeros((n, n), dtype=np.int64)
        for k, m in enumerate(std):
            r = Q.reduce(Q.ctx.var(i) * Q.ctx.monomial(m))
            for mm, c in r.terms.items():
                a[idx[mm], k] = c
        acts.append(a)
    return FiniteModule(R, acts)


def cyclic_module(R: PresentedAlgebra, ideal_gens) -> FiniteModule:
    """``R / I`` as an ``R``-module."""
    from .algebra import quotient_algebra

    Q, _ = quotient_algebra(R, [R.ctx.coerce(g) for g in ideal_gens])
    std = Q.standard_monomials()
    if std is None:
        raise ModuleError("quotient is not finite-dimensional")
    return _multiplication_module(R, Q, std)


def direct_sum(*mods: FiniteModule) -> FiniteModule:
    R = mods[0].ring
    if any(m.ring != R for m in mods):
        raise ContextMismatch("modules over different rings")
    dim = sum(m.dim for m in mods)
    if not R.nvars:
        return FiniteModule.vector_space(R, dim)
    acts = []
    for i in range(R.nvars):
        a = np.zeros((dim, dim), dtype=np.int64)
        off = 0
        for m in mods:
            a[off:off + m.dim, off:off + m.dim] = m.actions[i]
            off += m.dim
        acts.append(a)
    return FiniteModule(R, acts)


def cokernel(h: "ModuleMap") -> tuple:
    """``G / im(h)`` with its projection from ``G``."""
    G = h.target
    p = h.p
    Q, S = linalg.complement_projection(h.matrix.T, G.dim, p)
    q = Q.shape[0]
    if not G.ring.nvars:
        C = FiniteModule.vector_space(G.ring, q)
    else:
        C = FiniteModule(G.ring, [linalg.matmul(linalg.matmul(Q, a, p), S, p).reshape(q, q) for a in G.actions])
    return C, ModuleMap(G, C, Q.reshape(q, G.dim), check=True)


def dual_module(M: FiniteModule) -> FiniteModule:
    if not M.ring.nvars:
        return FiniteModule.vector_space(M.ring, M.dim)
    return FiniteModule(M.ring, [a.T.copy() for a in M.actions])


def restrict_scalars(f: AlgebraMap, M: FiniteModule) -> FiniteModule:
    """View a module over ``f.target`` as a module over ``f.source``."""
    if M.ring != f.target:
        raise ContextMismatch("module is not over the map's target")
    A = f.source
    if not A.nvars:
        return FiniteModule.vector_space(A, M.dim)
    return FiniteModule(A, [M.act(img) for img in f.images])


class ModuleMap:
    def __init__(self, source: FiniteModule, target: FiniteModule, matrix, check: bool = True):
        if source.ring != target.ring:
            raise ContextMismatch("modules over different rings")
        p = source.p
        self.source = source
        self.target = target
        self.matrix = np.asarray(matrix, dtype=np.int64).reshape(target.dim, source.dim) % p
        if check:
            for a, b in zip(source.actions, target.actions):
                if not np.array_equal(
                    linalg.matmul(self.matrix, a, p), linalg.matmul(b, self.matrix, p)
                ):
                    raise ModuleError("matrix does not intertwine the actions")

    @property
    def p(self) -> int:
        return self.source.p

    def rank(self) -> int:
        return linalg.rank(self.matrix, self.p)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``other ∘ self``."""
        return ModuleMap(self.source, other.target, linalg.matmul(other.matrix, self.matrix, self.p), check=False)

    def __repr__(self):
        return f"<ModuleMap {self.source.dim} -> {self.target.dim}>"


def identity(M: FiniteModule) -> ModuleMap:
    return ModuleMap(M, M, np.eye(M.dim, dtype=np.int64), check=False)


@dataclass
class TensorProduct:
    """``M ⊗_R N`` as a quotient of ``M ⊗_{F_p} N``.

    ``projection`` maps Kronecker coordinates onto the quotient basis and
    ``section`` lifts quotient coordinates back.
    """

    module: FiniteModule
    left: FiniteModule
    right: FiniteModule
    projection: np.ndarray = field(repr=False)
    section: np.ndarray = field(repr=False)

    def pure_tensor(self, m, n) -> np.ndarray:
        p = self.module.p
        return linalg.matmul(self.projection, np.kron(np.asarray(m) % p, np.asarray(n) % p), p)


def _tensor_relations(M, N):
    p = M.p
    rows = []
    im, inn = np.eye(M.dim, dtype=np.int64), np.eye(N.dim, dtype=np.int64)
    for a, b in zip(M.actions, N.actions):
        # columns of (a ⊗ 1 - 1 ⊗ b) span the relations (x m) ⊗ n - m ⊗ (x n)
        rel = (np.kron(a, inn) - np.kron(im, b)) % p
        rows.append(rel.T)
    if not rows:
        return np.zeros((0, M.dim * N.dim), dtype=np.int64)
    return np.vstack(rows)


def module_tensor(M: FiniteModule, N: FiniteModule) -> TensorProduct:
    if M.ring != N.ring:
        raise ContextMismatch("modules over different rings")
    p = M.p
    n = M.dim * N.dim
    Q, S = linalg.complement_projection(_tensor_relations(M, N), n, p)
    q = Q.shape[0]
    R = M.ring
    if not R.nvars:
        T = FiniteModule.vector_space(R, q)
    else:
        inn = np.eye(N.dim, dtype=np.int64)
        acts = [linalg.matmul(linalg.matmul(Q, np.kron(a, inn), p), S, p) for a in M.actions]
        T = FiniteModule(R, [a.reshape(q, q) for a in acts])
    return TensorProduct(T, M, N, Q, S)


def tensor_map(X: FiniteModule, h: ModuleMap, tensors=None) -> ModuleMap:
    """``1_X ⊗ h : X ⊗ F -> X ⊗ G``."""
    p = h.p
    tf = tensors[0] if tensors else module_tensor(X, h.source)
    tg = tensors[1] if tensors else module_tensor(X, h.target)
    big = np.kron(np.eye(X.dim, dtype=np.int64), h.matrix)
    mat = linalg.matmul(linalg.matmul(tg.projection, big, p), tf.section, p)
    return ModuleMap(tf.module, tg.module, mat, check=False)


def hom_basis(M: FiniteModule, N: FiniteModule) -> list:
    """F_p-basis of ``Hom_R(M, N)``."""
    if M.ring != N.ring:
        raise ContextMismatch("modules over different rings")
    p = M.p
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    # T is n×m, vec(T) row-major; T a - b T = 0
    rows = []
    for a, b in zip(M.actions, N.actions):
        rows.append((np.kron(np.eye(n, dtype=np.int64), a.T) - np.kron(b, np.eye(m, dtype=np.int64))) % p)
    if rows:
        basis = linalg.nullspace(np.vstack(rows), p)
    else:
        basis = np.eye(n * m, dtype=np.int64)
    return [ModuleMap(M, N, v.reshape(n, m), check=False) for v in basis]


def is_pure_finite(phi: ModuleMap) -> bool:
    """Split-injectivity of ``phi``; equal to purity for finite modules."""
    if not phi.is_injective():
        return False
    M, N = phi.source, phi.target
    if M.dim == 0:
        return True
    p = phi.p
    cands = hom_basis(N, M)
    if not cands:
        return False
    cols = [linalg.matmul(psi.matrix, phi.matrix, p).reshape(-1) for psi in cands]
    a = np.stack(cols, axis=1)
    b = np.eye(M.dim, dtype=np.int64).reshape(-1)
    return linalg.solve(a, b, p) is not None


def tensor_injective(X: FiniteModule, phi: ModuleMap) -> bool:
    return tensor_map(X, phi).is_injective()


# -- brute-force descent verification -----------------------------------------


def local_test_rings() -> dict:
    return {
        "F2": make_algebra(2, (), ()),
        "F2[e]/(e^2)": make_algebra(2, ["e"], ["e^2"]),
        "F2[x]/(x^3)": make_algebra(2, ["x"], ["x^3"]),
        "F2[x,y]/(x,y)^2": make_algebra(2, ["x", "y"], ["x^2", "x*y", "y^2"]),
    }


def enumerate_modules(R: PresentedAlgebra, max_dim: int = 3) -> list:
    """All modules of dimension ≤ ``max_dim`` with strictly upper-triangular actions.

    Over a local F_2-algebra with nilpotent maximal ideal this reaches every
    isomorphism class; exact duplicates are removed.
    """
    out = []
    seen = set()
    for d in range(max_dim + 1):
        if not R.nvars:
            out.append(FiniteModule.vector_space(R, d))
            continue
        slots = [(i, j) for i in range(d) for j in range(i + 1, d)]
        choices = list(itertools.product(range(R.p), repeat=len(slots)))
        mats = []
        for vals in choices:
            a = np.zeros((d, d), dtype=np.int64)
            for (i, j), v in zip(slots, vals):
                a[i, j] = v
            mats.append(a)
        for combo in itertools.product(mats, repeat=R.nvars):
            key = (d,) + tuple(a.tobytes() for a in combo)
            if key in seen:
                continue
            seen.add(key)
            try:
                out.append(FiniteModule(R, [a.copy() for a in combo]))
            except ModuleError:
                continue
    return out


def _random_hom(rng, M, N):
    basis = hom_basis(M, N)
    p = M.p
    mat = np.zeros((N.dim, M.dim), dtype=np.int64)
    for b in basis:
        mat = (mat + rng.randrange(p) * b.matrix) % p
    return ModuleMap(M, N, mat, check=False)


def _graph_embedding(rng, M, K):
    """Split injection ``M -> M ⊕ K``, ``m ↦ (m, ψ m)``."""
    psi = _random_hom(rng, M, K)
    N = direct_sum(M, K)
    mat = np.vstack([np.eye(M.dim, dtype=np.int64), psi.matrix]) if M.dim else np.zeros((N.dim, 0), dtype=np.int64)
    return ModuleMap(M, N, mat, check=False)


@dataclass
class DescentReport:
    instances: int = 0
    checked: int = 0
    vacuous_not_pure: int = 0
    vacuous_not_surjective: int = 0
    trivially_surjective: int = 0
    corollary_instances: int = 0
    corollary_checked: int = 0
    pure2_instances: int = 0
    purity_cross_checks: int = 0
    split_not_detected_by_tensor: int = 0
    truncated: bool = False
    violations: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.instances + self.corollary_instances + self.pure2_instances

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "instances", "checked", "vacuous_not_pure", "vacuous_not_surjective",
            "trivially_surjective", "corollary_instances", "corollary_checked",
            "pure2_instances", "purity_cross_checks", "split_not_detected_by_tensor", "truncated",
        )}
        d["violations"] = list(self.violations)
        return d


class _TensorCache:
    def __init__(self):
        self.cache = {}

    def get(self, X, F):
        key = (id(X), id(F))
        t = self.cache.get(key)
        if t is None:
            t = self.cache[key] = (module_tensor(X, F), X, F)
        return t[0]


def _one_tensor_surjective(cache, X, h):
    tf, tg = cache.get(X, h.source), cache.get(X, h.target)
    return tensor_map(X, h, (tf, tg)).is_surjective()


def sample_ring_maps() -> list:
    """Ring maps between small local algebras, both pure and not."""
    R = local_test_rings()
    F2, E, X3, M2 = R["F2"], R["F2[e]/(e^2)"], R["F2[x]/(x^3)"], R["F2[x,y]/(x,y)^2"]
    Et = make_algebra(2, ["e", "t"], ["e^2", "t^2"])
    Y6 = make_algebra(2, ["y"], ["y^6"])
    return [
        make_map(F2, E, []),
        make_map(F2, X3, []),
        make_map(E, Et, ["e"]),
        make_map(E, X3, ["x^2"]),
        make_map(X3, Y6, ["y^2"]),
        make_map(E, E, ["e"]),
        make_map(E, make_algebra(2, ["e"], ["e"]), ["e"]),
        make_map(X3, M2, ["x"]),
    ]


def verify_surjectivity_descent(budget: int = 3000, seed: int = 0, max_dim: int = 3) -> DescentReport:
    """Brute-force check of the descent of surjectivity along pure maps.

    For module instances ``(φ: M -> N, h: F -> G)`` with ``φ`` pure and
    ``1_N ⊗ h`` surjective, ``1_M ⊗ h`` must be surjective.  For pure ring
    maps ``A -> B`` and ``A``-linear ``h``, surjectivity of ``1_B ⊗ h`` must
    force surjectivity of ``h``.  The finite-generation argument is replayed
    by building ``h`` from a presentation of ``B ⊗ G``.  ``budget`` caps the
    number of module instances.
    """
    rng = random.Random(seed)
    rep = DescentReport()
    rings = local_test_rings()
    pools = {name: enumerate_modules(R, max_dim) for name, R in rings.items()}
    cache = _TensorCache()
    per_ring = max(1, budget // len(rings))
    # sampled rather than exhausted when the budget is below the (φ-source, F, G) space
    rep.truncated = any(
        per_ring < sum(1 for M in pools[n] if M.dim <= 2) * len(pools[n]) ** 2 for n in rings
    )
    for name, R in rings.items():
        pool = pools[name]
        small = [M for M in pool if M.dim <= 2]
        for _ in range(per_ring):
            M = rng.choice(small)
            if rng.random() < 0.6:
                K = rng.choice(small)
                phi = _graph_embedding(rng, M, K)
            else:
                N = rng.choice(pool)
                phi = _random_hom(rng, M, N)
            F, G = rng.choice(pool), rng.choice(pool)
            h = _random_hom(rng, F, G)
            rep.instances += 1
            pure = is_pure_finite(phi)
            if not pure:
                rep.vacuous_not_pure += 1
                continue
            if h.is_surjective():
                rep.trivially_surjective += 1
            n_surj = _one_tensor_surjective(cache, phi.target, h)
            if not n_surj:
                rep.vacuous_not_surjective += 1
                continue
            rep.checked += 1
            if not _one_tensor_surjective(cache, phi.source, h):
                rep.violations.append(f"{name}: 1_M⊗h not surjective though φ pure and 1_N⊗h surjective")
        # purity versus tensor-injectivity over the whole pool
        for _ in range(max(1, per_ring // 20)):
            M = rng.choice(small)
            phi = _graph_embedding(rng, M, rng.choice(small)) if rng.random() < 0.5 else _random_hom(rng, M, rng.choice(pool))
            if is_pure_finite(phi):
                rep.purity_cross_checks += 1
                for X in pool:
                    if not tensor_injective(X, phi):
                        rep.violations.append(f"{name}: split map not injective after tensoring")
                        break
            elif phi.is_injective() and all(tensor_injective(X, phi) for X in pool):
                rep.split_not_detected_by_tensor += 1
    _corollary_checks(rng, rep, budget)
    return rep


def _corollary_checks(rng, rep, budget):
    for f in sample_ring_maps():
        A, B = f.source, f.target
        RA = regular_module(A)
        BA = restrict_scalars(f, regular_module(B))
        unit = ModuleMap(RA, BA, _unit_columns(f, RA, BA), check=True)
        pure = is_pure_finite(unit)
        pool = enumerate_modules(A, 2 if A.nvars > 1 else 3)
        cache = _TensorCache()
        for _ in range(max(1, budget // 40)):
            F, G = rng.choice(pool), rng.choice(pool)
            h = _random_hom(rng, F, G)
            rep.corollary_instances += 1
            if not pure:
                continue
            if _one_tensor_surjective(cache, BA, h):
                rep.corollary_checked += 1
                if not h.is_surjective():
                    rep.violations.append(f"{f!r}: 1_B⊗h surjective but h not surjective")
        if pure:
            for G in pool:
                rep.pure2_instances += 1
                ok, msg = _pure2_construction(BA, G)
                if not ok:
                    rep.violations.append(f"{f!r}: {msg}")


def _unit_columns(f, RA, BA):
    """Matrix of ``A -> B`` in the standard-monomial bases."""
    A, B = f.source, f.target
    std_a = A.standard_monomials()
    std_b = B.standard_monomials()
    idx = {m: k for k, m in enumerate(std_b)}
    mat = np.zeros((len(std_b), len(std_a)), dtype=np.int64)
    for k, m in enumerate(std_a):
        img = f.apply(A.ctx.monomial(m))
        for mm, c in img.terms.items():
            mat[idx[mm], k] = c
    return mat


def _pure2_construction(BA: FiniteModule, G: FiniteModule):
    """Write generators of ``B ⊗ G`` as sums of pure tensors and check the induced ``h`` is onto."""
    A = G.ring
    p = G.p
    T = module_tensor(BA, G)
    q = T.module.dim
    if q == 0:
        # B ⊗ G = 0 with A -> B pure forces G = 0
        return (G.dim == 0, "B⊗G = 0 but G ≠ 0")
    gens_g = []
    for j in range(q):
        lift = T.section[:, j]
        for idx in np.nonzero(lift)[0]:
            a, c = divmod(int(idx), G.dim)
            vec = np.zeros(G.dim, dtype=np.int64)
            vec[c] = lift[idx]
            gens_g.append(vec)
    RA = regular_module(A)
    Fm = direct_sum(*([RA] * len(gens_g))) if gens_g else zero_module(A)
    cols = []
    std = A.standard_monomials()
    for g in gens_g:
        for m in std:
            cols.append(linalg.matmul(G.act(A.ctx.monomial(m)), g, p) if A.nvars else g)
    mat = np.stack(cols, axis=1) if cols else np.zeros((G.dim, 0), dtype=np.int64)
    h = ModuleMap(Fm, G, mat, check=True)
    cache = _TensorCache()
    if not _one_tensor_surjective(cache, BA, h):
        return False, "constructed 1_B⊗h is not surjective"
    if not h.is_surjective():
        return False, "constructed h is not surjective"
    return True, ""
