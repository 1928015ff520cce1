import random

import numpy as np
import pytest

from frobkit.errors import ContextMismatch
from frobkit.finmod import (
    FiniteModule,
    ModuleError,
    ModuleMap,
    _random_hom,
    cokernel,
    cyclic_module,
    direct_sum,
    enumerate_modules,
    hom_basis,
    identity,
    is_pure_finite,
    local_test_rings,
    module_tensor,
    regular_module,
    tensor_injective,
    tensor_map,
    verify_surjectivity_descent,
    zero_module,
)

RINGS = local_test_rings()
EPS = RINGS["F2[e]/(e^2)"]


@pytest.fixture(scope="module")
def modules():
    return {name: enumerate_modules(R) for name, R in RINGS.items()}


def _pairs(modules, n, seed):
    rng = random.Random(seed)
    names = sorted(modules)
    for _ in range(n):
        mods = modules[rng.choice(names)]
        yield rng.choice(mods), rng.choice(mods)


class TestConstruction:
    def test_bad_actions_rejected(self):
        with pytest.raises(ModuleError):
            # e acting as the identity violates e^2 = 0
            FiniteModule(EPS, [np.eye(2, dtype=np.int64)])

    def test_noncommuting_rejected(self):
        R = RINGS["F2[x,y]/(x,y)^2"]
        a = np.array([[0, 0, 0], [1, 0, 0], [0, 0, 0]])
        b = np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0]])
        FiniteModule(R, [a, b])
        c = np.array([[0, 0, 0], [0, 0, 0], [0, 1, 0]])
        with pytest.raises(ModuleError):
            FiniteModule(R, [a, c])

    def test_map_must_intertwine(self):
        R = regular_module(EPS)
        with pytest.raises(ModuleError):
            ModuleMap(R, R, [[1, 0], [0, 0]])

    def test_regular_and_cyclic(self):
        assert regular_module(RINGS["F2[x]/(x^3)"]).dim == 3
        assert cyclic_module(EPS, ["e"]).dim == 1
        assert regular_module(RINGS["F2[x,y]/(x,y)^2"]).dim == 3

    def test_enumeration_valid(self, modules):
        counts = {k: len(v) for k, v in modules.items()}
        assert counts == {"F2": 4, "F2[e]/(e^2)": 10, "F2[x]/(x^3)": 12, "F2[x,y]/(x,y)^2": 34}
        for mods in modules.values():
            for M in mods:
                if M.ring.nvars:
                    FiniteModule(M.ring, M.actions)  # re-validates
                assert M.dim <= 3


class TestTensor:
    @pytest.mark.parametrize("name", sorted(RINGS))
    def test_unit_law(self, name, modules):
        R = regular_module(RINGS[name])
        for N in modules[name]:
            assert module_tensor(R, N).module.dim == N.dim

    def test_residue_field(self):
        k = cyclic_module(EPS, ["e"])
        T = module_tensor(k, k)
        assert T.module.dim == 1

    def test_zero(self):
        Z = zero_module(EPS)
        assert module_tensor(Z, regular_module(EPS)).module.dim == 0

    def test_ring_mismatch(self):
        with pytest.raises(ContextMismatch):
            module_tensor(regular_module(EPS), regular_module(RINGS["F2[x]/(x^3)"]))

    def test_symmetry(self, modules):
        for M, N in _pairs(modules, 50, 0):
            assert module_tensor(M, N).module.dim == module_tensor(N, M).module.dim

    def test_pure_tensors_balance(self):
        R = regular_module(EPS)
        k = cyclic_module(EPS, ["e"])
        T = module_tensor(R, k)
        m = np.array([0, 1])  # e in R
        n = np.array([1])
        # e·1 ⊗ 1 = 1 ⊗ e·1 = 0
        assert not T.pure_tensor(m, n).any()

    def test_right_exact(self, modules):
        rng = random.Random(5)
        done = 0
        for X, F in _pairs(modules, 60, 1):
            G = rng.choice([m for m in modules_of(modules, X.ring)])
            h = _random_hom(rng, F, G)
            if h is None:
                continue
            C, _ = cokernel(h)
            lhs = tensor_map(X, h)
            coker_dim = lhs.target.dim - lhs.rank()
            assert coker_dim == module_tensor(X, C).module.dim
            done += 1
        assert done >= 30


def modules_of(modules, R):
    for mods in modules.values():
        if mods and mods[0].ring == R:
            return mods
    return []


class TestHom:
    @pytest.mark.parametrize("name", sorted(RINGS))
    def test_from_regular(self, name, modules):
        R = regular_module(RINGS[name])
        for N in modules[name]:
            assert len(hom_basis(R, N)) == N.dim

    def test_residue_into_ring(self):
        assert len(hom_basis(cyclic_module(EPS, ["e"]), regular_module(EPS))) == 1

    def test_into_zero(self):
        assert hom_basis(regular_module(EPS), zero_module(EPS)) == []

    def test_basis_intertwines(self, modules):
        for M, N in _pairs(modules, 30, 2):
            for h in hom_basis(M, N):
                ModuleMap(M, N, h.matrix)


class TestPurity:
    def test_split_inclusion(self):
        R = regular_module(EPS)
        RR = direct_sum(R, R)
        inc = np.vstack([np.eye(2, dtype=np.int64), np.zeros((2, 2), dtype=np.int64)])
        assert is_pure_finite(ModuleMap(R, RR, inc))

    def test_socle_inclusion_not_pure(self):
        k = cyclic_module(EPS, ["e"])
        R = regular_module(EPS)
        phi = ModuleMap(k, R, [[0], [1]])
        assert phi.is_injective()
        assert not is_pure_finite(phi)
        assert not tensor_injective(k, phi)

    def test_identity(self, modules):
        for M in modules["F2[x]/(x^3)"]:
            assert is_pure_finite(identity(M))

    def test_not_injective(self):
        R = regular_module(EPS)
        assert not is_pure_finite(ModuleMap(R, R, [[0, 0], [1, 0]]))

    def test_pure_implies_tensor_injective(self, modules):
        rng = random.Random(11)
        pure_seen = 0
        for M, N in _pairs(modules, 80, 3):
            phi = _random_hom(rng, M, N)
            if phi is None or not is_pure_finite(phi):
                continue
            pure_seen += 1
            for X in modules_of(modules, M.ring):
                assert tensor_injective(X, phi)
        assert pure_seen >= 5


@pytest.fixture(scope="module")
def report():
    return verify_surjectivity_descent()


class TestDescent:
    def test_zero_violations(self, report):
        assert report.violations == []
        assert report.checked >= 500
        assert report.split_not_detected_by_tensor == 0

    def test_controls_counted(self, report):
        assert report.vacuous_not_pure > 0
        assert report.trivially_surjective > 0
        assert report.corollary_checked > 0
        assert report.pure2_instances > 0
        assert report.purity_cross_checks > 0

    def test_deterministic(self, report):
        assert verify_surjectivity_descent().to_dict() == report.to_dict()

    def test_small_budget_truncates(self):
        small = verify_surjectivity_descent(budget=50)
        assert small.truncated
        assert small.instances <= 50
