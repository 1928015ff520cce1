import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobkit import kernels
from frobkit.field_poly import GREVLEX, LEX, Context, Poly

BACKENDS = kernels.backends()
PRIMES = [2, 3, 7, 65521, 2**31 - 1]

terms_st = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(1, 10**6), max_size=6
)


def canon(d, p):
    out = {}
    for m, c in d.items():
        c %= p
        if c:
            out[m] = c
    return out


def test_cython_backend_selected_when_built():
    if "cython" in BACKENDS:
        assert kernels.BACKEND == "cython" or os.environ.get("FROBKIT_PURE_PYTHON")


def test_env_forces_fallback():
    code = "from frobkit import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, FROBKIT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("name", sorted(BACKENDS))
@given(a=terms_st, b=terms_st, p=st.sampled_from(PRIMES))
def test_mul_terms_matches_schoolbook(name, a, b, p):
    a, b = canon(a, p), canon(b, p)
    got = BACKENDS[name].mul_terms(a, b, p)
    want = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = (ma[0] + mb[0], ma[1] + mb[1])
            want[m] = (want.get(m, 0) + ca * cb) % p
    assert got == {m: c for m, c in want.items() if c}


@given(
    f=terms_st,
    gens=st.lists(terms_st.filter(bool), min_size=1, max_size=3),
    p=st.sampled_from([2, 3, 7, 2**31 - 1]),
    order=st.sampled_from([LEX, GREVLEX]),
)
def test_normal_form_backends_agree(f, gens, p, order):
    ctx = Context(p, ("x", "y"))
    lms, tails = [], []
    for g in gens:
        g = Poly(ctx, g)
        if not g:
            continue
        g = g.monic(order)
        lm = g.leading_monomial(order)
        lms.append(lm)
        tails.append([(m, c) for m, c in g.terms.items() if m != lm])
    f = canon(f, p)
    results = [list(b.normal_form(f, lms, tails, order.negkey, p).items()) for b in BACKENDS.values()]
    assert all(r == results[0] for r in results)
    # no remainder term is divisible by a leading monomial
    for m, _ in results[0]:
        assert not any(all(a <= b for a, b in zip(lm, m)) for lm in lms)
    # remainder is returned in descending order
    keys = [order.key(m) for m, _ in results[0]]
    assert keys == sorted(keys, reverse=True)


@given(
    rows=st.integers(1, 6),
    cols=st.integers(1, 6),
    p=st.sampled_from([2, 3, 5, 65521]),
    seed=st.integers(0, 10**6),
)
def test_rref_backends_agree(rows, cols, p, seed):
    rng = np.random.default_rng(seed)
    mat = rng.integers(0, p, size=(rows, cols), dtype=np.int64)
    outs = [b.rref(mat.copy(), p) for b in BACKENDS.values()]
    r0, piv0 = outs[0]
    for r, piv in outs[1:]:
        assert list(piv) == list(piv0)
        assert np.array_equal(np.asarray(r) % p, np.asarray(r0) % p)
    r0 = np.asarray(r0) % p
    # pivot columns are unit vectors
    for i, c in enumerate(piv0):
        col = r0[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1
