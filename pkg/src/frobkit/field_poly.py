"""Prime-field coefficients, monomial orders and sparse multivariate polynomials.

A :class:`Context` fixes the prime ``p`` and an ordered tuple of variable
names.  Every :class:`Poly` belongs to exactly one context and arithmetic
between polynomials of different contexts raises :class:`ContextMismatch`.

Terms are stored as a dict from exponent tuples to coefficients in
``[0, p)``; sorted views in any :class:`MonomialOrder` are produced on demand
by :meth:`Poly.terms_in`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from . import kernels
from .errors import (
    ContextMismatch,
    ExponentOverflow,
    InvalidContext,
    InvalidModulus,
    InvalidTwist,
)

MAX_PRIME = 2**31 - 1
MAX_EXPONENT = 2**63 - 1
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@lru_cache(maxsize=256)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def check_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int):
        raise InvalidModulus(f"modulus must be an integer, got {p!r}")
    if p > MAX_PRIME:
        raise InvalidModulus(f"modulus {p} exceeds 2^31-1")
    if not is_prime(p):
        raise InvalidModulus(f"{p} is not prime")
    return p


class FpElem:
    """An element of the prime field with ``p`` elements."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.p = check_prime(p)
        self.value = value % p

    def _other(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ContextMismatch(f"F_{self.p} vs F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FpElem(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def inverse(self) -> "FpElem":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self * FpElem(o, self.p).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpElem(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElem({self.value}, {self.p})"


class Monomial(tuple):
    """Exponent vector with a cached total degree."""

    def __new__(cls, exponents=()):
        self = super().__new__(cls, (int(e) for e in exponents))
        for e in self:
            if e < 0:
                raise ValueError("exponents must be non-negative")
            if e > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {e} exceeds 2^63-1")
        return self

    @property
    def exponents(self):
        return tuple(self)

    @property
    def total_degree(self) -> int:
        d = self.__dict__.get("_deg")
        if d is None:
            d = self.__dict__["_deg"] = sum(self)
        return d

    def __mul__(self, other):
        return Monomial(a + b for a, b in zip(self, other))

    def divides(self, other) -> bool:
        return all(a <= b for a, b in zip(self, other))


# -- monomial orders ---------------------------------------------------------
#
# Every order maps an exponent tuple to a flat tuple of ints whose
# lexicographic comparison realises the order; ``negkey`` negates that tuple
# so heapq's min-heap pops the largest monomial first.


class MonomialOrder:
    kind = "abstract"

    def key(self, m):
        raise NotImplementedError

    def negkey(self, m):
        return tuple(-k for k in self.key(m))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def _ident(self):
        return (self.kind,)

    def __repr__(self):
        return self.kind


class Lex(MonomialOrder):
    kind = "lex"

    def key(self, m):
        return tuple(m)

    def negkey(self, m):
        return tuple(-e for e in m)


class Grevlex(MonomialOrder):
    kind = "grevlex"

    def key(self, m):
        return (sum(m),) + tuple(-e for e in reversed(m))

    def negkey(self, m):
        return (-sum(m),) + tuple(reversed(m))


LEX = Lex()
GREVLEX = Grevlex()


class BlockOrder(MonomialOrder):
    """Elimination order: the ``front`` variables dominate the ``back`` ones.

    ``front`` and ``back`` are disjoint tuples of variable indices covering
    the context; each block is compared with its own inner order.
    """

    kind = "block"

    def __init__(self, front, back, front_order=GREVLEX, back_order=GREVLEX):
        self.front = tuple(front)
        self.back = tuple(back)
        if set(self.front) & set(self.back):
            raise InvalidContext("block order blocks overlap")
        self.front_order = front_order
        self.back_order = back_order

    def key(self, m):
        return self.front_order.key([m[i] for i in self.front]) + self.back_order.key(
            [m[i] for i in self.back]
        )

    def negkey(self, m):
        return self.front_order.negkey([m[i] for i in self.front]) + self.back_order.negkey(
            [m[i] for i in self.back]
        )

    def _ident(self):
        return (self.kind, self.front, self.back, self.front_order, self.back_order)

    def __repr__(self):
        return f"block({list(self.front)} >> {list(self.back)})"


def order_from_name(name: str) -> MonomialOrder:
    try:
        return {"lex": LEX, "grevlex": GREVLEX}[name]
    except KeyError:
        raise ValueError(f"unknown monomial order {name!r}") from None


def order_compare(m1, m2, order: MonomialOrder) -> int:
    """Return -1, 0 or 1 as ``m1`` is less than, equal to or greater than ``m2``."""
    if len(m1) != len(m2):
        raise ContextMismatch("monomials from different variable contexts")
    if tuple(m1) == tuple(m2):
        return 0
    if isinstance(order, BlockOrder) and len(order.front) + len(order.back) != len(m1):
        raise ContextMismatch("block order does not cover the monomial's variables")
    return 1 if order.key(m1) > order.key(m2) else -1


# -- contexts ----------------------------------------------------------------


@dataclass(frozen=True)
class Context:
    """Prime modulus plus ordered variable names; shared by all polynomials of a ring."""

    p: int
    names: tuple = ()

    def __post_init__(self):
        check_prime(self.p)
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise InvalidContext(f"duplicate variable names in {names}")
        for n in names:
            if not isinstance(n, str) or not _NAME.match(n):
                raise InvalidContext(f"invalid variable name {n!r}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InvalidContext(f"unknown variable {name!r}") from None

    def zero(self) -> "Poly":
        return Poly._raw(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = int(c) % self.p
        return Poly._raw(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name_or_index) -> "Poly":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return Poly._raw(self, {tuple(e): 1})

    def gens(self) -> list:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1) -> "Poly":
        exps = Monomial(exps)
        if len(exps) != self.nvars:
            raise ContextMismatch("exponent vector length differs from variable count")
        c = int(coeff) % self.p
        return Poly._raw(self, {tuple(exps): c} if c else {})

    def poly(self, mapping) -> "Poly":
        """Build a polynomial from ``{exponent tuple: integer coefficient}``."""
        out = {}
        for exps, c in mapping.items():
            exps = tuple(Monomial(exps))
            if len(exps) != self.nvars:
                raise ContextMismatch("exponent vector length differs from variable count")
            v = (out.get(exps, 0) + int(c)) % self.p
            if v:
                out[exps] = v
            else:
                out.pop(exps, None)
        return Poly._raw(self, out)

    def parse(self, text: str) -> "Poly":
        from .syntax import parse_poly

        return parse_poly(text, self)

    def coerce(self, value) -> "Poly":
        if isinstance(value, Poly):
            if value.ctx != self:
                raise ContextMismatch(f"{value.ctx} vs {self}")
            return value
        if isinstance(value, FpElem):
            if value.p != self.p:
                raise ContextMismatch(f"F_{value.p} element in F_{self.p} context")
            return self.const(value.value)
        if isinstance(value, int) and not isinstance(value, bool):
            return self.const(value)
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot interpret {value!r} as a polynomial")

    def __repr__(self):
        return f"Context(p={self.p}, names={self.names})"


# -- polynomials ---------------------------------------------------------------


def _mono_str(names, exps) -> str:
    parts = []
    for n, e in zip(names, exps):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


class Poly:
    """Immutable sparse polynomial over F_p.

    ``terms`` maps exponent tuples to nonzero coefficients in ``[0, p)`` and
    must not be mutated.
    """

    __slots__ = ("ctx", "terms", "_hash", "_maxexp")

    def __init__(self, ctx: Context, terms: dict):
        n, p = ctx.nvars, ctx.p
        clean = {}
        for m, c in terms.items():
            m = tuple(int(a) for a in m)
            if len(m) != n or any(a < 0 for a in m):
                raise ContextMismatch(f"exponent vector {m} does not fit {ctx}")
            c = (clean.get(m, 0) + int(c)) % p
            if c:
                clean[m] = c
            else:
                clean.pop(m, None)
        self.ctx = ctx
        self.terms = clean
        self._hash = None
        self._maxexp = None

    @classmethod
    def _raw(cls, ctx, terms):
        # trusted fast path: terms already canonical
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.terms = terms
        obj._hash = None
        obj._maxexp = None
        return obj

    # construction helpers
    def _new(self, terms):
        return Poly._raw(self.ctx, terms)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, (int, FpElem)) and not isinstance(other, bool):
            return self.ctx.coerce(other)
        return None

    @property
    def p(self) -> int:
        return self.ctx.p

    # predicates
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> int:
        return self.terms.get((0,) * self.ctx.nvars, 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self):
        return len(self.terms)

    def max_exponent(self) -> int:
        if self._maxexp is None:
            self._maxexp = max((max(m, default=0) for m in self.terms), default=0)
        return self._maxexp

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def coefficient(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    def variables_used(self) -> list:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return sorted(used)

    # ordering
    def terms_in(self, order: MonomialOrder = GREVLEX) -> list:
        """Terms as ``(exponents, coefficient)`` pairs, strictly descending."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> tuple:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> int:
        return self.leading_term(order)[1]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Poly":
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return self.scale(pow(lc, -1, self.p))

    # arithmetic
    def scale(self, c) -> "Poly":
        c = int(c) % self.p
        if c == 0:
            return self._new({})
        if c == 1:
            return self
        p = self.p
        return self._new({m: (v * c) % p for m, v in self.terms.items()})

    def mul_term(self, exps, c) -> "Poly":
        c %= self.p
        if c == 0:
            return self._new({})
        p = self.p
        return self._new(
            {tuple(a + b for a, b in zip(m, exps)): (v * c) % p for m, v in self.terms.items()}
        )

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms:
            return o
        p = self.p
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                del out[m]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return self._new({m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return self._new({})
        if self.max_exponent() + o.max_exponent() > MAX_EXPONENT:
            raise ExponentOverflow("product exponent exceeds 2^63-1")
        return self._new(kernels.mul_terms(self.terms, o.terms, self.p))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        if k == 0:
            return self.ctx.one()
        if not self.terms:
            return self
        if self.max_exponent() * k > MAX_EXPONENT:
            raise ExponentOverflow(f"power {k} overflows exponents")
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            return self._new({tuple(e * k for e in m): pow(c, k, self.p)})
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self, e: int) -> "Poly":
        return frobenius_power_poly(self, e)

    # comparison
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self.terms == self.ctx.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    # substitution
    def substitute(self, images, ctx: Context | None = None, reduce=None) -> "Poly":
        """Evaluate at ``images`` (one polynomial per variable).

        ``reduce`` is applied to every intermediate power and product, which
        keeps the computation inside a quotient ring.
        """
        if len(images) != self.ctx.nvars:
            raise ContextMismatch("need one image per variable")
        if ctx is None:
            if not images:
                raise ContextMismatch("target context required when there are no variables")
            ctx = images[0].ctx
        red = reduce if reduce is not None else (lambda f: f)
        cache = {}

        def power(i, e):
            got = cache.get((i, e))
            if got is not None:
                return got
            base = images[i]
            if base.is_monomial() or e == 1:
                r = red(base**e)
            elif e % 2:
                r = red(power(i, e - 1) * base)
            else:
                h = power(i, e // 2)
                r = red(h * h)
            cache[(i, e)] = r
            return r

        total = ctx.zero()
        for exps, c in self.terms.items():
            term = ctx.const(c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
                    if reduce is not None:
                        term = reduce(term)
            total = total + term
        return red(total)

    def rename(self, ctx: Context, positions) -> "Poly":
        """Re-home into ``ctx``; variable ``i`` becomes ``ctx`` variable ``positions[i]``."""
        if ctx.p != self.p:
            raise ContextMismatch("different characteristic")
        n = ctx.nvars
        out = {}
        for m, c in self.terms.items():
            e = [0] * n
            for i, k in enumerate(m):
                if k:
                    e[positions[i]] += k
            out[tuple(e)] = c
        return Poly._raw(ctx, out)

    # printing
    def to_str(self, order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        names = self.ctx.names
        parts = []
        for m, c in self.terms_in(order):
            mono = _mono_str(names, m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r}, p={self.p})"


def frobenius_power_poly(f: Poly, e: int) -> Poly:
    """Return ``f ** (p ** e)`` by raising every monomial termwise.

    Coefficients are fixed because ``c ** p == c`` in F_p.
    """
    if isinstance(e, bool) or not isinstance(e, int) or e < 1:
        raise InvalidTwist(f"twist exponent must be a positive integer, got {e!r}")
    q = f.p**e
    if f.max_exponent() * q > MAX_EXPONENT:
        raise ExponentOverflow(f"p^e = {q} overflows exponents")
    return f._new({tuple(k * q for k in m): c for m, c in f.terms.items()})


def poly_arith(op: str, f: Poly, g_or_k) -> Poly:
    if op == "add":
        return _binary(f, g_or_k, "add")
    if op == "mul":
        return _binary(f, g_or_k, "mul")
    if op == "pow":
        return f**g_or_k
    raise ValueError(f"unknown operation {op!r}")


def _binary(f, g, op):
    if isinstance(g, Poly) and g.ctx != f.ctx:
        raise ContextMismatch(f"{f.ctx} vs {g.ctx}")
    return f + g if op == "add" else f * g
