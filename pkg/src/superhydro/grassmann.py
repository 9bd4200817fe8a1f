"""Parity-graded exact expressions with a canonical normal form.

An expression is a sum of terms.  A term is a rational coefficient times a
commuting monomial (even atoms raised to exponents) times an ordered product
of distinct odd atoms.  Odd atoms are kept sorted; reordering contributes the
sign of the permutation and a repeated odd atom kills the term.

Odd atoms sort as: odd coordinates (theta before phi), fermionic constants by
name, then odd function jets.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Union

EVEN = 0
ODD = 1

ONE = Fraction(1)
ZERO = Fraction(0)


class GrassmannError(ValueError):
    """Raised for operations that are undefined on graded expressions."""


Number = Union[int, Fraction]


# ---------------------------------------------------------------- atoms


class Atom:
    """An indivisible factor.  Subclasses fill in ``key`` and ``parity``."""

    __slots__ = ("key", "parity", "_hash", "_free")

    def _setup(self, key, parity):
        self.key = key
        self.parity = parity
        self._hash = hash(key)
        self._free = None

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Atom) and self._hash == other._hash and self.key == other.key
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"{type(self).__name__}<{Expr.atom(self)}>"

    @property
    def free_symbols(self) -> frozenset:
        if self._free is None:
            self._free = self._compute_free()
        return self._free

    def _compute_free(self) -> frozenset:
        return frozenset()

    def d(self, v: "Symbol") -> "Expr":
        """Derivative along the even coordinate ``v`` (chain rule included)."""
        raise NotImplementedError

    def rebuild(self, fn) -> "Expr":
        """Apply ``Expr.replace(fn)`` to every expression nested in the atom."""
        return Expr.atom(self)


_SYMBOL_KINDS = {
    # kind: (sort category, parity)
    "fcoord": (0, ODD),
    "fconst": (1, ODD),
    "sign": (10, EVEN),
    "const": (11, EVEN),
    "coord": (12, EVEN),
}
_ODD_COORD_RANK = {"theta": 0, "phi": 1}


class Symbol(Atom):
    """A named coordinate, constant or sign symbol.

    Kinds: ``coord`` (even coordinate), ``fcoord`` (odd coordinate),
    ``const``, ``fconst`` (fermionic constant) and ``sign`` (squares to 1).
    """

    __slots__ = ("name", "kind")

    def __init__(self, name: str, kind: str = "const"):
        if kind not in _SYMBOL_KINDS:
            raise GrassmannError(f"unknown symbol kind {kind!r}")
        self.name = name
        self.kind = kind
        cat, parity = _SYMBOL_KINDS[kind]
        if kind == "fcoord":
            key = (cat, _ODD_COORD_RANK.get(name, 2), name)
        else:
            key = (cat, name)
        self._setup(key, parity)

    def _compute_free(self):
        return frozenset((self,))

    @property
    def is_coordinate(self) -> bool:
        return self.kind in ("coord", "fcoord")

    def d(self, v):
        return Expr.one() if self == v else Expr.zero()


class Func(Atom):
    """Application of a named function (or field jet) to argument expressions.

    ``derivs[i]`` counts derivatives taken in the i-th slot.
    """

    __slots__ = ("name", "args", "derivs")

    def __init__(self, name: str, args: tuple, derivs: Optional[tuple] = None, parity: int = EVEN):
        args = tuple(a if isinstance(a, Expr) else as_expr(a) for a in args)
        if derivs is None:
            derivs = (0,) * len(args)
        derivs = tuple(int(k) for k in derivs)
        if len(derivs) != len(args):
            raise GrassmannError("derivative counts do not match arguments")
        for a in args:
            if a.has_odd():
                raise GrassmannError("function arguments must be free of odd factors")
        self.name = name
        self.args = args
        self.derivs = derivs
        cat = 2 if parity == ODD else 13
        self._setup((cat, name, derivs, tuple(a.key for a in args)), parity)

    def _compute_free(self):
        out = frozenset()
        for a in self.args:
            out |= a.free_symbols
        return out

    def with_derivs(self, derivs) -> "Func":
        return Func(self.name, self.args, tuple(derivs), self.parity)

    def d(self, v):
        total = Expr.zero()
        for i, a in enumerate(self.args):
            if v not in a.free_symbols:
                continue
            da = a.diff(v)
            if da.is_zero_literal():
                continue
            derivs = list(self.derivs)
            derivs[i] += 1
            total = total + Expr.atom(self.with_derivs(derivs)) * da
        return total

    def rebuild(self, fn):
        return Expr.atom(Func(self.name, tuple(a.replace(fn) for a in self.args), self.derivs, self.parity))


class Exp(Atom):
    """Exponential of an even, odd-free expression."""

    __slots__ = ("arg",)

    def __init__(self, arg: "Expr"):
        if arg.has_odd():
            raise GrassmannError("exponential argument must be free of odd factors")
        self.arg = arg
        self._setup((14, arg.key), EVEN)

    def _compute_free(self):
        return self.arg.free_symbols

    def d(self, v):
        return Expr.atom(self) * self.arg.diff(v)

    def rebuild(self, fn):
        return exp(self.arg.replace(fn))


class Integral(Atom):
    """Antiderivative of ``integrand`` in ``var`` evaluated at ``arg``."""

    __slots__ = ("integrand", "var", "arg")

    def __init__(self, integrand: "Expr", var: Symbol, arg: "Expr"):
        if integrand.has_odd() or arg.has_odd():
            raise GrassmannError("antiderivative must be free of odd factors")
        self.integrand = integrand
        self.var = var
        self.arg = arg
        self._setup((15, integrand.key, var.key, arg.key), EVEN)

    def _compute_free(self):
        return (self.integrand.free_symbols - {self.var}) | self.arg.free_symbols

    def d(self, v):
        return self.integrand.subs({self.var: self.arg}) * self.arg.diff(v)

    def rebuild(self, fn):
        var = self.var

        def inner(a):
            return None if a == var else fn(a)

        return Expr.atom(Integral(self.integrand.replace(inner), var, self.arg.replace(fn)))


class Base(Atom):
    """An opaque sum used as the base of a non-expanded power (denominators)."""

    __slots__ = ("expr",)

    def __init__(self, expr: "Expr"):
        self.expr = expr
        self._setup((16, expr.key), EVEN)

    def _compute_free(self):
        return self.expr.free_symbols

    def d(self, v):
        return self.expr.diff(v)

    def rebuild(self, fn):
        return self.expr.replace(fn)


class Radical(Atom):
    """A prime number carrying a fractional exponent in [0, 1) (exact real roots)."""

    __slots__ = ("prime",)

    def __init__(self, prime: int):
        self.prime = int(prime)
        self._setup((9, self.prime), EVEN)

    def d(self, v):
        return Expr.zero()


def _factor(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------- helpers


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def _ekey(e):
    return (0, e) if isinstance(e, Fraction) else (1, e.key)


def _mono_key(mono):
    even, odd = mono
    return (len(odd), tuple((a.key, _ekey(e)) for a, e in even), tuple(a.key for a in odd))


def _exp_add(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    s = as_expr(a) + as_expr(b)
    c = s.as_fraction()
    return s if c is None else c


def _exp_mul(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    s = as_expr(a) * as_expr(b)
    c = s.as_fraction()
    return s if c is None else c


def _sort_odd(atoms):
    """Sort odd atoms, returning (sign, tuple); sign 0 means a repeated atom."""
    lst = list(atoms)
    n = len(lst)
    if n < 2:
        return 1, tuple(lst)
    sign = 1
    for i in range(1, n):
        cur = lst[i]
        ck = cur.key
        j = i - 1
        while j >= 0 and lst[j].key > ck:
            lst[j + 1] = lst[j]
            j -= 1
            sign = -sign
        if j >= 0 and lst[j].key == ck:
            return 0, ()
        lst[j + 1] = cur
    return sign, tuple(lst)


def _canon(coeff: Fraction, even_items, odd_atoms):
    """Canonicalize one raw product.  Returns a list of (mono, coeff)."""
    sign, odd = _sort_odd(odd_atoms)
    if sign == 0 or coeff == 0:
        return []
    if sign < 0:
        coeff = -coeff
    powers = {}
    exp_arg = None
    for atom, e in even_items:
        if type(atom) is Exp:
            a = atom.arg if e == 1 else atom.arg * as_expr(e)
            exp_arg = a if exp_arg is None else exp_arg + a
            continue
        prev = powers.get(atom)
        powers[atom] = e if prev is None else _exp_add(prev, e)
    even = []
    expand = []
    for atom, e in powers.items():
        if type(atom) is Symbol and atom.kind == "sign":
            if not isinstance(e, Fraction) or e.denominator != 1:
                raise GrassmannError(f"sign symbol {atom.name} needs an integer exponent")
            e = Fraction(e.numerator % 2)
        if type(atom) is Radical:
            if not isinstance(e, Fraction):
                raise GrassmannError("radicals need rational exponents")
            whole = e.numerator // e.denominator
            if whole:
                coeff = coeff * Fraction(atom.prime) ** whole
                e = e - whole
        if isinstance(e, Fraction):
            if e == 0:
                continue
            if type(atom) is Base and e.denominator == 1 and e > 0:
                expand.append((atom.expr, int(e)))
                continue
        even.append((atom, e))
    if exp_arg is not None and exp_arg.terms:
        even.append((Exp(exp_arg), ONE))
    even.sort(key=lambda p: p[0].key)
    mono = (tuple(even), odd)
    if not expand:
        return [(mono, coeff)]
    result = Expr._from_mono(mono, coeff)
    for b, k in expand:
        result = result * b ** k
    return list(result.terms)


@lru_cache(maxsize=200_000)
def _mul_mono(m1, m2):
    if not m1[0] and not m2[0]:
        sign, odd = _sort_odd(m1[1] + m2[1])
        if sign == 0:
            return ()
        return ((((), odd), Fraction(sign)),)
    if not m1[1] and not m2[1] and (not m1[0] or not m2[0]):
        return (((m1[0] or m2[0], ()), ONE),)
    return tuple(_canon(ONE, m1[0] + m2[0], m1[1] + m2[1]))


# ---------------------------------------------------------------- expressions


class Expr:
    """Immutable, hashable graded expression in canonical form."""

    __slots__ = ("terms", "_key", "_hash", "_free")

    def __init__(self, terms=()):
        self.terms = tuple(terms)
        self._key = None
        self._hash = None
        self._free = None

    # -- construction
    @staticmethod
    def _from_dict(d) -> "Expr":
        items = [(m, c) for m, c in d.items() if c != 0]
        items.sort(key=lambda mc: _mono_key(mc[0]))
        return Expr(items)

    @staticmethod
    def _from_mono(mono, coeff) -> "Expr":
        return Expr(((mono, _frac(coeff)),)) if coeff != 0 else Expr()

    @staticmethod
    def zero() -> "Expr":
        return _ZERO_EXPR

    @staticmethod
    def one() -> "Expr":
        return _ONE_EXPR

    @staticmethod
    def const(c: Number) -> "Expr":
        c = _frac(c)
        return Expr(((((), ()), c),)) if c != 0 else Expr()

    @staticmethod
    def atom(a: Atom, power=ONE) -> "Expr":
        if a.parity == ODD:
            if power != 1:
                raise GrassmannError("odd atoms cannot carry exponents")
            return Expr(((((), (a,)), ONE),))
        return Expr.product(ONE, [(a, power if not isinstance(power, int) else Fraction(power))], [])

    @staticmethod
    def product(coeff, even_items: Iterable, odd_atoms: Iterable) -> "Expr":
        """Normalize a raw product ``coeff * even... * odd...`` (odd order as given)."""
        d = {}
        for m, c in _canon(_frac(coeff), list(even_items), list(odd_atoms)):
            d[m] = d.get(m, 0) + c
        return Expr._from_dict(d)

    # -- identity
    @property
    def key(self):
        if self._key is None:
            self._key = tuple((_mono_key(m), c) for m, c in self.terms)
        return self._key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Expr):
            return self is other or self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Expr.const(other).terms
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Expr({str(self)!r})"

    def __str__(self):
        from .cli.render import to_text

        return to_text(self)

    # -- queries
    @property
    def free_symbols(self) -> frozenset:
        if self._free is None:
            out = set()
            for (even, odd), _ in self.terms:
                for a, e in even:
                    out |= a.free_symbols
                    if not isinstance(e, Fraction):
                        out |= e.free_symbols
                for a in odd:
                    out |= a.free_symbols
            self._free = frozenset(out)
        return self._free

    def atoms(self) -> set:
        out = set()
        for (even, odd), _ in self.terms:
            out.update(a for a, _ in even)
            out.update(odd)
        return out

    def has_odd(self) -> bool:
        return any(m[1] for m, _ in self.terms)

    @property
    def parity(self) -> int:
        """Parity of a homogeneous expression (zero counts as even)."""
        ps = {len(m[1]) % 2 for m, _ in self.terms}
        if len(ps) > 1:
            raise GrassmannError("expression is not parity-homogeneous")
        return ps.pop() if ps else EVEN

    def is_zero_literal(self) -> bool:
        return not self.terms

    def as_fraction(self) -> Optional[Fraction]:
        if not self.terms:
            return ZERO
        if len(self.terms) == 1:
            (even, odd), c = self.terms[0]
            if not even and not odd:
                return c
        return None

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def body(self) -> "Expr":
        """Part of the expression free of odd factors."""
        return Expr([t for t in self.terms if not t[0][1]])

    # -- arithmetic
    def __add__(self, other):
        other = as_expr(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return Expr._from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return Expr([(m, -c) for m, c in self.terms])

    def __sub__(self, other):
        return self + (-as_expr(other))

    def __rsub__(self, other):
        return as_expr(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return _ZERO_EXPR
            return Expr([(m, c * other) for m, c in self.terms])
        other = as_expr(other)
        d = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                c12 = c1 * c2
                for m, c in _mul_mono(m1, m2):
                    d[m] = d.get(m, 0) + c12 * c
        return Expr._from_dict(d)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return as_expr(other) * self

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / _frac(other))
        return self * as_expr(other).inverse()

    def __rtruediv__(self, other):
        return as_expr(other) * self.inverse()

    def inverse(self) -> "Expr":
        if not self.terms:
            raise ZeroDivisionError("division by zero expression")
        if self.has_odd():
            if len(self.terms) == 1:
                raise GrassmannError("cannot divide by an odd or nilpotent factor")
            body = self.body()
            if not body.terms:
                raise GrassmannError("cannot divide by a nilpotent expression")
            # (b + n)^-1 = b^-1 * sum (-n b^-1)^k, terminating
            binv = body.inverse()
            nb = -(self - body) * binv
            out, power = Expr.one(), Expr.one()
            while True:
                power = power * nb
                if not power.terms:
                    break
                out = out + power
            return binv * out
        if len(self.terms) == 1:
            (even, _), c = self.terms[0]
            items = []
            for a, e in even:
                items.append((a, -e if isinstance(e, Fraction) else -e))
            return Expr.product(ONE / c, items, [])
        lead = self.terms[0][1]
        return Expr.product(ONE / lead, [(Base(self * (ONE / lead)), Fraction(-1))], [])

    def __pow__(self, e):
        if isinstance(e, int) or (isinstance(e, Fraction) and e.denominator == 1):
            n = int(e)
            if n < 0:
                return self.inverse() ** (-n)
            out = Expr.one()
            base = self
            while n:
                if n & 1:
                    out = out * base
                n >>= 1
                if n:
                    base = base * base
            return out
        if isinstance(e, Expr):
            c = e.as_fraction()
            if c is not None:
                return self ** c
            if e.has_odd():
                raise GrassmannError("exponents must be even and odd-free")
        else:
            e = _frac(e)
        # non-integer or symbolic exponent
        if self.has_odd():
            raise GrassmannError("cannot raise an odd-containing expression to a non-integer power")
        if len(self.terms) == 1:
            (even, _), c = self.terms[0]
            coeff, items = _coefficient_power(c, e)
            for a, k in even:
                if type(a) is Symbol and a.kind == "sign":
                    raise GrassmannError("sign symbols only take integer exponents")
                items.append((a, _exp_mul(k, e)))
            return Expr.product(coeff, items, [])
        if not self.terms:
            raise GrassmannError("zero to a non-integer power")
        lead = self.terms[0][1]
        coeff = _rational_power(lead, e)
        return Expr.product(coeff, [(Base(self * (ONE / lead)), e)], [])

    # -- calculus
    def diff(self, v: Symbol) -> "Expr":
        """Derivative along coordinate ``v``; for odd ``v`` the left derivative."""
        if not isinstance(v, Symbol) or not v.is_coordinate:
            raise GrassmannError(f"{Expr.atom(v) if isinstance(v, Atom) else v} is not a coordinate")
        if v not in self.free_symbols:
            return _ZERO_EXPR
        if v.parity == ODD:
            return self._left_derivative(v)
        acc = _ZERO_EXPR
        for (even, odd), c in self.terms:
            for i, (a, e) in enumerate(even):
                if v not in a.free_symbols:
                    continue
                if not isinstance(e, Fraction) and v in e.free_symbols:
                    raise GrassmannError("exponent depends on the differentiation variable")
                if type(a) is Exp:
                    da = a.arg.diff(v)
                    if da.terms:
                        acc = acc + Expr.product(c, even, odd) * da
                    continue
                da = a.d(v)
                if not da.terms:
                    continue
                rest = list(even)
                rest[i] = (a, _exp_add(e, Fraction(-1)))
                factor = Expr.product(_scale(c, e), rest, odd)
                if not isinstance(e, Fraction):
                    factor = factor * e
                acc = acc + factor * da
            for j, a in enumerate(odd):
                if v not in a.free_symbols:
                    continue
                da = a.d(v)
                if not da.terms:
                    continue
                left = Expr.product(c, even, odd[:j])
                right = Expr.product(ONE, [], odd[j + 1:])
                acc = acc + left * da * right
        return acc

    def _left_derivative(self, v: Symbol) -> "Expr":
        d = {}
        for (even, odd), c in self.terms:
            for a, _ in even:
                if v in a.free_symbols:
                    raise GrassmannError("odd coordinate inside an even atom")
            for j, a in enumerate(odd):
                if a == v:
                    m = (even, odd[:j] + odd[j + 1:])
                    d[m] = d.get(m, 0) + (c if j % 2 == 0 else -c)
                elif v in a.free_symbols:
                    raise GrassmannError("odd coordinate inside an odd atom")
        return Expr._from_dict(d)

    def pdiff(self, target: Atom) -> "Expr":
        """Partial derivative treating ``target`` as an independent variable.

        Other atoms are held fixed, even if they contain ``target``.  For odd
        targets this is the left derivative.
        """
        d = {}
        if target.parity == ODD:
            for (even, odd), c in self.terms:
                for j, a in enumerate(odd):
                    if a == target:
                        m = (even, odd[:j] + odd[j + 1:])
                        d[m] = d.get(m, 0) + (c if j % 2 == 0 else -c)
            return Expr._from_dict(d)
        acc = _ZERO_EXPR
        for (even, odd), c in self.terms:
            for i, (a, e) in enumerate(even):
                if a != target:
                    continue
                rest = list(even)
                rest[i] = (a, _exp_add(e, Fraction(-1)))
                term = Expr.product(_scale(c, e), rest, odd)
                if not isinstance(e, Fraction):
                    term = term * e
                acc = acc + term
        return acc

    # -- substitution
    def replace(self, fn: Callable[[Atom], Optional["Expr"]]) -> "Expr":
        """Rebuild the expression, replacing atoms for which ``fn`` returns an Expr.

        ``fn`` is consulted before descending into an atom.  Odd atoms are
        replaced in place, so the product order is preserved.
        """
        acc = _ZERO_EXPR
        cache = {}

        def sub(a):
            r = cache.get(a)
            if r is None:
                r = fn(a)
                if r is None:
                    r = a.rebuild(fn)
                cache[a] = r
            return r

        for (even, odd), c in self.terms:
            term = Expr.const(c)
            for a, e in even:
                r = sub(a)
                if not isinstance(e, Fraction):
                    e = e.replace(fn)
                    ec = e.as_fraction()
                    if ec is not None:
                        e = ec
                term = term * (r if e == 1 else r ** e)
            for a in odd:
                term = term * sub(a)
            acc = acc + term
        return acc

    def subs(self, mapping: Mapping[Symbol, "Expr"]) -> "Expr":
        """Substitute symbols everywhere (function arguments, exponents, ...)."""
        mapping = {k: as_expr(v) for k, v in mapping.items()}
        keys = set(mapping)
        if not (self.free_symbols & keys):
            return self

        def fn(a):
            if type(a) is Symbol:
                return mapping.get(a)
            if not (a.free_symbols & keys):
                return Expr.atom(a)
            return None

        return self.replace(fn)

    def substitute_fields(self, binding: Mapping[str, "Expr"], coords=None) -> "Expr":
        """Replace field jets ``F`` of ``(x, t)`` by derivatives of ``binding[F]``.

        Fields named in the expression but missing from ``binding`` raise.
        """
        coords = coords or (X, T)
        cache = {}

        def value(name, derivs):
            k = (name, derivs)
            if k not in cache:
                if derivs == (0,) * len(coords):
                    cache[k] = binding[name]
                else:
                    for i, n in enumerate(derivs):
                        if n:
                            lower = list(derivs)
                            lower[i] -= 1
                            cache[k] = value(name, tuple(lower)).diff(coords[i])
                            break
            return cache[k]

        def fn(a):
            if type(a) is Func and a.args == tuple(as_expr(c) for c in coords):
                if a.name not in binding:
                    if a.name in FIELD_PARITY:
                        raise GrassmannError(f"no binding for field {a.name}")
                    return None
                return value(a.name, a.derivs)
            return None

        return self.replace(fn)

    # -- constraints and denominators
    def apply_constraints(self, constraints) -> "Expr":
        return apply_constraints(self, constraints)

    def clear_denominators(self) -> "Expr":
        """Multiply through by the denominators (negative integer powers of sums)."""
        need = {}
        for (even, _), _ in self.terms:
            for a, e in even:
                if type(a) is Base and isinstance(e, Fraction) and e < 0 and e.denominator == 1:
                    need[a] = max(need.get(a, 0), int(-e))
        if not need:
            return self
        # raise exponents term by term; multiplying by Base^k would expand it first
        out = _ZERO_EXPR
        for (even, odd), c in self.terms:
            items = dict(even)
            for b, k in need.items():
                items[b] = items.get(b, ZERO) + k
            out = out + Expr.product(c, [(a, e) for a, e in items.items() if e != 0], odd)
        return out

    def is_zero(self) -> bool:
        if not self.terms:
            return True
        return not self.clear_denominators().terms


def _scale(c: Fraction, e) -> Fraction:
    return c * e if isinstance(e, Fraction) else c


def _coefficient_power(c: Fraction, e):
    """c^e as (rational, [(Radical, exponent), ...])."""
    if c == 1:
        return ONE, []
    if not isinstance(e, Fraction):
        raise GrassmannError("symbolic power of a numeric coefficient")
    sign = ONE
    if c < 0:
        if e.denominator % 2 == 0:
            raise GrassmannError("even root of a negative coefficient")
        sign = Fraction(-1) ** e.numerator
        c = -c
    items = []
    for p, k in _factor(c.numerator).items():
        items.append((Radical(p), k * e))
    for p, k in _factor(c.denominator).items():
        items.append((Radical(p), -k * e))
    return sign, items


def _rational_power(c: Fraction, e) -> Fraction:
    if c == 1:
        return ONE
    if not isinstance(e, Fraction):
        raise GrassmannError("symbolic power of a numeric coefficient")
    if c < 0:
        raise GrassmannError("fractional power of a negative coefficient")
    p, q = e.numerator, e.denominator
    num, den = _int_root(c.numerator, q), _int_root(c.denominator, q)
    if num is None or den is None:
        raise GrassmannError(f"{c}^{e} is not rational")
    return Fraction(num, den) ** p


def _int_root(n: int, q: int):
    r = round(n ** (1.0 / q))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** q == n:
            return cand
    return None


_ZERO_EXPR = Expr()
_ONE_EXPR = Expr(((((), ()), ONE),))


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return Expr.const(v)
    if isinstance(v, Atom):
        return Expr.atom(v)
    raise TypeError(f"cannot convert {v!r} to an expression")


# ---------------------------------------------------------------- public API


def normalize(e) -> Expr:
    """Canonical form.  Expressions are kept canonical, so this is a coercion."""
    return as_expr(e)


def mul(a, b) -> Expr:
    return as_expr(a) * as_expr(b)


def diff(e, v: Symbol) -> Expr:
    return as_expr(e).diff(v)


def substitute(e, binding: Mapping[str, Expr]) -> Expr:
    return as_expr(e).substitute_fields(binding)


def _constraint_rule(lhs, rhs):
    lhs = as_expr(lhs)
    if len(lhs.terms) != 1:
        raise GrassmannError("constraint left side must be a single product")
    (even, odd), c = lhs.terms[0]
    if even or not odd or any(a.kind != "fconst" if type(a) is Symbol else True for a in odd):
        raise GrassmannError("constraint left side must be a product of fermionic constants")
    rhs = as_expr(rhs)
    if len(odd) % 2 != rhs.parity and rhs.terms:
        raise GrassmannError("constraint sides differ in parity")
    return odd, rhs * (ONE / c)


def apply_constraints(e, constraints) -> Expr:
    """Rewrite products of fermionic constants until no rule applies.

    ``constraints`` is a sequence of ``(product, value)`` pairs, e.g.
    ``(D1*D2, eps)``.
    """
    rules = {}
    for lhs, rhs in constraints:
        odd, val = _constraint_rule(lhs, rhs)
        if odd in rules and rules[odd] != val:
            raise GrassmannError("contradictory constraints for the same product")
        rules[odd] = val
    e = as_expr(e)
    for _ in range(1000):
        changed = False
        keep = {}
        acc = _ZERO_EXPR
        for (even, odd), c in e.terms:
            hit = None
            oddset = set(odd)
            for pat, val in rules.items():
                if oddset.issuperset(pat):
                    hit = (pat, val)
                    break
            if hit is None:
                keep[(even, odd)] = keep.get((even, odd), 0) + c
                continue
            pat, val = hit
            rest = [a for a in odd if a not in pat]
            # odd == sign * pat * rest
            sign, _ = _sort_odd(list(pat) + rest)
            acc = acc + Expr.product(c * sign, even, []) * val * Expr.product(ONE, [], rest)
            changed = True
        e = Expr._from_dict(keep) + acc
        if not changed:
            return e
    raise GrassmannError("constraint rewriting did not terminate")


def graded_commutator(a, b) -> Expr:
    """a*b - (-1)^{|a||b|} b*a for homogeneous a, b."""
    a, b = as_expr(a), as_expr(b)
    s = -1 if (a.parity and b.parity) else 1
    return a * b - (b * a) * s


# ---------------------------------------------------------------- builders

X = Symbol("x", "coord")
T = Symbol("t", "coord")
XI = Symbol("xi", "coord")
THETA = Symbol("theta", "fcoord")
PHI = Symbol("phi", "fcoord")
SIGN_NAMES = ("eps", "mu", "nu")
RESERVED_COORDS = {"x": X, "t": T, "xi": XI}

FIELD_PARITY = {
    "R": EVEN, "S": EVEN, "U": EVEN, "V": EVEN,
    "eta": ODD, "psi": ODD, "pi": ODD, "omega": ODD,
}


def symbol(name: str) -> Expr:
    """Even symbol by name: coordinate, sign symbol or bosonic constant."""
    if name in RESERVED_COORDS:
        return Expr.atom(RESERVED_COORDS[name])
    if name in ("theta", "phi"):
        return Expr.atom(Symbol(name, "fcoord"))
    if name in SIGN_NAMES:
        return Expr.atom(Symbol(name, "sign"))
    return Expr.atom(Symbol(name, "const"))


def fconst(name: str) -> Expr:
    return Expr.atom(Symbol(name, "fconst"))


def field(name: str, dx: int = 0, dt: int = 0) -> Expr:
    return Expr.atom(Func(name, (Expr.atom(X), Expr.atom(T)), (dx, dt), FIELD_PARITY[name]))


def func(name: str, *args, derivs=None, parity: int = EVEN) -> Expr:
    return Expr.atom(Func(name, tuple(as_expr(a) for a in args), derivs, parity))


def exp(arg) -> Expr:
    arg = as_expr(arg)
    if not arg.terms:
        return Expr.one()
    return Expr.atom(Exp(arg))


def integral(integrand, var, arg) -> Expr:
    var = var if isinstance(var, Symbol) else as_expr(var).terms[0][0][0][0][0]
    return Expr.atom(Integral(as_expr(integrand), var, as_expr(arg)))


def symbol_atom(e: Expr) -> Symbol:
    """The Symbol behind a single-symbol expression."""
    e = as_expr(e)
    atoms = e.atoms()
    if len(e.terms) != 1 or len(atoms) != 1:
        raise GrassmannError("expected a single symbol")
    a = atoms.pop()
    if type(a) is not Symbol:
        raise GrassmannError("expected a single symbol")
    return a
