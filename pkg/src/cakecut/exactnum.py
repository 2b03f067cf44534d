"""Exact arithmetic over constructible reals.

A :class:`ConstructibleReal` is either a rational number or ``a + b*sqrt(d)``
where ``a`` and ``b`` are constructible reals built from strictly older
radicals and ``d`` is a previously interned positive radicand.  This is a
quadratic extension tower: every field operation stays inside it and the sign
of a value can always be decided exactly, by the classical rule

    sign(a + b*sqrt(d)) = sign(a)   if sign(a) == sign(b) or b == 0
                        = sign(a) * sign(a**2 - b**2 * d)   otherwise

which recurses strictly downwards in the tower and therefore terminates.

Fixed-point interval enclosures (integers ``lo <= x * 2**p <= hi``) are
memoized per node and used as a fast filter before the exact rule, and to
produce certified approximations.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import isqrt
from typing import Union

from .errors import DivisionByZero, NegativeRadicand

__all__ = [
    "ConstructibleReal",
    "CR",
    "add",
    "sub",
    "mul",
    "div",
    "sqrt",
    "sign",
    "to_float",
    "to_fraction",
    "parse",
]

Number = Union["ConstructibleReal", int, Fraction]

# precision (bits after the binary point) of the interval filter used by sign()
_FILTER_BITS = 64

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, isqrt(p) + 1))]


def _ceil_shift(n: int, p: int) -> int:
    return -((-n) >> p)


def _isqrt_ceil(n: int) -> int:
    s = isqrt(n)
    return s if s * s == n else s + 1


def _split_square(m: int) -> tuple[int, int]:
    """Write ``m = c*c * f`` pulling out square factors over small primes."""
    c = 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > m:
            break
        while m % pp == 0:
            m //= pp
            c *= p
    s = isqrt(m)
    if s * s == m:
        return c * s, 1
    return c, m


class _Tower:
    """Process-wide registry of radicands, ordered by creation.

    Radical ``k`` only depends on radicals ``< k``.  Interning is guarded by
    a lock; enclosure caches are append-only dicts whose entries are
    deterministic, so concurrent readers at worst recompute a value.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.radicands: list[ConstructibleReal] = []
        self._roots: list[dict[int, tuple[int, int]]] = []
        self._index: dict[tuple, int] = {}

    def intern(self, radicand: ConstructibleReal) -> int:
        key = radicand._key()
        with self._lock:
            k = self._index.get(key)
            if k is None:
                k = len(self.radicands)
                self.radicands.append(radicand)
                self._roots.append({})
                self._index[key] = k
        return k

    def root_enclosure(self, k: int, p: int) -> tuple[int, int]:
        cache = self._roots[k]
        hit = cache.get(p)
        if hit is None:
            lo, hi = self.radicands[k]._enclose(2 * p)
            hit = (isqrt(max(lo, 0)), _isqrt_ceil(max(hi, 0)))
            cache[p] = hit
        return hit


_TOWER = _Tower()


class ConstructibleReal:
    """An exact real number from the square-root closure of the rationals.

    Instances are immutable.  Equality and ordering are exact; instances are
    deliberately unhashable because equal values may have different internal
    representations.
    """

    __slots__ = ("_a", "_b", "_k", "_enc", "_sgn", "_keyc")

    def __init__(self, value: Union[int, Fraction, str] = 0) -> None:
        if isinstance(value, str):
            value = _parse_fraction(value)
        self._a = Fraction(value)
        self._b = None
        self._k = -1
        self._enc: dict[int, tuple[int, int]] = {}
        self._sgn: int | None = None
        self._keyc: tuple | None = None

    @classmethod
    def _node(cls, a: ConstructibleReal, b: ConstructibleReal, k: int) -> ConstructibleReal:
        if b._k < 0 and b._a == 0:
            return a
        self = object.__new__(cls)
        self._a = a
        self._b = b
        self._k = k
        self._enc = {}
        self._sgn = None
        self._keyc = None
        return self

    @classmethod
    def _rat(cls, q: Fraction) -> ConstructibleReal:
        self = object.__new__(cls)
        self._a = q
        self._b = None
        self._k = -1
        self._enc = {}
        self._sgn = None
        self._keyc = None
        return self

    # -- structure -------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self._k < 0

    def as_fraction(self) -> Fraction:
        if self._k >= 0:
            raise ValueError("value is not represented as a rational")
        return self._a

    @property
    def depth(self) -> int:
        """Number of distinct radical levels the representation touches."""
        return self._k + 1

    def _key(self) -> tuple:
        if self._keyc is None:
            if self._k < 0:
                self._keyc = ("q", self._a.numerator, self._a.denominator)
            else:
                self._keyc = (self._k, self._a._key(), self._b._key())
        return self._keyc

    # -- enclosures ------------------------------------------------------

    def _enclose(self, p: int) -> tuple[int, int]:
        hit = self._enc.get(p)
        if hit is not None:
            return hit
        if self._k < 0:
            n, d = self._a.numerator, self._a.denominator
            lo = (n << p) // d
            hi = -((-n << p) // d)
        else:
            la, ha = self._a._enclose(p)
            lb, hb = self._b._enclose(p)
            ls, hs = _TOWER.root_enclosure(self._k, p)
            prods = (lb * ls, lb * hs, hb * ls, hb * hs)
            lo = la + (min(prods) >> p)
            hi = ha + _ceil_shift(max(prods), p)
        self._enc[p] = (lo, hi)
        return lo, hi

    def to_fraction(self, p: int = 40) -> Fraction:
        """Dyadic rational within ``2**-p`` of the exact value."""
        q = p + 8
        while True:
            lo, hi = self._enclose(q)
            if hi - lo <= 1 << (q - p):
                return Fraction(lo + hi, 1 << (q + 1))
            q += max(32, q // 2)

    def to_float(self, p: int = 40) -> float:
        """Nearest float to a ``2**-(p+1)``-accurate dyadic approximation.

        The result is within ``2**-p`` of the true value whenever ``2**-p``
        exceeds half an ulp of the result; beyond that, float rounding
        dominates and :meth:`to_fraction` should be used instead.
        """
        return float(self.to_fraction(p + 1))

    __float__ = to_float

    # -- sign ------------------------------------------------------------

    def sign(self) -> int:
        s = self._sgn
        if s is not None:
            return s
        if self._k < 0:
            s = (self._a > 0) - (self._a < 0)
        else:
            lo, hi = self._enclose(_FILTER_BITS)
            if lo > 0:
                s = 1
            elif hi < 0:
                s = -1
            else:
                s = self._exact_sign()
        self._sgn = s
        return s

    def _exact_sign(self) -> int:
        sa = self._a.sign()
        sb = self._b.sign()
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        d = _TOWER.radicands[self._k]
        return sa * (self._a * self._a - self._b * self._b * d).sign()

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: Number) -> ConstructibleReal:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(self, other)

    __radd__ = __add__

    def __sub__(self, other: Number) -> ConstructibleReal:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(self, _neg(other))

    def __rsub__(self, other: Number) -> ConstructibleReal:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(other, _neg(self))

    def __mul__(self, other: Number) -> ConstructibleReal:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> ConstructibleReal:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return div(self, other)

    def __rtruediv__(self, other: Number) -> ConstructibleReal:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return div(other, self)

    def __neg__(self) -> ConstructibleReal:
        return _neg(self)

    def __pos__(self) -> ConstructibleReal:
        return self

    def __abs__(self) -> ConstructibleReal:
        return _neg(self) if self.sign() < 0 else self

    def __pow__(self, n: int) -> ConstructibleReal:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return div(ConstructibleReal(1), self**-n)
        result = ConstructibleReal(1)
        base = self
        while n:
            if n & 1:
                result = _mul(result, base)
            n >>= 1
            if n:
                base = _mul(base, base)
        return result

    # -- comparison ------------------------------------------------------

    def _cmp(self, other: Number) -> int | None:
        other = _coerce(other)
        if other is None:
            return None
        if self._k < 0 and other._k < 0:
            return (self._a > other._a) - (self._a < other._a)
        return _add(self, _neg(other)).sign()

    def __eq__(self, other: object) -> bool:
        c = self._cmp(other)  # type: ignore[arg-type]
        return NotImplemented if c is None else c == 0

    def __ne__(self, other: object) -> bool:
        c = self._cmp(other)  # type: ignore[arg-type]
        return NotImplemented if c is None else c != 0

    def __lt__(self, other: Number) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other: Number) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other: Number) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other: Number) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return self.sign() != 0

    # -- text / serialization ---------------------------------------------

    def __str__(self) -> str:
        if self._k < 0:
            return str(self._a)
        d = _TOWER.radicands[self._k]
        root = f"sqrt({d})"
        b = self._b
        if b._k < 0 and b._a == 1:
            term = root
        elif b._k < 0 and b._a == -1:
            term = f"-{root}"
        else:
            term = f"{b if b._k < 0 else f'({b})'}*{root}"
        if self._a._k < 0 and self._a._a == 0:
            return term
        a = self._a if self._a._k < 0 else f"({self._a})"
        return f"{a} + {term}"

    def __repr__(self) -> str:
        return f"CR({self})"

    def dump(self):
        """JSON-friendly exact form: ``"p/q"`` or ``{"a":..,"b":..,"sqrt":..}``."""
        if self._k < 0:
            return str(self._a)
        return {
            "a": self._a.dump(),
            "b": self._b.dump(),
            "sqrt": _TOWER.radicands[self._k].dump(),
        }

    @classmethod
    def load(cls, obj) -> ConstructibleReal:
        if isinstance(obj, (str, int)):
            return cls(Fraction(obj))
        if isinstance(obj, dict):
            return cls.load(obj["a"]) + cls.load(obj["b"]) * sqrt(cls.load(obj["sqrt"]))
        raise ValueError(f"cannot load exact value from {obj!r}")


CR = ConstructibleReal


def _coerce(x) -> ConstructibleReal | None:
    if isinstance(x, ConstructibleReal):
        return x
    if isinstance(x, (int, Fraction)):
        return ConstructibleReal._rat(Fraction(x))
    return None


def _as_cr(x: Number) -> ConstructibleReal:
    c = _coerce(x)
    if c is None:
        raise TypeError(f"expected a ConstructibleReal, int or Fraction, got {type(x).__name__}")
    return c


def _neg(x: ConstructibleReal) -> ConstructibleReal:
    if x._k < 0:
        return ConstructibleReal._rat(-x._a)
    return ConstructibleReal._node(_neg(x._a), _neg(x._b), x._k)


def _add(x: ConstructibleReal, y: ConstructibleReal) -> ConstructibleReal:
    kx, ky = x._k, y._k
    if kx < 0 and ky < 0:
        return ConstructibleReal._rat(x._a + y._a)
    if kx > ky:
        return ConstructibleReal._node(_add(x._a, y), x._b, kx)
    if ky > kx:
        return ConstructibleReal._node(_add(x, y._a), y._b, ky)
    return ConstructibleReal._node(_add(x._a, y._a), _add(x._b, y._b), kx)


def _mul(x: ConstructibleReal, y: ConstructibleReal) -> ConstructibleReal:
    kx, ky = x._k, y._k
    if kx < 0 and ky < 0:
        return ConstructibleReal._rat(x._a * y._a)
    if kx < ky:
        x, y, kx, ky = y, x, ky, kx
    if ky < 0 and y._a == 0:
        return y
    if kx > ky:
        return ConstructibleReal._node(_mul(x._a, y), _mul(x._b, y), kx)
    d = _TOWER.radicands[kx]
    a = _add(_mul(x._a, y._a), _mul(_mul(x._b, y._b), d))
    b = _add(_mul(x._a, y._b), _mul(x._b, y._a))
    return ConstructibleReal._node(a, b, kx)


def _inv(x: ConstructibleReal) -> ConstructibleReal:
    if x._k < 0:
        return ConstructibleReal._rat(1 / x._a)
    d = _TOWER.radicands[x._k]
    norm = _add(_mul(x._a, x._a), _neg(_mul(_mul(x._b, x._b), d)))
    if norm.sign() != 0:
        ni = _inv(norm)
        return ConstructibleReal._node(_mul(x._a, ni), _neg(_mul(x._b, ni)), x._k)
    # the conjugate vanishes (degenerate radical), hence x == 2a
    return _inv(_add(x._a, x._a))


def add(a: Number, b: Number) -> ConstructibleReal:
    return _add(_as_cr(a), _as_cr(b))


def sub(a: Number, b: Number) -> ConstructibleReal:
    return _add(_as_cr(a), _neg(_as_cr(b)))


def mul(a: Number, b: Number) -> ConstructibleReal:
    return _mul(_as_cr(a), _as_cr(b))


def div(a: Number, b: Number) -> ConstructibleReal:
    a, b = _as_cr(a), _as_cr(b)
    if b.sign() == 0:
        raise DivisionByZero("division by an exact zero")
    return _mul(a, _inv(b))


def sign(a: Number) -> int:
    return _as_cr(a).sign()


def to_fraction(a: Number, p: int = 40) -> Fraction:
    return _as_cr(a).to_fraction(p)


def to_float(a: Number, p: int = 40) -> float:
    return _as_cr(a).to_float(p)


def _exact_sqrt(x: ConstructibleReal) -> ConstructibleReal | None:
    """Square root of ``x >= 0`` if it lies in the field ``x`` lives in."""
    if x._k < 0:
        n, d = x._a.numerator, x._a.denominator
        sn, sd = isqrt(n), isqrt(d)
        if sn * sn == n and sd * sd == d:
            return ConstructibleReal._rat(Fraction(sn, sd))
        return None
    a, b = x._a, x._b
    d = _TOWER.radicands[x._k]
    norm = a * a - b * b * d
    if norm.sign() < 0:
        return None
    m = _exact_sqrt(norm)
    if m is None:
        return None
    for mm in (m, -m):
        h = (a + mm) / 2
        if h.sign() <= 0:
            continue
        u = _exact_sqrt(h)
        if u is None:
            continue
        v = b / (2 * u)
        root = ConstructibleReal._node(u, v, x._k)
        return -root if root.sign() < 0 else root
    return None


def _radical(radicand: ConstructibleReal) -> ConstructibleReal:
    k = _TOWER.intern(radicand)
    return ConstructibleReal._node(ConstructibleReal._rat(Fraction(0)), ConstructibleReal._rat(Fraction(1)), k)


def sqrt(a: Number) -> ConstructibleReal:
    """Exact nonnegative square root; reuses existing radicals when possible."""
    a = _as_cr(a)
    s = a.sign()
    if s < 0:
        raise NegativeRadicand(f"square root of a negative value ({a.to_float():.6g})")
    if s == 0:
        return ConstructibleReal._rat(Fraction(0))
    if a._k < 0:
        n, d = a._a.numerator, a._a.denominator
        coef, free = _split_square(n * d)
        if free == 1:
            return ConstructibleReal._rat(Fraction(coef, d))
        return _mul(ConstructibleReal._rat(Fraction(coef, d)), _radical(ConstructibleReal._rat(Fraction(free))))
    root = _exact_sqrt(a)
    if root is not None:
        return root
    return _radical(a)


def _parse_fraction(text: str) -> Fraction:
    t = text.strip()
    if not t or any(ch not in "0123456789+-./eE" for ch in t):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(t)


def parse(text: str) -> ConstructibleReal:
    """Parse a rational literal such as ``"3/4"``, ``"0.25"`` or ``"2"``."""
    return ConstructibleReal._rat(_parse_fraction(text))
