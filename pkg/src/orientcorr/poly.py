"""Exact univariate polynomials in ``p`` with rational coefficients.

A :class:`Poly` stores integer numerators over one shared positive
denominator, kept in lowest terms.  Products go through Kronecker
substitution so that the heavy lifting happens inside CPython's big-integer
multiply instead of a Python-level convolution loop.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]

__all__ = ["Poly", "poly_add", "poly_mul", "poly_pow", "poly_eval", "atoms"]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class Poly:
    """Immutable polynomial ``sum_i c_i p**i`` with ``c_i`` rational.

    Canonical form: no trailing zero numerators, ``gcd(nums..., den) == 1``,
    ``den > 0``.  The zero polynomial has no coefficients and ``den == 1``.
    """

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, coefficients: Iterable[Scalar] = ()):
        fracs = [Fraction(c) for c in coefficients]
        den = 1
        for f in fracs:
            den = _lcm(den, f.denominator)
        nums = [f.numerator * (den // f.denominator) for f in fracs]
        self._set(nums, den)

    @classmethod
    def _raw(cls, nums: list[int], den: int) -> "Poly":
        obj = cls.__new__(cls)
        obj._set(nums, den)
        return obj

    def _set(self, nums: list[int], den: int) -> None:
        while nums and nums[-1] == 0:
            nums.pop()
        if not nums:
            den = 1
        else:
            g = den
            for c in nums:
                if g == 1:
                    break
                g = gcd(g, c)
            if g != 1:
                nums = [c // g for c in nums]
                den //= g
        self._num = tuple(nums)
        self._den = den
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c: Scalar) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, c: Scalar, k: int) -> "Poly":
        return cls([0] * k + [c])

    # -- accessors ----------------------------------------------------------

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self._num) - 1

    def is_zero(self) -> bool:
        return not self._num

    def __len__(self) -> int:
        return len(self._num)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self._num):
            return Fraction(self._num[i], self._den)
        return Fraction(0)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._num:
            return self
        if not self._num:
            return o
        den = _lcm(self._den, o._den)
        fa, fb = den // self._den, den // o._den
        a, b = self._num, o._num
        if len(a) < len(b):
            a, b, fa, fb = b, a, fb, fa
        nums = [c * fa for c in a]
        for i, c in enumerate(b):
            nums[i] += c * fb
        return Poly._raw(nums, den)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw([-c for c in self._num], self._den)

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
        if not self._num or not o._num:
            return Poly()
        return Poly._raw(_intpoly_mul(self._num, o._num), self._den * o._den)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative int")
        result = Poly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._num == o._num and self._den == o._den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._num, self._den))
        return self._hash

    def __call__(self, p: Scalar) -> Fraction:
        return self.eval(p)

    def eval(self, p: Scalar) -> Fraction:
        """Exact Horner evaluation, done on integers for ``p = u/v``."""
        p = Fraction(p)
        u, v = p.numerator, p.denominator
        d = len(self._num) - 1
        if d < 0:
            return Fraction(0)
        acc = 0
        vpow = 1
        # acc = sum c_i u^i v^(d-i), built top-down
        for c in reversed(self._num):
            acc = acc * u + c * vpow
            vpow *= v
        return Fraction(acc, self._den * v**d)

    def __repr__(self) -> str:
        if not self._num:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coefficients):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*p^{i}")
        return "Poly(" + " + ".join(terms) + ")"

    # -- serialization ------------------------------------------------------

    def to_json_list(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coefficients]

    def to_json(self) -> str:
        return json.dumps(self.to_json_list())

    @classmethod
    def from_json_list(cls, items: Sequence[str]) -> "Poly":
        return cls(Fraction(s) for s in items)

    @classmethod
    def from_json(cls, text: str) -> "Poly":
        return cls.from_json_list(json.loads(text))


def _intpoly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Signed integer polynomial product by Kronecker substitution."""
    if len(a) < 4 or len(b) < 4:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    bound = ma * mb * min(len(a), len(b))
    k = bound.bit_length() + 2
    A = _pack(a, k)
    B = _pack(b, k)
    return _unpack(A * B, k, len(a) + len(b) - 1)


def _pack(coeffs: Sequence[int], k: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc << k) + c
    return acc


def _unpack(value: int, k: int, length: int) -> list[int]:
    mask = (1 << k) - 1
    half = 1 << (k - 1)
    base = 1 << k
    out = []
    for _ in range(length):
        c = value & mask
        value >>= k
        if c >= half:
            c -= base
            value += 1
        out.append(c)
    return out


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_pow(a: Poly, e: int) -> Poly:
    """Repeated squaring; ``poly_pow(a, 0) == 1``."""
    return a**e


def poly_eval(a: Poly, p: Scalar) -> Fraction:
    return a.eval(p)


def atoms() -> tuple[Poly, Poly, Poly]:
    """Per-edge atoms ``x = p/2``, ``y = 1 - p/2``, ``q = 1 - p``."""
    half = Fraction(1, 2)
    return Poly([0, half]), Poly([1, -half]), Poly([1, -1])
