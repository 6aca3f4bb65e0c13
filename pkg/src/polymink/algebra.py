"""Exact arithmetic: radical scalars, sparse polynomials, truncated series.

Every tensor entry produced by this package lives in the set

    q_1*sqrt(k_1) + ... + q_n*sqrt(k_n)   times   pi**p

with rational ``q_i``, pairwise distinct square-free ``k_i`` and a single
integer power ``p`` of pi.  :class:`ExactScalar` implements exactly that
set; :class:`SparsePoly` is a plain dict-of-exponents polynomial over the
rationals in the variables ``t1..td``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import PiPowerMismatch

Rational = Fraction
Number = Union[int, Fraction]

# Trial division bound used when extracting square factors from radicands.
FACTOR_BOUND = 10**6


def as_fraction(value) -> Fraction:
    """Parse an int, Fraction or exact string ("p/q", "-3") into a Fraction.

    Floats are rejected: all inputs must be exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"not an exact rational: {value!r}")


@lru_cache(maxsize=4096)
def square_decompose(n: int) -> tuple[int, int]:
    """Return ``(a, k)`` with ``n == a*a*k`` and ``k`` square-free up to the bound."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    out, rad, m, p = 1, 1, n, 2
    while p * p <= m and p <= FACTOR_BOUND:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out *= p ** (e // 2)
            if e % 2:
                rad *= p
        p += 1 if p == 2 else 2
    root = math.isqrt(m)
    if root * root == m:
        out *= root
    else:
        rad *= m
    return out, rad


def _is_square(n: int) -> bool:
    root = math.isqrt(n)
    return root * root == n


@dataclass(frozen=True, eq=False)
class ExactScalar:
    """``pi**pi_power * sum(coeff * sqrt(radicand))``, kept canonical.

    ``terms`` is a tuple of ``(radicand, coefficient)`` pairs sorted by
    radicand; radicand 1 is the rational part.  Build values with the
    classmethods rather than the raw constructor.
    """

    terms: tuple[tuple[int, Fraction], ...] = ()
    pi_power: int = 0

    @classmethod
    def _canonical(cls, raw: Iterable[tuple[int, Fraction]], pi_power: int) -> "ExactScalar":
        merged: dict[int, Fraction] = {}
        for radicand, coeff in raw:
            if not coeff:
                continue
            outer, k = square_decompose(radicand)
            coeff = coeff * outer
            # A radicand left partially unfactored can still be a rational
            # multiple of an existing one; fold those together.
            for other in list(merged):
                if other == k:
                    break
                g = math.gcd(other, k)
                if _is_square(k // g) and _is_square(other // g):
                    moved = merged.pop(other) * math.isqrt(other // g)
                    merged[g] = merged.get(g, Fraction(0)) + moved
                    coeff = coeff * math.isqrt(k // g)
                    k = g
                    break
            merged[k] = merged.get(k, Fraction(0)) + coeff
        terms = tuple(sorted((k, c) for k, c in merged.items() if c))
        return cls(terms, pi_power if terms else 0)

    @classmethod
    def zero(cls) -> "ExactScalar":
        return cls()

    @classmethod
    def rational(cls, q: Number) -> "ExactScalar":
        return cls._canonical([(1, Fraction(q))], 0)

    @classmethod
    def sqrt(cls, q: Number) -> "ExactScalar":
        """Exact square root of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls()
        # sqrt(p/q) = sqrt(p*q)/q
        return cls._canonical([(q.numerator * q.denominator, Fraction(1, q.denominator))], 0)

    @classmethod
    def pi_pow(cls, p: int, coeff: Number = 1) -> "ExactScalar":
        return cls._canonical([(1, Fraction(coeff))], p)

    @classmethod
    def from_terms(cls, terms: Mapping[int, Number], pi_power: int = 0) -> "ExactScalar":
        return cls._canonical([(int(k), Fraction(c)) for k, c in terms.items()], pi_power)

    def canonicalize(self) -> "ExactScalar":
        return self._canonical(self.terms, self.pi_power)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_rational(self) -> bool:
        """True when there is no radical part (pi powers allowed)."""
        return all(k == 1 for k, _ in self.terms)

    def rational_part(self) -> Fraction:
        for k, c in self.terms:
            if k == 1:
                return c
        return Fraction(0)

    def as_fraction(self) -> Fraction:
        if self.pi_power or not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.rational_part()

    def __eq__(self, other) -> bool:
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms and self.pi_power == other.pi_power

    def __hash__(self) -> int:
        return hash((self.terms, self.pi_power))

    def __add__(self, other) -> "ExactScalar":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.pi_power != other.pi_power:
            raise PiPowerMismatch(
                f"cannot add pi^{self.pi_power} and pi^{other.pi_power} terms"
            )
        return self._canonical(self.terms + other.terms, self.pi_power)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(tuple((k, -c) for k, c in self.terms), self.pi_power)

    def __sub__(self, other) -> "ExactScalar":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ExactScalar":
        return (-self) + other

    def __mul__(self, other) -> "ExactScalar":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return ExactScalar()
            return ExactScalar(tuple((k, c * other) for k, c in self.terms), self.pi_power)
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return ExactScalar()
        raw = []
        for (k1, c1), (k2, c2) in product(self.terms, other.terms):
            g = math.gcd(k1, k2)
            raw.append(((k1 // g) * (k2 // g), c1 * c2 * g))
        return self._canonical(raw, self.pi_power + other.pi_power)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        """Inverse of a single-term scalar ``c*sqrt(k)*pi^p``."""
        if len(self.terms) != 1:
            raise ZeroDivisionError("only single-term scalars are invertible here")
        ((k, c),) = self.terms
        return ExactScalar(((k, 1 / (c * k)),), -self.pi_power)

    def __truediv__(self, other) -> "ExactScalar":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / Fraction(other))
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __float__(self) -> float:
        total = math.fsum(float(c) * math.sqrt(k) for k, c in self.terms)
        return total * math.pi**self.pi_power

    def to_json(self) -> dict:
        return {
            "pi_pow": self.pi_power,
            "terms": {str(k): _frac_str(c) for k, c in self.terms},
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "ExactScalar":
        terms = {int(k): as_fraction(v) for k, v in doc["terms"].items()}
        return cls.from_terms(terms, int(doc["pi_pow"]))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k, c in self.terms:
            parts.append(str(c) if k == 1 else f"{c}*sqrt({k})")
        body = " + ".join(parts)
        if self.pi_power:
            body = f"({body})*pi^{self.pi_power}" if len(parts) > 1 else f"{body}*pi^{self.pi_power}"
        return body


def _lift(value):
    if isinstance(value, ExactScalar):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return ExactScalar.rational(value)
    return NotImplemented


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def omega(n: int) -> ExactScalar:
    """Surface area of the unit sphere in R^n, ``2 pi^(n/2) / Gamma(n/2)``."""
    if n < 1:
        raise ValueError("omega needs n >= 1")
    if n % 2 == 0:
        return ExactScalar.pi_pow(n // 2, Fraction(2, math.factorial(n // 2 - 1)))
    double_fact = math.prod(range(n - 2, 0, -2)) if n > 2 else 1
    return ExactScalar.pi_pow((n - 1) // 2, Fraction(2 ** ((n + 1) // 2), double_fact))


Exponent = tuple[int, ...]


def grlex_key(exponent: Exponent):
    """Sort key: total degree first, then larger powers of earlier variables."""
    return (sum(exponent), tuple(-e for e in exponent))


class SparsePoly:
    """Polynomial over Q in ``nvars`` variables, stored as exponent -> coefficient.

    Instances are treated as immutable.  Variable ``i`` (0-based) prints as
    ``t{i+1}``.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Number] | None = None):
        if nvars < 1:
            raise ValueError("need at least one variable")
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            coeff = Fraction(coeff)
            if coeff:
                clean[exp] = clean.get(exp, Fraction(0)) + coeff
        self._terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Fraction]) -> "SparsePoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        return p

    @classmethod
    def constant(cls, nvars: int, c: Number = 1) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "SparsePoly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def linear(cls, constant: Number, coefficients: Sequence[Number]) -> "SparsePoly":
        nvars = len(coefficients)
        terms: dict[Exponent, Number] = {(0,) * nvars: constant}
        for i, c in enumerate(coefficients):
            exp = [0] * nvars
            exp[i] = 1
            terms[tuple(exp)] = c
        return cls(nvars, terms)

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, Fraction]]:
        """Terms in graded-lex order."""
        for exp in sorted(self._terms, key=grlex_key):
            yield exp, self._terms[exp]

    def coefficient(self, exp: Exponent) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def _check(self, other: "SparsePoly") -> None:
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return SparsePoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return SparsePoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SparsePoly":
        return (-self) + other

    def mul_truncated(self, other: "SparsePoly", max_degree: int | None = None) -> "SparsePoly":
        """Product, dropping every term of total degree above ``max_degree``."""
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            for e2, c2 in other._terms.items():
                if max_degree is not None and d1 + sum(e2) > max_degree:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return SparsePoly(self.nvars)
            return SparsePoly._raw(self.nvars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.mul_truncated(other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparsePoly":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = SparsePoly.constant(self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def truncate(self, max_degree: int) -> "SparsePoly":
        return SparsePoly._raw(
            self.nvars, {e: c for e, c in self._terms.items() if sum(e) <= max_degree}
        )

    def homogeneous_part(self, degree: int) -> "SparsePoly":
        return SparsePoly._raw(
            self.nvars, {e: c for e, c in self._terms.items() if sum(e) == degree}
        )

    def derivative(self, var: int) -> "SparsePoly":
        if not 0 <= var < self.nvars:
            raise IndexError(f"variable index {var} out of range")
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            if e[var]:
                lowered = e[:var] + (e[var] - 1,) + e[var + 1 :]
                out[lowered] = c * e[var]
        return SparsePoly._raw(self.nvars, out)

    def __call__(self, *point: Number) -> Fraction:
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError("point has the wrong dimension")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= Fraction(x) ** k
            total += term
        return total

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == SparsePoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"SparsePoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for exp, c in self.items():
            mono = "*".join(
                f"t{i + 1}" if k == 1 else f"t{i + 1}^{k}" for i, k in enumerate(exp) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not out:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(("+ " if c > 0 else "- ") + body)
        return " ".join(out)

    def to_json(self) -> dict:
        return {
            "num_vars": self.nvars,
            "terms": [{"exponent": list(e), "coeff": _frac_str(c)} for e, c in self.items()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "SparsePoly":
        return cls(
            int(doc["num_vars"]),
            {tuple(t["exponent"]): as_fraction(t["coeff"]) for t in doc["terms"]},
        )


def poly_derivative(p: SparsePoly, var: int) -> SparsePoly:
    """Formal partial derivative with respect to ``t{var+1}`` (0-based ``var``)."""
    return p.derivative(var)


@dataclass(frozen=True)
class LinearForm:
    """``1 + c_1 t_1 + ... + c_d t_d``.

    The vertex form of a point ``x`` is ``1 - x_1 t_1 - ... - x_d t_d``.
    """

    coefficients: tuple[Fraction, ...]

    @classmethod
    def for_vertex(cls, x: Sequence[Number]) -> "LinearForm":
        return cls(tuple(-Fraction(v) for v in x))

    @property
    def constant(self) -> Fraction:
        return Fraction(1)

    @property
    def nvars(self) -> int:
        return len(self.coefficients)

    def to_poly(self) -> SparsePoly:
        return SparsePoly.linear(1, self.coefficients)

    def __call__(self, point: Sequence[Number]) -> Fraction:
        return 1 + sum((c * Fraction(x) for c, x in zip(self.coefficients, point)), Fraction(0))

    def __str__(self) -> str:
        return str(self.to_poly())


def product_of_forms(forms: Sequence[LinearForm], nvars: int) -> SparsePoly:
    out = SparsePoly.constant(nvars)
    for form in forms:
        out = out * form.to_poly()
    return out


def truncated_series(
    numerator: SparsePoly, forms: Sequence[LinearForm], max_degree: int
) -> SparsePoly:
    """Taylor expansion of ``numerator / prod(forms)`` up to total degree ``max_degree``.

    Each ``1/form`` is the geometric series ``sum_i (1 - form)^i``; since
    ``1 - form`` has no constant term, ``i <= max_degree`` suffices.
    """
    nvars = numerator.nvars
    result = numerator.truncate(max_degree)
    for form in forms:
        if form.nvars != nvars:
            raise ValueError("form lives in a different ring")
        step = SparsePoly.constant(nvars) - form.to_poly()
        geometric = SparsePoly.constant(nvars)
        power = SparsePoly.constant(nvars)
        for _ in range(max_degree):
            power = power.mul_truncated(step, max_degree)
            if power.is_zero:
                break
            geometric = geometric + power
        result = result.mul_truncated(geometric, max_degree)
    return result
