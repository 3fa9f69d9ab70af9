"""Exact coefficient arithmetic: multi-indices, symbolic unknowns, sparse polynomials.

Everything downstream (series, curvature, constraint solving) works over
`CoefPoly`, a sparse polynomial in named unknowns with Fraction coefficients.
Numeric data is just the constant-polynomial special case, so a single code
path serves both verification and symbolic constraint generation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Optional, Tuple, Union

# ---------------------------------------------------------------------------
# Multi-indices
#
# A multi-index is a plain tuple of nonnegative ints of length n (exponents of
# a monomial in x = (|z_1|^2, ..., |z_n|^2)).  The graded-lex key below is the
# single total order used for all deterministic iteration and reporting.
# ---------------------------------------------------------------------------

MultiIndex = Tuple[int, ...]


def mi_degree(m: MultiIndex) -> int:
    return sum(m)


def grlex_key(m: MultiIndex):
    """Total order on multi-indices: by total degree, then lexicographic."""
    return (sum(m), m)


def validate_multiindex(m, n: int) -> MultiIndex:
    m = tuple(m)
    if len(m) != n:
        raise ValueError(f"multi-index {m} has length {len(m)}, expected {n}")
    if any((not isinstance(e, int)) or e < 0 for e in m):
        raise ValueError(f"multi-index {m} must consist of nonnegative integers")
    return m


def mi_permute(m: MultiIndex, perm) -> MultiIndex:
    """Apply a variable permutation: entry i of the result is m[perm[i]]."""
    return tuple(m[perm[i]] for i in range(len(m)))


def monomials_of_degree(n: int, d: int) -> Iterable[MultiIndex]:
    """All multi-indices of length n with total degree exactly d, grlex order."""
    if n == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in monomials_of_degree(n - 1, d - first):
            yield (first,) + rest


def monomials_up_to(n: int, d: int) -> Iterable[MultiIndex]:
    for deg in range(d + 1):
        yield from monomials_of_degree(n, deg)


# ---------------------------------------------------------------------------
# Unknowns
# ---------------------------------------------------------------------------

EINSTEIN_NAME = "lambda"


@dataclass(frozen=True)
class Unknown:
    """A symbolic unknown: a support coefficient or the Einstein constant."""

    name: str
    kind: str  # "support" | "einstein"
    index: Optional[MultiIndex] = None

    def __post_init__(self):
        if self.kind not in ("support", "einstein"):
            raise ValueError(f"bad unknown kind {self.kind!r}")
        if self.kind == "support" and self.index is None:
            raise ValueError("support unknowns must carry their multi-index")


def support_unknown(m: MultiIndex) -> Unknown:
    return Unknown("a(" + ",".join(map(str, m)) + ")", "support", tuple(m))


EINSTEIN = Unknown(EINSTEIN_NAME, "einstein", None)


# ---------------------------------------------------------------------------
# Sparse polynomials in unknowns
#
# A monomial in unknowns is a tuple of (name, exponent) pairs sorted by name;
# () is the constant monomial.  Terms map monomials to nonzero Fractions.
# ---------------------------------------------------------------------------

UMono = Tuple[Tuple[str, int], ...]

RationalLike = Union[Fraction, int]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _umono_mul(a: UMono, b: UMono) -> UMono:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for name, e in b:
        merged[name] = merged.get(name, 0) + e
    return tuple(sorted(merged.items()))


def _umono_key(mono: UMono):
    return (sum(e for _, e in mono), mono)


class CoefPoly:
    """Sparse polynomial over Fractions in named unknowns.

    Immutable by convention; no zero coefficients are stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[UMono, Fraction]] = None):
        if terms:
            self.terms = {m: c for m, c in terms.items() if c}
        else:
            self.terms = {}

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(value: RationalLike) -> "CoefPoly":
        value = Fraction(value)
        return CoefPoly({(): value}) if value else CoefPoly()

    @staticmethod
    def var(name: str) -> "CoefPoly":
        return CoefPoly({((name, 1),): _ONE})

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self.terms.get((), _ZERO)

    def unknowns(self) -> set:
        out = set()
        for mono in self.terms:
            for name, _ in mono:
                out.add(name)
        return out

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        deg = 0
        for mono in self.terms:
            for nm, e in mono:
                if nm == name and e > deg:
                    deg = e
        return deg

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "CoefPoly") -> "CoefPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, _ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        res = CoefPoly.__new__(CoefPoly)
        res.terms = out
        return res

    def __neg__(self) -> "CoefPoly":
        res = CoefPoly.__new__(CoefPoly)
        res.terms = {m: -c for m, c in self.terms.items()}
        return res

    def __sub__(self, other: "CoefPoly") -> "CoefPoly":
        return self + (-other)

    def __mul__(self, other) -> "CoefPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not self.terms or not other.terms:
            return CoefPoly()
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _umono_mul(m1, m2)
                s = out.get(m, _ZERO) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        res = CoefPoly.__new__(CoefPoly)
        res.terms = out
        return res

    __rmul__ = __mul__

    def scale(self, k: RationalLike) -> "CoefPoly":
        k = Fraction(k)
        if not k:
            return CoefPoly()
        res = CoefPoly.__new__(CoefPoly)
        res.terms = {m: c * k for m, c in self.terms.items()}
        return res

    def __pow__(self, k: int) -> "CoefPoly":
        if k < 0:
            raise ValueError("negative powers are not defined for CoefPoly")
        result = CoefPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- structure ----------------------------------------------------------

    def by_power(self, name: str) -> dict:
        """Split into coefficients of powers of one unknown: {k: CoefPoly}."""
        buckets: dict = {}
        for mono, c in self.terms.items():
            k = 0
            rest = []
            for nm, e in mono:
                if nm == name:
                    k = e
                else:
                    rest.append((nm, e))
            buckets.setdefault(k, {})[tuple(rest)] = c
        return {k: CoefPoly(t) for k, t in buckets.items()}

    def substitute(self, binding: Mapping[str, "CoefPoly"]) -> "CoefPoly":
        """Replace unknowns by polynomials (values may be CoefPoly/Fraction/int)."""
        if not binding:
            return self
        out = CoefPoly()
        for mono, c in self.terms.items():
            term = CoefPoly.const(c)
            for name, e in mono:
                if name in binding:
                    val = binding[name]
                    if not isinstance(val, CoefPoly):
                        val = CoefPoly.const(val)
                    term = term * (val ** e)
                else:
                    term = term * CoefPoly({((name, e),): _ONE})
                if term.is_zero():
                    break
            out = out + term
        return out

    def evaluate(self, assignment: Mapping[str, RationalLike]) -> Fraction:
        total = _ZERO
        for mono, c in self.terms.items():
            v = c
            for name, e in mono:
                v *= Fraction(assignment[name]) ** e
            total += v
        return total

    def normalized(self) -> "CoefPoly":
        """Divide by the content; make the leading (grlex-max) coefficient positive.

        Gives a canonical representative of the equation p = 0 up to an
        overall nonzero rational factor.
        """
        if not self.terms:
            return self
        denom_lcm = 1
        for c in self.terms.values():
            denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
        num_gcd = 0
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, abs(c.numerator * (denom_lcm // c.denominator)))
        factor = Fraction(denom_lcm, num_gcd)
        lead = max(self.terms, key=_umono_key)
        if self.terms[lead] < 0:
            factor = -factor
        return self.scale(factor)

    def proportional_to(self, other: "CoefPoly") -> bool:
        """True if self = r * other for some nonzero rational r (both nonzero)."""
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.normalized() == other.normalized()

    def common_monomial(self) -> UMono:
        """GCD of the unknown-monomials of all terms ((), if any term is constant)."""
        common: Optional[dict] = None
        for mono in self.terms:
            d = dict(mono)
            if common is None:
                common = d
            else:
                common = {nm: min(e, d[nm]) for nm, e in common.items() if nm in d and d[nm]}
            if not common:
                return ()
        return tuple(sorted((common or {}).items()))

    def divide_monomial(self, mono: UMono) -> "CoefPoly":
        drop = dict(mono)
        out = {}
        for m, c in self.terms.items():
            rest = tuple(sorted((nm, e - drop.get(nm, 0)) for nm, e in m if e - drop.get(nm, 0) > 0))
            out[rest] = c
        return CoefPoly(out)

    # -- comparisons / display ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, CoefPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _umono_key(kv[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            names = "*".join(nm if e == 1 else f"{nm}^{e}" for nm, e in mono)
            if not names:
                parts.append(str(c))
            elif c == 1:
                parts.append(names)
            elif c == -1:
                parts.append(f"-{names}")
            else:
                parts.append(f"{c}*{names}")
        return " + ".join(parts).replace("+ -", "- ")


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)


def parse_rational(text: str) -> Fraction:
    """Parse an exact "p/q" or integer string.  Decimal notation is rejected."""
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string, got {type(text).__name__}")
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"decimal notation is not exact, rejected: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse rational {text!r}: {exc}") from None
