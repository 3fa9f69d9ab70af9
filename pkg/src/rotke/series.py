"""Total-degree-truncated power series in x = (|z_1|^2, ..., |z_n|^2).

Coefficients are CoefPoly, so the same arithmetic serves numeric potentials
and symbolic constraint generation.  The truncation degree D is fixed at
creation; combining series with different dimension or truncation is an
error, never an implicit min.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Mapping, Optional, Tuple, Union

from .algebra import CoefPoly, MultiIndex, grlex_key, validate_multiindex

CoefLike = Union[CoefPoly, Fraction, int]


def _as_poly(c: CoefLike) -> CoefPoly:
    return c if isinstance(c, CoefPoly) else CoefPoly.const(c)


class Series:
    """Sparse truncated power series; immutable by convention."""

    __slots__ = ("n", "trunc", "terms")

    def __init__(self, n: int, trunc: int, terms: Optional[Mapping[MultiIndex, CoefLike]] = None):
        if n < 1:
            raise ValueError("dimension must be positive")
        if trunc < 1:
            raise ValueError("truncation must be positive")
        self.n = n
        self.trunc = trunc
        clean: Dict[MultiIndex, CoefPoly] = {}
        if terms:
            for m, c in terms.items():
                m = validate_multiindex(m, n)
                if sum(m) > trunc:
                    continue
                p = _as_poly(c)
                if not p.is_zero():
                    clean[m] = p
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(n: int, trunc: int) -> "Series":
        return Series(n, trunc)

    @staticmethod
    def one(n: int, trunc: int) -> "Series":
        return Series(n, trunc, {(0,) * n: 1})

    @staticmethod
    def variable(n: int, trunc: int, alpha: int) -> "Series":
        """The series x_alpha (alpha is 1-based)."""
        m = tuple(1 if i == alpha - 1 else 0 for i in range(n))
        return Series(n, trunc, {m: 1})

    # -- accessors ----------------------------------------------------------

    def coeff(self, m) -> CoefPoly:
        return self.terms.get(tuple(m), CoefPoly())

    def constant_term(self) -> CoefPoly:
        return self.coeff((0,) * self.n)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_numeric(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    def numeric_terms(self) -> Dict[MultiIndex, Fraction]:
        return {m: c.constant_value() for m, c in self.terms.items()}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def unknowns(self) -> set:
        out = set()
        for c in self.terms.values():
            out |= c.unknowns()
        return out

    # -- arithmetic ---------------------------------------------------------

    def _check_compat(self, other: "Series"):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        if self.trunc != other.trunc:
            raise ValueError(f"truncation mismatch: {self.trunc} vs {other.trunc}")

    def __add__(self, other: "Series") -> "Series":
        self._check_compat(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return _raw(self.n, self.trunc, out)

    def __neg__(self) -> "Series":
        return _raw(self.n, self.trunc, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __mul__(self, other: "Series") -> "Series":
        self._check_compat(other)
        return self.mul_trunc(other, self.trunc)

    def mul_trunc(self, other: "Series", cap: int) -> "Series":
        """Cauchy product keeping only terms of total degree <= cap (<= trunc)."""
        cap = min(cap, self.trunc)
        out: Dict[MultiIndex, CoefPoly] = {}
        left = sorted(self.terms.items(), key=lambda kv: sum(kv[0]))
        right = sorted(other.terms.items(), key=lambda kv: sum(kv[0]))
        right_deg = [sum(m) for m, _ in right]
        for m1, c1 in left:
            d1 = sum(m1)
            if d1 > cap:
                break
            for (m2, c2), d2 in zip(right, right_deg):
                if d1 + d2 > cap:
                    break
                m = tuple(a + b for a, b in zip(m1, m2))
                p = c1 * c2
                s = out.get(m)
                s = p if s is None else s + p
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return _raw(self.n, self.trunc, out)

    def scale(self, k: CoefLike) -> "Series":
        p = _as_poly(k)
        if p.is_zero():
            return Series.zero(self.n, self.trunc)
        return _raw(self.n, self.trunc, {m: c * p for m, c in self.terms.items()})

    def pow_trunc(self, k: int) -> "Series":
        if k < 0:
            raise ValueError("negative powers are not defined for Series")
        result = Series.one(self.n, self.trunc)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift_monomial(self, m: MultiIndex) -> "Series":
        """Multiply by the monomial x^m, dropping overflowed terms."""
        m = validate_multiindex(m, self.n)
        d = sum(m)
        out = {}
        for mm, c in self.terms.items():
            if sum(mm) + d <= self.trunc:
                out[tuple(a + b for a, b in zip(mm, m))] = c
        return _raw(self.n, self.trunc, out)

    def rescale_vars(self, factors) -> "Series":
        """Substitute x_alpha -> factors[alpha] * x_alpha (exact rationals)."""
        factors = [Fraction(f) for f in factors]
        if len(factors) != self.n:
            raise ValueError("need one scale factor per variable")
        out = {}
        for m, c in self.terms.items():
            k = Fraction(1)
            for e, f in zip(m, factors):
                k *= f ** e
            out[m] = c * k
        return _raw(self.n, self.trunc, out)

    def substitute(self, binding: Mapping[str, CoefLike]) -> "Series":
        """Substitute unknowns in every coefficient."""
        binding = {k: _as_poly(v) for k, v in binding.items()}
        out = {}
        for m, c in self.terms.items():
            p = c.substitute(binding)
            if not p.is_zero():
                out[m] = p
        return _raw(self.n, self.trunc, out)

    def truncate(self, new_trunc: int) -> "Series":
        """Restriction to a smaller truncation degree (exact, never a widening)."""
        if new_trunc > self.trunc:
            raise ValueError("cannot widen a truncated series")
        return Series(self.n, new_trunc, {m: c for m, c in self.terms.items() if sum(m) <= new_trunc})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.n == other.n and self.trunc == other.trunc and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.trunc, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            xs = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(m) if e
            )
            cs = repr(c)
            if len(c.terms) > 1:
                cs = f"({cs})"
            parts.append(f"{cs}*{xs}" if xs else cs)
        return " + ".join(parts)


def _raw(n: int, trunc: int, terms: Dict[MultiIndex, CoefPoly]) -> Series:
    s = Series.__new__(Series)
    s.n = n
    s.trunc = trunc
    s.terms = terms
    return s


# ---------------------------------------------------------------------------
# Named operations
# ---------------------------------------------------------------------------


def series_add(f: Series, g: Series) -> Series:
    return f + g


def series_mul(f: Series, g: Series) -> Series:
    return f * g


def _require_zero_constant(u: Series, op: str):
    if not u.constant_term().is_zero():
        raise ValueError(f"{op} requires a series with zero constant term")


def series_log1p(u: Series) -> Series:
    """log(1 + u) = sum_{k>=1} (-1)^(k+1) u^k / k, truncated."""
    _require_zero_constant(u, "series_log1p")
    result = Series.zero(u.n, u.trunc)
    power = Series.one(u.n, u.trunc)
    for k in range(1, u.trunc + 1):
        power = power * u
        if power.is_zero():
            break
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
    return result


def series_exp(u: Series) -> Series:
    """exp(u) = sum_{k>=0} u^k / k!, truncated; u must have zero constant term."""
    _require_zero_constant(u, "series_exp")
    result = Series.one(u.n, u.trunc)
    power = Series.one(u.n, u.trunc)
    for k in range(1, u.trunc + 1):
        power = power * u
        if power.is_zero():
            break
        result = result + power.scale(Fraction(1, factorial(k)))
    return result


def series_diff(f: Series, alpha: int) -> Series:
    """Formal partial derivative with respect to x_alpha (1-based)."""
    if not 1 <= alpha <= f.n:
        raise ValueError(f"variable index {alpha} out of range 1..{f.n}")
    i = alpha - 1
    out = {}
    for m, c in f.terms.items():
        e = m[i]
        if e:
            mm = m[:i] + (e - 1,) + m[i + 1:]
            prev = out.get(mm)
            p = c.scale(e)
            out[mm] = p if prev is None else prev + p
    return _raw(f.n, f.trunc, {m: c for m, c in out.items() if not c.is_zero()})
