"""Bochner-form potentials, the metric determinant in x-space, and the
Monge-Ampere Einstein identity.

A rotation-invariant potential is F = log P with
P = 1 + sum_j x_j + sum_j a_j x^(m_j), x_alpha = |z_alpha|^2.  The Hermitian
matrix of the metric decomposes as

    g_{ab} = delta_{ab} F_a + zbar_a z_b F_{ab},

so det(g) is computed by a permutation-cycle expansion entirely in x-space:
a cycle c of a permutation contributes (prod_{a in c} x_a)(prod_{a in c}
F_{a,sigma(a)}) while fixed points contribute F_a + x_a F_{aa}.  The same
expansion applied to the numerator matrix

    M_{ab} = P P_{z_a zbar_b} - P_{z_a} P_{zbar_b}
           = delta_{ab} P Q_a + zbar_a z_b (P Q_{ab} - Q_a Q_b),

with Q_a = dP/dx_a, yields det(M) as an exact polynomial, which is what the
truncation-free certificate compares against a power of P.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import (
    CoefPoly,
    MultiIndex,
    Unknown,
    format_rational,
    grlex_key,
    mi_degree,
    support_unknown,
    validate_multiindex,
)
from .series import Series, series_diff, series_exp, series_log1p

MAX_DIMENSION = 8

Coefficient = Union[Fraction, Unknown]


@dataclass(frozen=True)
class PotentialSpec:
    """Bochner-form support list: P = 1 + sum x_j + sum_j coef_j x^(m_j).

    Support multi-indices have degree >= 2 and are pairwise distinct; when the
    spec is flagged `induced`, numeric coefficients must be positive.
    """

    n: int
    support: Tuple[Tuple[MultiIndex, Coefficient], ...]
    induced: bool = True

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DIMENSION:
            raise ValueError(f"dimension must be in 1..{MAX_DIMENSION}")
        seen = set()
        norm = []
        for m, coef in self.support:
            m = validate_multiindex(m, self.n)
            if mi_degree(m) < 2:
                raise ValueError(f"support monomial {m} has degree < 2")
            if m in seen:
                raise ValueError(f"duplicate support monomial {m}")
            seen.add(m)
            if isinstance(coef, int):
                coef = Fraction(coef)
            if isinstance(coef, Fraction):
                if coef == 0:
                    raise ValueError(f"zero coefficient at {m}")
                if self.induced and coef <= 0:
                    raise ValueError(f"induced potentials need positive coefficients, got {coef} at {m}")
            elif not isinstance(coef, Unknown):
                raise ValueError(f"coefficient at {m} must be a Fraction or Unknown")
            norm.append((m, coef))
        norm.sort(key=lambda item: grlex_key(item[0]))
        object.__setattr__(self, "support", tuple(norm))

    @property
    def codimension(self) -> int:
        return len(self.support)

    def is_numeric(self) -> bool:
        return all(isinstance(c, Fraction) for _, c in self.support)

    def max_degree(self) -> int:
        """deg_x P (1 for the empty support)."""
        return max((mi_degree(m) for m, _ in self.support), default=1)

    def unknowns(self) -> List[Unknown]:
        return [c for _, c in self.support if isinstance(c, Unknown)]

    def substitute(self, assignment) -> "PotentialSpec":
        """Replace symbolic coefficients by rationals; zero coefficients drop out."""
        new = []
        for m, c in self.support:
            if isinstance(c, Unknown) and c.name in assignment:
                v = Fraction(assignment[c.name])
                if v:
                    new.append((m, v))
            else:
                new.append((m, c))
        return PotentialSpec(self.n, tuple(new), induced=self.induced)

    @staticmethod
    def symbolic(n: int, monomials: Sequence[MultiIndex], induced: bool = True) -> "PotentialSpec":
        return PotentialSpec(n, tuple((tuple(m), support_unknown(tuple(m))) for m in monomials), induced=induced)


@dataclass(frozen=True)
class HessianX:
    """First and second x-derivatives of F = log P, Bochner-normalized."""

    n: int
    f_alpha: Tuple[Series, ...]
    f_alpha_beta: Tuple[Tuple[Series, ...], ...]

    @property
    def trunc(self) -> int:
        return self.f_alpha[0].trunc


@dataclass(frozen=True)
class EinsteinCandidate:
    spec: PotentialSpec
    lam: Fraction


@dataclass(frozen=True)
class Certificate:
    """Outcome of the truncation-free polynomial identity det(M)^q = P^(2nq-p)."""

    status: str  # "PASS" | "FAIL"
    lam: Fraction
    p_prime: int
    q_prime: int
    lhs_hash: str
    rhs_hash: str
    witness: Optional[MultiIndex] = None

    def passed(self) -> bool:
        return self.status == "PASS"


def build_potential(spec: PotentialSpec, trunc: int) -> Series:
    """P = 1 + sum x_j + sum coef_j x^(m_j) embedded as an exact Series."""
    if trunc < spec.max_degree():
        raise ValueError(f"truncation {trunc} below the support degree {spec.max_degree()}")
    terms: Dict[MultiIndex, CoefPoly] = {(0,) * spec.n: CoefPoly.const(1)}
    for i in range(spec.n):
        terms[tuple(1 if j == i else 0 for j in range(spec.n))] = CoefPoly.const(1)
    for m, coef in spec.support:
        terms[m] = CoefPoly.var(coef.name) if isinstance(coef, Unknown) else CoefPoly.const(coef)
    return Series(spec.n, trunc, terms)


def bochner_normalize(phi: Series) -> Tuple[Series, Tuple[Fraction, ...]]:
    """Rescale x_alpha so the linear part of phi becomes exactly sum x_alpha.

    Returns the normalized series and the scalings c_alpha used
    (x_alpha -> x_alpha / c_alpha).  Idempotent on normalized input.
    """
    if not phi.constant_term().is_zero():
        raise ValueError("potential must vanish at the center")
    if not phi.is_numeric():
        raise ValueError("bochner_normalize needs numeric coefficients")
    scales = []
    for alpha in range(phi.n):
        m = tuple(1 if i == alpha else 0 for i in range(phi.n))
        c = phi.coeff(m).constant_value()
        if c <= 0:
            raise ValueError(f"metric degenerate at center: linear coefficient of x{alpha + 1} is {c}")
        scales.append(c)
    normalized = phi.rescale_vars([Fraction(1, 1) / c for c in scales])
    return normalized, tuple(scales)


def metric_in_x(P: Series) -> HessianX:
    """Derivatives of F = log P; requires P in Bochner form (P(0)=1, linear part sum x)."""
    if P.coeff((0,) * P.n) != CoefPoly.const(1):
        raise ValueError("potential must have constant term 1")
    for alpha in range(1, P.n + 1):
        m = tuple(1 if i == alpha - 1 else 0 for i in range(P.n))
        if P.coeff(m) != CoefPoly.const(1):
            raise ValueError("potential must have unit linear part (Bochner form)")
    # P is an exact polynomial, so it can be widened by two degrees before
    # taking the log; otherwise the second derivatives would only be valid to
    # degree trunc - 2.
    wide = Series(P.n, P.trunc + 2, P.terms)
    F = series_log1p(wide - Series.one(P.n, P.trunc + 2))
    f_alpha_wide = [series_diff(F, a) for a in range(1, P.n + 1)]
    f_alpha = tuple(fa.truncate(P.trunc) for fa in f_alpha_wide)
    f_ab = tuple(
        tuple(series_diff(f_alpha_wide[a], b + 1).truncate(P.trunc) for b in range(P.n))
        for a in range(P.n)
    )
    return HessianX(P.n, f_alpha, f_ab)


# ---------------------------------------------------------------------------
# Permutation-cycle determinant
# ---------------------------------------------------------------------------


def _diag_products(diag: Sequence[Series], one: Series) -> List[Series]:
    """prod_{a in mask} diag[a] for every bitmask, shared bottom-up."""
    n = len(diag)
    prods = [one] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        prods[mask] = prods[mask ^ (1 << low)] * diag[low]
    return prods


def _fixed_point_free_perms(elems: Tuple[int, ...]):
    """Yield (mapping, sign) for fixed-point-free permutations of elems."""
    for perm in permutations(elems):
        if any(a == b for a, b in zip(elems, perm)):
            continue
        # sign from cycle count: (-1)^(len - cycles)
        seen = set()
        cycles = 0
        mapping = dict(zip(elems, perm))
        for a in elems:
            if a in seen:
                continue
            cycles += 1
            b = a
            while b not in seen:
                seen.add(b)
                b = mapping[b]
        yield mapping, (-1) ** (len(elems) - cycles)


def _subsets(n: int, max_size: int):
    from itertools import combinations

    for size in range(2, min(n, max_size) + 1):
        yield from combinations(range(n), size)


def cycle_determinant(n: int, diag: Sequence[Series], off, trunc: int) -> Series:
    """det of the matrix delta_{ab} diag_a + zbar_a z_b off(a, b), in x-space.

    `off(a, b)` returns the Series factor of the (a, b) off-diagonal entry
    (0-based).  The x_a prefactor of each cycle raises the degree by the
    cycle support size, so inner products are truncated accordingly.
    """
    one = Series.one(n, trunc)
    prods = _diag_products(diag, one)
    full = (1 << n) - 1
    total = prods[full]
    off_cache: Dict[Tuple[int, int], Series] = {}

    def off_at(a: int, b: int) -> Series:
        s = off_cache.get((a, b))
        if s is None:
            s = off(a, b)
            off_cache[(a, b)] = s
        return s

    for subset in _subsets(n, trunc):
        cap = trunc - len(subset)
        inner = Series.zero(n, trunc)
        for mapping, sign in _fixed_point_free_perms(subset):
            prod = one
            for a in subset:
                prod = prod.mul_trunc(off_at(a, mapping[a]), cap)
                if prod.is_zero():
                    break
            inner = (inner + prod) if sign > 0 else (inner - prod)
        if inner.is_zero():
            continue
        mask = 0
        for a in subset:
            mask |= 1 << a
        contrib = inner.mul_trunc(prods[full ^ mask], cap)
        mono = tuple(1 if a in subset else 0 for a in range(n))
        total = total + contrib.shift_monomial(mono)
    return total


def det_metric(H: HessianX) -> Series:
    """det(g_{ab}) as a Series in x via the cycle expansion; constant term 1."""
    n = H.n
    trunc = H.trunc
    diag = []
    for a in range(n):
        xa = tuple(1 if i == a else 0 for i in range(n))
        diag.append(H.f_alpha[a] + H.f_alpha_beta[a][a].shift_monomial(xa))
    return cycle_determinant(n, diag, lambda a, b: H.f_alpha_beta[a][b], trunc)


def det_numerator(P: Series) -> Series:
    """det(M) with M_{ab} = P P_{z_a zbar_b} - P_{z_a} P_{zbar_b}, as an exact
    polynomial in x whenever P.trunc >= n*(2*deg_x(P) - 1)."""
    n = P.n
    Q = [series_diff(P, a) for a in range(1, n + 1)]
    QQ = [[series_diff(Q[a], b + 1) for b in range(n)] for a in range(n)]
    diag = []
    for a in range(n):
        xa = tuple(1 if i == a else 0 for i in range(n))
        diag.append(P * Q[a] + (P * QQ[a][a] - Q[a] * Q[a]).shift_monomial(xa))
    return cycle_determinant(n, diag, lambda a, b: P * QQ[a][b] - Q[a] * Q[b], P.trunc)


# ---------------------------------------------------------------------------
# Monge-Ampere residual and certification
# ---------------------------------------------------------------------------


def ma_log_residual(P: Series, lam: Union[CoefPoly, Fraction, int], trunc: Optional[int] = None) -> Series:
    """R = log det(g) + (lam/2) log P, truncated.

    R vanishes identically up to the truncation iff the Einstein identity
    det(g) = P^(-lam/2) holds to that order.  Computed through the numerator
    polynomial: log det(g) = log det(M) - 2n log P, so
    R = log1p(det(M) - 1) + (lam/2 - 2n) log1p(P - 1).
    """
    if trunc is not None and trunc != P.trunc:
        P = P.truncate(trunc)
    lam_poly = lam if isinstance(lam, CoefPoly) else CoefPoly.const(lam)
    one = Series.one(P.n, P.trunc)
    log_detM = series_log1p(det_numerator(P) - one)
    log_P = series_log1p(P - one)
    factor = lam_poly.scale(Fraction(1, 2)) + CoefPoly.const(-2 * P.n)
    return log_detM + log_P.scale(factor)


def lambda_in_lowest_terms(lam: Fraction) -> Tuple[int, int]:
    """Write lam = 2 p'/q' with p'/q' in lowest terms; returns (p', q')."""
    half = Fraction(lam, 2)
    return half.numerator, half.denominator


def _poly_hash(s: Series) -> str:
    h = hashlib.sha256()
    for m, c in s.sorted_terms():
        h.update(repr((m, sorted(c.terms.items()))).encode())
    return h.hexdigest()


def certify_exact(cand: EinsteinCandidate) -> Certificate:
    """Truncation-free proof of the Einstein identity for a numeric candidate.

    With lam/2 = p'/q' in lowest terms the Monge-Ampere equation is
    equivalent to the exact polynomial identity det(M)^q' = P^(2n q' - p').
    """
    spec = cand.spec
    if not spec.is_numeric():
        raise ValueError("certify_exact needs a fully numeric spec")
    lam = Fraction(cand.lam)
    if lam <= 0:
        raise ValueError(f"Einstein constant must be positive, got {lam}")
    p_prime, q_prime = lambda_in_lowest_terms(lam)
    n = spec.n
    exponent = 2 * n * q_prime - p_prime
    if exponent < 0:
        raise ValueError(f"2n q' - p' = {exponent} < 0: candidate rejected")
    d = spec.max_degree()
    det_deg = n * (2 * d - 1)
    big = max(q_prime * det_deg, exponent * d, 1)
    P = build_potential(spec, big)
    detM = det_numerator(P)
    lhs = detM.pow_trunc(q_prime)
    rhs = P.pow_trunc(exponent)
    lhs_hash = _poly_hash(lhs)
    rhs_hash = _poly_hash(rhs)
    if lhs == rhs:
        return Certificate("PASS", lam, p_prime, q_prime, lhs_hash, rhs_hash)
    diff = lhs - rhs
    witness = min(diff.terms, key=grlex_key)
    return Certificate("FAIL", lam, p_prime, q_prime, lhs_hash, rhs_hash, witness)


def degree_bound_lambda(spec: PotentialSpec) -> Fraction:
    """Lower bound lam >= 4n / deg_z(P) = 2n / deg_x(P) forced by degree count."""
    return Fraction(2 * spec.n, spec.max_degree())


# ---------------------------------------------------------------------------
# Projective induction check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InductionReport:
    """Sign report on the coefficients of E = e^Phi - 1 up to a degree bound."""

    trunc: int
    induced_up_to_trunc: bool
    coefficients: Tuple[Tuple[MultiIndex, Fraction], ...]
    codimension_estimate: Optional[int]
    witness: Optional[MultiIndex]


def projective_induction_check(phi: Series) -> InductionReport:
    """Reconstruct E = e^Phi - 1 and check that every coefficient is >= 0.

    A nonnegative verdict is only valid up to the truncation degree; it is
    never a global claim.
    """
    if not phi.constant_term().is_zero():
        raise ValueError("potential must vanish at the center")
    if not phi.is_numeric():
        raise ValueError("projective_induction_check needs numeric coefficients")
    E = series_exp(phi) - Series.one(phi.n, phi.trunc)
    coeffs = tuple((m, c.constant_value()) for m, c in E.sorted_terms())
    witness = next((m for m, c in coeffs if c < 0), None)
    if witness is not None:
        return InductionReport(phi.trunc, False, coeffs, None, witness)
    return InductionReport(phi.trunc, True, coeffs, len(coeffs) - phi.n, None)
