"""Candidate enumeration, constraint extraction, rational solving, and the
classification sweep.

Constraint systems come from the coefficients of the Monge-Ampere log
residual with a symbolic Einstein constant.  Solving is exact over the
rationals: linear elimination (Einstein constant first), positivity-based
pruning, linear-span reduction, triangular substitution, and the rational
root theorem on univariate remnants.  Anything still multivariate-nonlinear
is surfaced as UNRESOLVED, never silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .algebra import (
    EINSTEIN,
    EINSTEIN_NAME,
    CoefPoly,
    MultiIndex,
    Unknown,
    grlex_key,
    mi_degree,
    mi_permute,
    monomials_of_degree,
    support_unknown,
)
from .geometry import (
    EinsteinCandidate,
    PotentialSpec,
    build_potential,
    certify_exact,
    degree_bound_lambda,
    ma_log_residual,
)

_MAX_SEARCH_DEPTH = 64


class EngineError(RuntimeError):
    """Internal inconsistency (e.g. classification cross-check failure)."""


# ---------------------------------------------------------------------------
# Constraint systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintSystem:
    unknowns: Tuple[Unknown, ...]
    equations: Tuple[CoefPoly, ...]
    positivity: frozenset
    residual_monomials: Tuple[MultiIndex, ...]  # provenance, one per equation


@dataclass(frozen=True)
class SolveOutcome:
    status: str  # "SOLVED" | "INFEASIBLE" | "UNRESOLVED"
    solutions: Tuple[Tuple[Tuple[str, Fraction], ...], ...]
    witness: Optional[CoefPoly] = None
    remnants: Tuple[Tuple[CoefPoly, ...], ...] = ()

    def solution_dicts(self) -> List[Dict[str, Fraction]]:
        return [dict(sol) for sol in self.solutions]


def extract_constraints(spec: PotentialSpec, trunc: int) -> ConstraintSystem:
    """One equation per x-monomial coefficient of the log residual with a
    symbolic Einstein constant; ordered by (degree, graded-lex monomial)."""
    if trunc < spec.max_degree() + 1:
        raise ValueError(f"truncation {trunc} must exceed the support degree {spec.max_degree()}")
    P = build_potential(spec, trunc)
    R = ma_log_residual(P, CoefPoly.var(EINSTEIN_NAME))
    equations = []
    monos = []
    for m, coef in R.sorted_terms():
        equations.append(coef.normalized())
        monos.append(m)
    unknowns = tuple(spec.unknowns()) + (EINSTEIN,)
    positivity = frozenset(u.name for u in unknowns)
    return ConstraintSystem(unknowns, tuple(equations), positivity, tuple(monos))


# ---------------------------------------------------------------------------
# Univariate helpers (exact rational coefficients)
# ---------------------------------------------------------------------------


def _as_uni(poly: CoefPoly, name: str) -> Optional[List[Fraction]]:
    """Coefficient list (ascending powers) if poly is univariate in name."""
    coeffs: Dict[int, Fraction] = {}
    for mono, c in poly.terms.items():
        if len(mono) > 1 or (mono and mono[0][0] != name):
            return None
        coeffs[mono[0][1] if mono else 0] = c
    deg = max(coeffs)
    return [coeffs.get(i, Fraction(0)) for i in range(deg + 1)]


def _uni_trim(c: List[Fraction]) -> List[Fraction]:
    while c and not c[-1]:
        c.pop()
    return c


def _uni_mod(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    while len(a) >= len(b) > 0 and _uni_trim(a):
        if len(a) < len(b):
            break
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] -= factor * bc
        a.pop()
        _uni_trim(a)
    return a


def _uni_gcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a, b = _uni_trim(list(a)), _uni_trim(list(b))
    while b:
        a, b = b, _uni_mod(a, b)
        _uni_trim(b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _divisors(v: int) -> List[int]:
    v = abs(v)
    out = set()
    d = 1
    while d * d <= v:
        if v % d == 0:
            out.add(d)
            out.add(v // d)
        d += 1
    return sorted(out)


def _uni_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _rational_roots(coeffs: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    """All rational roots, plus the deflated (root-free) remainder polynomial."""
    coeffs = _uni_trim(list(coeffs))
    if not coeffs:
        raise ValueError("zero polynomial has no root set")
    roots: List[Fraction] = []
    # root at zero
    while coeffs and not coeffs[0]:
        if not roots or roots[-1] != 0:
            roots.append(Fraction(0))
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return sorted(set(roots)), coeffs
    denom_lcm = 1
    for c in coeffs:
        denom_lcm = denom_lcm * c.denominator // __import__("math").gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in coeffs]
    candidates = set()
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            candidates.add(Fraction(p, q))
            candidates.add(Fraction(-p, q))
    for r in sorted(candidates):
        while len(coeffs) > 1 and _uni_eval(coeffs, r) == 0:
            roots.append(r)
            # synthetic division by (x - r)
            quotient = [Fraction(0)] * (len(coeffs) - 1)
            carry = coeffs[-1]
            for i in range(len(coeffs) - 2, -1, -1):
                quotient[i] = carry
                carry = coeffs[i] + carry * r
            coeffs = _uni_trim(quotient)
    return sorted(set(roots)), coeffs


def _descartes_positive(coeffs: Sequence[Fraction]) -> int:
    """Upper bound (sign variations) on the number of positive real roots."""
    signs = [1 if c > 0 else -1 for c in coeffs if c]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _uni_to_poly(name: str, coeffs: Sequence[Fraction]) -> CoefPoly:
    terms = {(() if i == 0 else ((name, i),)): c for i, c in enumerate(coeffs) if c}
    return CoefPoly(terms).normalized()


# ---------------------------------------------------------------------------
# The solving pipeline
# ---------------------------------------------------------------------------


def _eq_sort_key(eq: CoefPoly):
    return (len(eq.terms), eq.total_degree(), sorted(eq.terms.items()).__repr__())


class _Search:
    def __init__(self, system: ConstraintSystem):
        self.positivity: Set[str] = set(system.positivity)
        self.original = system.equations
        self.solutions: List[Tuple[Tuple[str, Fraction], ...]] = []
        self.witnesses: List[CoefPoly] = []
        self.remnants: List[Tuple[CoefPoly, ...]] = []
        self.all_names = [u.name for u in system.unknowns]

    # -- simplification ------------------------------------------------------

    def _clean(self, eqs: List[CoefPoly]):
        """Normalize each equation; returns (equations, contradiction_witness)."""
        out = []
        seen = set()
        for eq in eqs:
            if eq.is_zero():
                continue
            if eq.is_constant():
                return [], eq
            mono = tuple((nm, e) for nm, e in eq.common_monomial() if nm in self.positivity)
            if mono:
                stripped = eq.divide_monomial(mono)
                if stripped.is_constant():
                    # c * u^k = 0 with u > 0 contradicts positivity
                    return [], eq.normalized()
                eq = stripped
            eq = eq.normalized()
            key = frozenset(eq.terms.items())
            if key not in seen:
                seen.add(key)
                out.append(eq)
        out.sort(key=_eq_sort_key)
        return out, None

    def _sign_infeasible(self, eq: CoefPoly) -> bool:
        """Positive combination of positive quantities cannot vanish."""
        if not eq.terms:
            return False
        if any(nm not in self.positivity for nm in eq.unknowns()):
            return False
        signs = {c > 0 for c in eq.terms.values()}
        return len(signs) == 1

    def _gauss(self, eqs: List[CoefPoly]) -> List[CoefPoly]:
        """Full Gauss-Jordan reduction treating unknown-monomials as
        independent coordinates.  Pure linear algebra over the span of the
        equations, so the solution set is unchanged; it routinely exposes
        combinations with strippable monomial factors."""
        from .algebra import _umono_key

        basis: Dict[tuple, CoefPoly] = {}

        def reduce_by_basis(eq: CoefPoly) -> CoefPoly:
            changed = True
            while changed and not eq.is_zero():
                changed = False
                for mono in sorted(eq.terms, key=_umono_key, reverse=True):
                    pivot = basis.get(mono)
                    if pivot is not None:
                        eq = eq - pivot.scale(eq.terms[mono] / pivot.terms[mono])
                        changed = True
                        break
            return eq

        for eq in eqs:
            eq = reduce_by_basis(eq)
            if eq.is_zero():
                continue
            lead = max(eq.terms, key=_umono_key)
            eq = eq.normalized()
            # back-reduce existing pivots against the new one
            for key in list(basis):
                row = basis[key]
                if lead in row.terms:
                    row = row - eq.scale(row.terms[lead] / eq.terms[lead])
                    basis[key] = row
            basis[lead] = eq
        return [basis[k].normalized() for k in sorted(basis, key=_umono_key) if not basis[k].is_zero()]

    # -- leaf handling -------------------------------------------------------

    def _resolve(self, bindings: List[Tuple[str, CoefPoly]]):
        resolved: Dict[str, CoefPoly] = {}
        for name, expr in reversed(bindings):
            value = expr.substitute(resolved)
            if not value.is_constant():
                return None
            resolved[name] = value
        return {nm: p.constant_value() for nm, p in resolved.items()}

    def _leaf(self, bindings: List[Tuple[str, CoefPoly]], remnant: List[CoefPoly]):
        if remnant:
            self.remnants.append(tuple(remnant))
            return
        values = self._resolve(bindings)
        if values is None or set(values) != set(self.all_names):
            # a free unknown survived: an unexplored solution family
            self.remnants.append(tuple(CoefPoly.var(nm) for nm in self.all_names if values is None or nm not in values))
            return
        for nm in self.positivity:
            if values[nm] <= 0:
                self.witnesses.append(CoefPoly.var(nm) - CoefPoly.const(values[nm]))
                return
        for eq in self.original:
            if eq.evaluate(values) != 0:
                raise EngineError(f"solver produced a non-solution: {values} fails {eq}")
        self.solutions.append(tuple(sorted(values.items())))

    # -- main recursion -------------------------------------------------------

    def run(self, eqs: List[CoefPoly], bindings: List[Tuple[str, CoefPoly]], depth: int = 0):
        if depth > _MAX_SEARCH_DEPTH:
            self.remnants.append(tuple(eqs))
            return
        while True:
            eqs, contradiction = self._clean(eqs)
            if contradiction is not None:
                self.witnesses.append(contradiction)
                return
            if not eqs:
                self._leaf(bindings, [])
                return
            for eq in eqs:
                if self._sign_infeasible(eq):
                    self.witnesses.append(eq)
                    return
            step = self._linear_step(eqs)
            if step is not None:
                name, expr, rest = step
                if name in self.positivity and expr.is_constant() and expr.constant_value() <= 0:
                    self.witnesses.append(CoefPoly.var(name) - expr)
                    return
                bindings = bindings + [(name, expr)]
                eqs = [e.substitute({name: expr}) for e in rest]
                continue
            reduced = self._gauss(eqs)
            if {frozenset(e.terms.items()) for e in reduced} != {frozenset(e.terms.items()) for e in eqs}:
                eqs = reduced
                continue
            if self._univariate_step(eqs, bindings, depth):
                return
            self.remnants.append(tuple(eqs))
            return

    def _linear_step(self, eqs: List[CoefPoly]):
        """Find (unknown, expression, other equations) for an exact linear
        elimination: the unknown occurs to degree 1 with a constant coefficient."""
        best = None
        for idx, eq in enumerate(eqs):
            for name in sorted(eq.unknowns()):
                if eq.degree_in(name) != 1:
                    continue
                parts = eq.by_power(name)
                lin = parts.get(1)
                if lin is None or not lin.is_constant():
                    continue
                score = (0 if name == EINSTEIN_NAME else 1, len(eq.terms), idx, name)
                if best is None or score < best[0]:
                    best = (score, idx, name, parts)
        if best is None:
            return None
        _, idx, name, parts = best
        c = parts[1].constant_value()
        expr = parts.get(0, CoefPoly()).scale(Fraction(-1) / c)
        rest = eqs[:idx] + eqs[idx + 1:]
        return name, expr, rest

    def _univariate_step(self, eqs: List[CoefPoly], bindings, depth: int) -> bool:
        """Branch over the rational roots of a univariate equation.  Returns
        True if a branch was taken (children handled recursively)."""
        groups: Dict[str, List[List[Fraction]]] = {}
        for eq in eqs:
            names = eq.unknowns()
            if len(names) == 1:
                name = next(iter(names))
                coeffs = _as_uni(eq, name)
                if coeffs is not None:
                    groups.setdefault(name, []).append(coeffs)
        if not groups:
            return False

        def gcd_for(name):
            polys = groups[name]
            g = polys[0]
            for p in polys[1:]:
                g = _uni_gcd(g, p)
                if len(g) == 1:
                    break
            return g

        gcds = {name: gcd_for(name) for name in groups}
        name = min(gcds, key=lambda nm: (len(gcds[nm]), nm))
        g = gcds[name]
        if len(g) == 1:
            # no common root: the univariate equations are incompatible
            self.witnesses.append(_uni_to_poly(name, groups[name][0]))
            return True
        roots, residue = _rational_roots(g)
        feasible = [r for r in roots if (r > 0 if name in self.positivity else True)]
        irrational_risk = len(residue) > 1 and _descartes_positive(residue) > 0
        for r in feasible:
            child = [e.substitute({name: CoefPoly.const(r)}) for e in eqs]
            self.run(child, bindings + [(name, CoefPoly.const(r))], depth + 1)
        if irrational_risk:
            self.remnants.append(tuple(eqs))
        elif not feasible:
            self.witnesses.append(_uni_to_poly(name, g))
        return True


def solve_system(system: ConstraintSystem) -> SolveOutcome:
    """Exact rational solving with positivity side-conditions.

    Status is UNRESOLVED whenever any branch could not be decided; INFEASIBLE
    outcomes carry a witness equation that contradicts positivity.
    """
    search = _Search(system)
    eqs, contradiction = search._clean(list(system.equations))
    if contradiction is not None:
        return SolveOutcome("INFEASIBLE", (), contradiction)
    search.run(eqs, [])
    solutions = tuple(sorted(set(search.solutions)))
    if search.remnants:
        return SolveOutcome("UNRESOLVED", solutions, None, tuple(search.remnants))
    if solutions:
        return SolveOutcome("SOLVED", solutions)
    witness = min(search.witnesses, key=_eq_sort_key) if search.witnesses else None
    return SolveOutcome("INFEASIBLE", (), witness)


# ---------------------------------------------------------------------------
# Support enumeration
# ---------------------------------------------------------------------------


def canonical_support(n: int, support: Iterable[MultiIndex]) -> Tuple[MultiIndex, ...]:
    """Lexicographically least representative under variable permutations."""
    support = tuple(sorted(tuple(m) for m in support))
    best = support
    for perm in permutations(range(n)):
        image = tuple(sorted(mi_permute(m, perm) for m in support))
        if image < best:
            best = image
    return best


def enumerate_supports(
    n: int, k_max: int, deg_cap: int, sizes: Optional[Iterable[int]] = None
) -> List[PotentialSpec]:
    """All symbolic supports of size <= k_max with monomial degrees in
    [2, deg_cap], one canonical representative per variable-permutation orbit."""
    if n < 1 or k_max < 0 or deg_cap < 2:
        raise ValueError("need n >= 1, k_max >= 0, deg_cap >= 2")
    monos = [m for d in range(2, deg_cap + 1) for m in monomials_of_degree(n, d)]
    wanted = sorted(set(sizes)) if sizes is not None else list(range(0, k_max + 1))
    perms = list(permutations(range(n)))
    specs: List[PotentialSpec] = []
    for size in wanted:
        if size > k_max:
            raise ValueError(f"size {size} exceeds k_max {k_max}")
        if size == 0:
            specs.append(PotentialSpec(n, ()))
            continue
        seen: Set[Tuple[MultiIndex, ...]] = set()
        reps: List[Tuple[MultiIndex, ...]] = []
        for comb in combinations(monos, size):
            key = tuple(sorted(comb))
            if key in seen:
                continue
            orbit = {tuple(sorted(mi_permute(m, p) for m in comb)) for p in perms}
            seen.update(orbit)
            reps.append(min(orbit))
        for rep in sorted(reps, key=lambda s: tuple(grlex_key(m) for m in s)):
            specs.append(PotentialSpec.symbolic(n, rep))
    return specs


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

TAG_CPN_UNIT = "CPn_unit"
TAG_PRODUCT = "ProductOfLines"
TAG_UNKNOWN = "UNKNOWN"


def tag_cpn_scaled(q: int) -> str:
    return f"CPn_scaled({q})"


def _model_cpn_scaled(n: int, q: int, trunc: int):
    """(1 + (x_1+...+x_n)/q)^q as a Series."""
    from .series import Series

    s = Series(n, trunc, {tuple(1 if j == i else 0 for j in range(n)): Fraction(1, q) for i in range(n)})
    return (Series.one(n, trunc) + s).pow_trunc(q)


def _set_partitions(items: List[int]) -> Iterable[List[List[int]]]:
    """All partitions of items into nonempty blocks (canonical order)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        yield [[first]] + partition


def classify(spec: PotentialSpec, lam: Fraction) -> str:
    """Match a certified candidate against the model potentials.

    Returns one of CPn_unit, CPn_scaled(q), ProductOfLines, UNKNOWN; the
    match is cross-checked against the rational shape of the Einstein
    constant, and a disagreement is an engine bug, not a value.
    """
    lam = Fraction(lam)
    n = spec.n
    half = Fraction(lam, 2)
    p_hulin, q_hulin = half.numerator, half.denominator
    tag = TAG_UNKNOWN

    if not spec.support:
        tag = TAG_CPN_UNIT
    else:
        d = spec.max_degree()
        trunc = max(n * d, d)
        P = build_potential(spec, trunc)
        q_guess = Fraction(2 * (n + 1), lam)
        if q_guess.denominator == 1 and q_guess >= 2 and P == _model_cpn_scaled(n, int(q_guess), trunc):
            tag = tag_cpn_scaled(int(q_guess))
        else:
            from .series import Series

            for blocks in _set_partitions(list(range(n))):
                if len(blocks) < 2:
                    continue
                model = Series.one(n, trunc)
                ok = True
                for block in blocks:
                    qb = Fraction(2 * (len(block) + 1), lam)
                    if qb.denominator != 1 or qb < 1:
                        ok = False
                        break
                    base = Series.one(n, trunc) + Series(
                        n, trunc, {tuple(1 if j == i else 0 for j in range(n)): Fraction(1, int(qb)) for i in block}
                    )
                    model = model * base.pow_trunc(int(qb))
                if ok and P == model:
                    tag = TAG_PRODUCT
                    break

    # Hulin shape shortcut as an independent cross-check
    if p_hulin == n + 1:
        expected = TAG_CPN_UNIT if q_hulin == 1 and not spec.support else tag_cpn_scaled(q_hulin)
        if tag not in (expected, TAG_CPN_UNIT):
            raise EngineError(
                f"classification disagreement: matched {tag}, Einstein constant shape demands {expected}"
            )
    if n == 2 and p_hulin == 2 and tag != TAG_PRODUCT:
        raise EngineError(
            f"classification disagreement: n = p = 2 demands {TAG_PRODUCT}, matched {tag}"
        )
    return tag


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSolution:
    assignment: Tuple[Tuple[str, Fraction], ...]
    lam: Fraction
    tag: str
    certificate: str


@dataclass(frozen=True)
class SweepEntry:
    n: int
    k: int
    support: Tuple[MultiIndex, ...]
    status: str
    solutions: Tuple[SweepSolution, ...] = ()
    witness: Optional[str] = None
    note: str = ""

    def sort_key(self):
        return (self.n, self.k, tuple(grlex_key(m) for m in self.support))


@dataclass(frozen=True)
class ClassificationReport:
    dims: Tuple[int, int]
    k_max: int
    deg_cap: int
    trunc: int
    entries: Tuple[SweepEntry, ...]

    def counts(self) -> Dict[str, int]:
        out = {"SOLVED": 0, "INFEASIBLE": 0, "UNRESOLVED": 0, "SHORTCUT": 0}
        for e in self.entries:
            out[e.status] = out.get(e.status, 0) + 1
        return out

    def solved_tags(self) -> Set[Tuple[int, str]]:
        return {
            (e.n, sol.tag)
            for e in self.entries
            if e.status == "SOLVED"
            for sol in e.solutions
        }

    def has_unknown(self) -> bool:
        return any(
            sol.tag == TAG_UNKNOWN for e in self.entries for sol in e.solutions
        )


def _solve_one_spec(args) -> SweepEntry:
    n, k, support, trunc = args
    spec = PotentialSpec.symbolic(n, support)
    # cheap prescreen at the lowest admissible truncation: its equations are a
    # subset of the full system, so INFEASIBLE transfers
    pre_trunc = spec.max_degree() + 1
    if pre_trunc < trunc:
        pre = solve_system(extract_constraints(spec, pre_trunc))
        if pre.status == "INFEASIBLE":
            return SweepEntry(n, k, support, "INFEASIBLE", (), repr(pre.witness), "prescreen")
    system = extract_constraints(spec, trunc)
    outcome = solve_system(system)
    if outcome.status == "INFEASIBLE":
        return SweepEntry(n, k, support, "INFEASIBLE", (), repr(outcome.witness))
    if outcome.status == "UNRESOLVED":
        note = "; ".join(repr(r) for r in outcome.remnants)
        return SweepEntry(n, k, support, "UNRESOLVED", (), None, note)
    solutions = []
    for sol in outcome.solutions:
        values = dict(sol)
        lam = values[EINSTEIN_NAME]
        numeric = spec.substitute(values)
        # closed-loop validation: residual at trunc + 2, then the exact certificate
        residual = ma_log_residual(build_potential(numeric, trunc + 2), lam)
        if not residual.is_zero():
            return SweepEntry(n, k, support, "UNRESOLVED", (), None, f"closed-loop residual nonzero for {values}")
        cert = certify_exact(EinsteinCandidate(numeric, lam))
        if not cert.passed():
            return SweepEntry(n, k, support, "UNRESOLVED", (), None, f"certificate failed for {values}")
        if not (0 < lam <= 2 * (n + 1)):
            raise EngineError(f"solved Einstein constant {lam} outside (0, 2(n+1)]")
        if lam < degree_bound_lambda(numeric):
            raise EngineError(f"solved Einstein constant {lam} violates the degree bound")
        tag = classify(numeric, lam)
        solutions.append(SweepSolution(sol, lam, tag, cert.status))
    return SweepEntry(n, k, support, "SOLVED", tuple(solutions))


def sweep(
    dims: Iterable[int],
    k_max: int,
    deg_cap: Optional[int] = None,
    trunc: Optional[int] = None,
    jobs: int = 1,
) -> ClassificationReport:
    """Enumerate, extract, solve, certify, and classify over a dimension range.

    Completeness is only claimed up to deg_cap (default k_max); for n > 2k
    the enumeration for codimension k is skipped and the totally geodesic
    entry recorded directly.  Output is deterministic and independent of the
    worker count.
    """
    dims = sorted(set(dims))
    if not dims or dims[0] < 1 or dims[-1] > 8:
        raise ValueError("dimensions must lie in 1..8")
    if deg_cap is None:
        deg_cap = max(k_max, 2)
    if trunc is None:
        trunc = deg_cap + 2
    tasks = []
    shortcut_entries = []
    for n in dims:
        for k in range(0, k_max + 1):
            if k == 0:
                tasks.append((n, 0, (), trunc))
            elif n > 2 * k:
                shortcut_entries.append(
                    SweepEntry(n, k, (), "SHORTCUT", (), None, f"n > 2k: only the totally geodesic CP^{n}")
                )
            else:
                for spec in enumerate_supports(n, k_max, deg_cap, sizes=[k]):
                    tasks.append((n, k, tuple(m for m, _ in spec.support), trunc))
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_solve_one_spec, tasks, chunksize=8))
    else:
        entries = [_solve_one_spec(t) for t in tasks]
    entries.extend(shortcut_entries)
    entries.sort(key=SweepEntry.sort_key)
    return ClassificationReport((dims[0], dims[-1]), k_max, deg_cap, trunc, tuple(entries))
