import itertools
import random
from fractions import Fraction

import pytest

from rotke import (
    PotentialSpec,
    canonical_support,
    classify,
    enumerate_supports,
    extract_constraints,
    solve_system,
    sweep,
)
from rotke.algebra import (
    CoefPoly,
    EINSTEIN_NAME,
    mi_permute,
    monomials_of_degree,
    monomials_up_to,
    support_unknown,
)

from conftest import cpn_unit


def uname(m):
    return support_unknown(m).name


def eqs_by_monomial(system):
    return dict(zip(system.residual_monomials, system.equations))


LAM = CoefPoly.var(EINSTEIN_NAME)


class TestLinearBlock:
    """The degree-1 residual equations for a full quadratic support must be
    4 a_h + sum_k b_hk - (n+1) + lambda/2 = 0, up to one rational factor."""

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_full_quadratic_support(self, n):
        spec = PotentialSpec.symbolic(n, list(monomials_of_degree(n, 2)))
        system = extract_constraints(spec, 3)
        found = 0
        for m, eq in eqs_by_monomial(system).items():
            if sum(m) != 1:
                continue
            h = m.index(1)
            expected = CoefPoly.const(-(n + 1)) + LAM.scale(Fraction(1, 2))
            sq = tuple(2 if i == h else 0 for i in range(n))
            expected = expected + CoefPoly.var(uname(sq)).scale(4)
            for k in range(n):
                if k == h:
                    continue
                mixed = tuple(1 if i in (h, k) else 0 for i in range(n))
                expected = expected + CoefPoly.var(uname(mixed))
            assert eq.proportional_to(expected), (n, m)
            found += 1
        assert found == n

    def test_equations_are_permutation_equivariant(self):
        spec = PotentialSpec.symbolic(3, list(monomials_of_degree(3, 2)))
        system = eqs_by_monomial(extract_constraints(spec, 3))
        for perm in itertools.permutations(range(3)):
            for m, eq in system.items():
                pm = mi_permute(m, perm)
                rename = {
                    uname(mm): CoefPoly.var(uname(mi_permute(mm, perm)))
                    for mm in monomials_of_degree(3, 2)
                }
                assert system[pm].proportional_to(eq.substitute(rename)), (perm, m)

    def test_truncation_too_low_rejected(self):
        spec = PotentialSpec.symbolic(2, [(2, 0)])
        with pytest.raises(ValueError):
            extract_constraints(spec, 2)


class TestCubicRelations:
    """With the quadratic coefficients pinned to b = 3 - lambda/2 and no pure
    squares, the order-3 matching forces x_h x_k^2 coefficients to be nine
    times the pure cubes."""

    def test_cross_terms_are_nine_times_cubes(self):
        spec = PotentialSpec.symbolic(2, [(1, 1), (3, 0), (0, 3), (1, 2), (2, 1)])
        system = eqs_by_monomial(extract_constraints(spec, 5))
        sub = {uname((1, 1)): CoefPoly.const(3) - LAM.scale(Fraction(1, 2))}
        e02 = system[(0, 2)].substitute(sub).normalized()
        e11 = system[(1, 1)].substitute(sub).normalized()
        e20 = system[(2, 0)].substitute(sub).normalized()
        # degree-1 equations become trivial under the pinning
        assert system[(1, 0)].substitute(sub).is_zero()
        assert system[(0, 1)].substitute(sub).is_zero()
        d12, d21 = CoefPoly.var(uname((1, 2))), CoefPoly.var(uname((2, 1)))
        c1, c2 = CoefPoly.var(uname((3, 0))), CoefPoly.var(uname((0, 3)))
        assert (e11 - e20).proportional_to(d12 - c1.scale(9))
        assert (e11 - e02).proportional_to(d21 - c2.scale(9))

    def test_pure_square_branch_is_infeasible(self):
        # quadratic part a_1 x_1^2 + a_2 x_2^2 with no mixed term, plus the
        # cubic cross terms: positivity kills it, witness a + d12 + d21 = 0
        spec = PotentialSpec.symbolic(2, [(2, 0), (0, 2), (1, 2), (2, 1)])
        outcome = solve_system(extract_constraints(spec, 5))
        assert outcome.status == "INFEASIBLE"
        names = sorted(outcome.witness.unknowns())
        assert names in (
            [uname((0, 2)), uname((1, 2)), uname((2, 1))],
            [uname((1, 2)), uname((2, 0)), uname((2, 1))],
        )
        expected = sum((CoefPoly.var(nm) for nm in names), CoefPoly())
        assert outcome.witness.proportional_to(expected)


class TestSolveBranches:
    def test_mixed_term_only_gives_segre(self):
        spec = PotentialSpec.symbolic(2, [(1, 1)])
        outcome = solve_system(extract_constraints(spec, 4))
        assert outcome.status == "SOLVED"
        [sol] = outcome.solution_dicts()
        assert sol[uname((1, 1))] == 1
        assert sol[EINSTEIN_NAME] == 4

    def test_full_quadratic_support_n2(self):
        spec = PotentialSpec.symbolic(2, list(monomials_of_degree(2, 2)))
        outcome = solve_system(extract_constraints(spec, 4))
        assert outcome.status == "SOLVED"
        [sol] = outcome.solution_dicts()
        assert sol[uname((2, 0))] == Fraction(1, 4)
        assert sol[uname((0, 2))] == Fraction(1, 4)
        assert sol[uname((1, 1))] == Fraction(1, 2)
        assert sol[EINSTEIN_NAME] == 3

    def test_single_square_is_infeasible(self):
        spec = PotentialSpec.symbolic(2, [(2, 0)])
        assert solve_system(extract_constraints(spec, 4)).status == "INFEASIBLE"

    def test_triple_squares_n3_infeasible(self):
        spec = PotentialSpec.symbolic(3, [(2, 0, 0), (0, 2, 0), (0, 0, 2)])
        assert solve_system(extract_constraints(spec, 4)).status == "INFEASIBLE"

    def test_empty_support_any_n(self):
        for n in (1, 2, 3, 4):
            outcome = solve_system(extract_constraints(cpn_unit(n), 2))
            assert outcome.status == "SOLVED"
            [sol] = outcome.solution_dicts()
            assert sol[EINSTEIN_NAME] == 2 * (n + 1)


class TestEnumeration:
    @staticmethod
    def naive_orbit_count(n, k_max, deg_cap, size):
        monos = [m for m in monomials_up_to(n, deg_cap) if sum(m) >= 2]
        orbits = set()
        for combo in itertools.combinations(monos, size):
            orbit = min(
                tuple(sorted(mi_permute(m, p) for m in combo))
                for p in itertools.permutations(range(n))
            )
            orbits.add(orbit)
        return len(orbits)

    @pytest.mark.parametrize("n,k_max,deg_cap", [(2, 3, 3), (3, 2, 3), (2, 2, 4)])
    def test_matches_naive_orbit_enumeration(self, n, k_max, deg_cap):
        specs = enumerate_supports(n, k_max, deg_cap)
        by_size = {}
        for s in specs:
            by_size[s.codimension] = by_size.get(s.codimension, 0) + 1
        assert by_size.get(0, 0) == 1
        for size in range(1, k_max + 1):
            assert by_size.get(size, 0) == self.naive_orbit_count(n, k_max, deg_cap, size)

    def test_supports_are_canonical_and_unique(self):
        specs = enumerate_supports(3, 3, 3)
        seen = set()
        for s in specs:
            support = tuple(m for m, _ in s.support)
            # the spec stores a canonical orbit representative
            assert frozenset(canonical_support(3, support)) == frozenset(support)
            key = frozenset(support)
            assert key not in seen
            seen.add(key)

    def test_canonical_is_orbit_invariant(self, rng):
        for _ in range(60):
            n = rng.choice((2, 3))
            monos = [m for m in monomials_up_to(n, 3) if sum(m) >= 2]
            support = tuple(rng.sample(monos, rng.randint(1, 3)))
            perm = list(range(n))
            rng.shuffle(perm)
            permuted = tuple(mi_permute(m, perm) for m in support)
            assert canonical_support(n, support) == canonical_support(n, permuted)


class TestClassification:
    def test_unit_fubini_study(self):
        assert classify(cpn_unit(3), Fraction(8)) == "CPn_unit"

    def test_scaled_fubini_study(self, veronese):
        assert classify(veronese, Fraction(3)) == "CPn_scaled(2)"

    def test_product_of_lines_n2(self, segre):
        assert classify(segre, Fraction(4)) == "ProductOfLines"

    def test_product_of_lines_n3(self):
        # (1+x1)(1+x2)(1+x3)
        spec = PotentialSpec(
            3,
            (
                ((0, 1, 1), Fraction(1)),
                ((1, 0, 1), Fraction(1)),
                ((1, 1, 0), Fraction(1)),
                ((1, 1, 1), Fraction(1)),
            ),
        )
        assert classify(spec, Fraction(4)) == "ProductOfLines"

    def test_wrong_model_is_unknown(self, veronese):
        # right potential, wrong constant: must not match any model
        assert classify(veronese, Fraction(1)) == "UNKNOWN"


class TestSweep:
    def test_codim_zero_only(self):
        report = sweep([2], 0)
        assert [e.status for e in report.entries] == ["SOLVED"]
        [sol] = report.entries[0].solutions
        assert sol.lam == 6
        assert sol.tag == "CPn_unit"
        assert sol.certificate == "PASS"

    def test_n2_quadratic_matches_known_models(self):
        report = sweep([2], 3, deg_cap=2)
        tags = sorted(
            sol.tag for e in report.entries if e.status == "SOLVED" for sol in e.solutions
        )
        assert tags == ["CPn_scaled(2)", "CPn_unit", "ProductOfLines"]
        assert report.counts()["UNRESOLVED"] == 0

    def test_lemma_shortcut_high_dimension(self):
        report = sweep([7], 2)
        statuses = sorted(e.status for e in report.entries)
        assert statuses == ["SHORTCUT", "SHORTCUT", "SOLVED"]
        solved = [e for e in report.entries if e.status == "SOLVED"]
        assert solved[0].solutions[0].tag == "CPn_unit"
