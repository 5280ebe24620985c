from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sareg.algebra import (
    And,
    Atom,
    InputError,
    Not,
    Or,
    PairTable,
    Polynomial,
    RelationFamily,
    SemiAlgebraicRelation,
    eval_polynomial,
    exact,
    relation_holds,
    symmetrize_ordered_relation,
    symmetry_violations,
    validate_family,
)
from sareg.colorings import build_layered

from strategies import complement_family, overlapping_family, points_strategy, polynomials, rationals, threshold_family

x1, x2 = Polynomial.variables(2)


def unit_distance():
    g = (x1 - x2) ** 2 - 1
    return SemiAlgebraicRelation((g, -g), And((Atom(0), Atom(1))), 4, 1, "unit")


# -- eval_polynomial ----------------------------------------------------------


def test_eval_linear():
    assert eval_polynomial(x1 - x2, (3,), (1,)) == 2


def test_eval_unit_distance_root():
    assert eval_polynomial((x1 - x2) ** 2 - 1, (1,), (2,)) == 0


def test_eval_bilinear_in_r2():
    X = Polynomial.variables(4)
    p = X[0] * X[2] + X[1] * X[3]
    assert eval_polynomial(p, (1, 2), (3, 4)) == 11


def test_eval_dimension_mismatch():
    with pytest.raises(InputError):
        eval_polynomial(x1 - x2, (1, 2), (3,))


def test_floats_rejected():
    with pytest.raises(InputError):
        exact(0.5)
    assert exact("3/6") == Fraction(1, 2)
    assert exact(Fraction(4, 2)) == 2 and isinstance(exact(Fraction(4, 2)), int)


def test_zero_coefficients_dropped_and_degree_cached():
    p = Polynomial(2, {(2, 0): 1, (1, 1): 0, (0, 0): 3})
    assert (1, 1) not in p.terms
    assert p.degree == 2
    assert (x1 - x1).is_zero and (x1 - x1).degree == -1


def test_terms_are_lexicographic():
    p = Polynomial(2, {(0, 2): 1, (2, 0): 1, (1, 1): 1})
    assert list(p.terms) == sorted(p.terms)


@given(polynomials(3), polynomials(3), st.tuples(rationals, rationals, rationals))
def test_eval_is_a_ring_homomorphism(p, q, pt):
    assert (p + q)(pt) == p(pt) + q(pt)
    assert (p * q)(pt) == p(pt) * q(pt)
    assert (p - q)(pt) == p(pt) - q(pt)


@given(polynomials(4), st.tuples(rationals, rationals), st.tuples(rationals, rationals))
def test_substitute_prefix_matches_full_evaluation(p, u, v):
    assert p.substitute_prefix(u)(v) == p(u + v)


@given(polynomials(4), st.tuples(rationals, rationals), st.tuples(rationals, rationals))
def test_swap_halves(p, u, v):
    assert p.swap_halves()(u + v) == p(v + u)


# -- relation_holds -----------------------------------------------------------


def test_unit_distance_holds():
    assert relation_holds(unit_distance(), (1,), (2,))


def test_unit_distance_fails_at_two():
    assert not relation_holds(unit_distance(), (1,), (3,))


def test_gap_relation_with_c_20():
    G, _ = build_layered(2)
    E2 = G.family.relations[1]
    assert relation_holds(E2, (2,), (21,))  # 10 < 19 < 40
    assert not relation_holds(E2, (1,), (2,))


def test_atom_sign_convention_zero_satisfies():
    E = SemiAlgebraicRelation((x1 - x2,), Atom(0), 1, 1)
    assert E.holds((3,), (3,))
    assert not E.holds((2,), (3,))


def test_relation_validation():
    with pytest.raises(InputError):
        SemiAlgebraicRelation((x1, x2), Atom(0), 1, 1)  # s > t
    with pytest.raises(InputError):
        SemiAlgebraicRelation((x1**3,), Atom(0), 2, 1)  # degree > t
    with pytest.raises(InputError):
        SemiAlgebraicRelation((x1,), Atom(1), 1, 1)  # atom out of range
    with pytest.raises(InputError):
        SemiAlgebraicRelation((Polynomial.var(0, 4),), Atom(0), 1, 1)  # wrong arity


def test_relation_dimension_mismatch():
    with pytest.raises(InputError):
        unit_distance().holds((1, 2), (3, 4))


@given(points_strategy(1, max_size=6))
def test_module_relations_are_symmetric(V):
    G, _ = build_layered(3)
    rels = list(G.family.relations) + [unit_distance()]
    for E in rels:
        assert symmetry_violations(E, V) == []


def test_structural_symmetry():
    assert unit_distance().structurally_symmetric()
    assert not SemiAlgebraicRelation((x1 - 2 * x2,), Atom(0), 1, 1).structurally_symmetric()


# -- formulas -----------------------------------------------------------------


@given(st.lists(st.sampled_from([-1, 0, 1]), min_size=3, max_size=3))
def test_formula_semantics(signs):
    a, b, c = (s >= 0 for s in signs)
    f = Or((And((Atom(0), Not(Atom(1)))), Atom(2)))
    assert f.evaluate(signs) == ((a and not b) or c)


# -- symmetrize_ordered_relation ---------------------------------------------


def before_by_one():
    # "v - u >= 1" on the ordered pair (u, v)
    return SemiAlgebraicRelation((x2 - x1 - 1,), Atom(0), 1, 1, "gap")


def test_lift_holds_in_both_orders():
    V = [(5,), (7,)]
    W, L = symmetrize_ordered_relation(before_by_one(), V)
    assert W == ((5, 1), (7, 2))
    assert L.holds(W[0], W[1]) and L.holds(W[1], W[0])


def test_lift_single_point():
    W, L = symmetrize_ordered_relation(before_by_one(), [(3,)])
    assert len(W) == 1 and symmetry_violations(L, W) == []


def test_lift_respects_order():
    W, L = symmetrize_ordered_relation(before_by_one(), [(7,), (5,)])
    assert not L.holds(W[0], W[1])
    assert not L.holds(W[1], W[0])


def test_lift_duplicate_ranks_rejected():
    with pytest.raises(InputError):
        symmetrize_ordered_relation(before_by_one(), [(1,), (2,)], ranks=[1, 1])


@given(points_strategy(1, max_size=6), polynomials(2, max_degree=2, max_terms=3))
def test_lift_agrees_with_ordered_relation(V, g):
    E = SemiAlgebraicRelation((g,), Atom(0), 2, 1)
    W, L = symmetrize_ordered_relation(E, V)
    assert L.complexity <= 2 * E.complexity + 2
    assert L.s <= L.complexity and all(p.degree <= L.complexity for p in L.polys)
    for i, j in permutations(range(len(V)), 2):
        first, second = min(i, j), max(i, j)
        assert L.holds(W[i], W[j]) == E.holds(V[first], V[second])


# -- validate_family ---------------------------------------------------------


@given(points_strategy(1, max_size=7))
def test_complement_family_covers(V):
    assert validate_family(complement_family(unit_distance()), V).covering_violations == []


def test_unit_distance_alone_does_not_cover():
    F = RelationFamily((unit_distance(),))
    rep = validate_family(F, [(0,), (5,)])
    assert rep.covering_violations == [(0, 1)]


def test_layered_family_on_v2():
    G, _ = build_layered(2)
    rep = validate_family(G.family, G.points)
    assert rep.ok


def _independent_report(F, V):
    cov, dis = [], []
    for i, j in combinations(range(len(V)), 2):
        hits = [E.formula.evaluate([1 if p(V[i] + V[j]) >= 0 else -1 for p in E.polys]) for E in F.relations]
        if not any(hits):
            cov.append((i, j))
        if sum(hits) > 1:
            dis.append((i, j))
    return cov, dis


@given(points_strategy(2, max_size=7), st.sampled_from(["bands", "overlap"]))
def test_validate_family_matches_direct_loop(V, kind):
    F = threshold_family(2, [2, 9]) if kind == "bands" else overlapping_family(2)
    rep = validate_family(F, V)
    cov, dis = _independent_report(F, V)
    assert rep.covering_violations == cov
    assert rep.disjointness_violations == dis


def test_pair_table_is_symmetric():
    V = [(0,), (1,), (3,), (4,)]
    T = PairTable(V, overlapping_family(1), check_symmetry=True)
    assert T.asymmetric == []
    assert all(T[i, j] == T[j, i] for i in range(4) for j in range(4))
