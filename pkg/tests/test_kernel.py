import itertools

import pytest

from hornplay.kernel import (
    Atom,
    Compound,
    Variable,
    alpha_equivalent,
    apply_subst,
    canonicalize,
    standardize_apart,
    term_depth,
    term_size,
    unify,
    variables,
)
from hornplay.theory import Clause, parse_goal, parse_term

X, Y, Z = Variable("X"), Variable("Y"), Variable("Z")
z = Compound("z")


def s(term):
    return Compound("s", (term,))


def test_unify_variable():
    assert unify(X, s(z)) == {"X": s(z)}


def test_unify_decomposes_atoms():
    assert unify(parse_goal("even(s(Y))"), parse_goal("even(s(z))")) == {"Y": z}


def test_unify_occurs_check():
    assert unify(X, s(X)) is None


def test_unify_clash():
    assert unify(parse_goal("even(z)"), parse_goal("even(s(z))")) is None
    assert unify(parse_goal("even(z)"), parse_goal("odd(z)")) is None
    assert unify(Atom("even", (z,)), Compound("even", (z,))) is None


def test_unify_binds_first_argument_variable():
    assert unify(X, Y) == {"X": Y}
    assert unify(Y, X) == {"Y": X}


def test_unify_result_is_idempotent():
    subst = unify(parse_goal("p(X, Y, s(Y))"), parse_goal("p(Y, s(Z), W)"))
    assert subst is not None
    for value in subst.values():
        assert not set(variables(value)) & set(subst)


def test_unify_starting_substitution():
    assert unify(X, Y, {"Y": z}) == {"Y": z, "X": z}
    assert unify(X, s(z), {"X": z}) is None


def test_unify_renamings_give_variable_substitution():
    left = parse_goal("plus(s(A), B, s(C))")
    right = parse_goal("plus(s(D), E, s(F))")
    subst = unify(left, right)
    assert all(isinstance(value, Variable) for value in subst.values())


def test_apply_subst_identity():
    assert apply_subst({}, s(X)) == s(X)


def test_apply_subst_single():
    assert apply_subst({"X": z}, s(X)) == s(z)


def test_apply_subst_simultaneous():
    term = Compound("f", (X, Y))
    assert apply_subst({"X": Y, "Y": z}, term) == Compound("f", (Y, z))


def test_standardize_apart_renames():
    clause = Clause(1, parse_goal("even(s(s(X)))"), (parse_goal("even(X)"),))
    renamed = standardize_apart(clause, 7)
    assert renamed.head == parse_goal("even(s(s(_G7)))")
    assert renamed.body == (parse_goal("even(_G7)"),)
    assert renamed.id == 1


def test_standardize_apart_positions():
    clause = Clause(
        0, parse_goal("plus(s(X), Y, s(Z))"), (parse_goal("plus(X, Y, Z)"),)
    )
    renamed = standardize_apart(clause, 3)
    assert renamed.head == parse_goal("plus(s(_G3), _G3_1, s(_G3_2))")


def test_standardize_apart_ground_clause():
    clause = Clause(0, parse_goal("even(z)"))
    assert standardize_apart(clause, 4) == clause


def test_standardize_apart_disjoint():
    clause = Clause(1, parse_goal("even(s(s(X)))"), (parse_goal("even(X)"),))
    first = standardize_apart(clause, 1)
    second = standardize_apart(clause, 2)
    assert not set(variables(first.head)) & set(variables(second.head))


def test_canonicalize():
    assert canonicalize(parse_goal("even(B)")) == parse_goal("even(V0)")
    assert canonicalize(parse_goal("plus(Y, X, Y)")) == parse_goal("plus(V0, V1, V0)")
    assert canonicalize(parse_goal("even(s(s(z)))")) == parse_goal("even(s(s(z)))")


def test_canonicalize_idempotent():
    atom = parse_goal("plus(V1, s(V0), Q)")
    assert canonicalize(canonicalize(atom)) == canonicalize(atom)
    assert canonicalize(atom) == parse_goal("plus(V0, s(V1), V2)")


def test_alpha_equivalent():
    assert alpha_equivalent(parse_goal("p(X, Y, X)"), parse_goal("p(A, B, A)"))
    assert not alpha_equivalent(parse_goal("p(X, Y, X)"), parse_goal("p(A, A, A)"))


def test_term_size_and_depth():
    assert term_size(parse_goal("even(s(s(X)))")) == 4
    assert term_size(parse_goal("plus(X, Y, X)")) == 4
    assert term_depth(parse_term("s(s(z))")) == 3
    assert term_depth(X) == 1


def _small_terms(depth):
    """Terms over the constant a, unary f, binary g and variables X, Y."""
    if depth == 1:
        return [X, Y, Compound("a")]
    smaller = _small_terms(depth - 1)
    terms = list(smaller)
    terms.extend(Compound("f", (t,)) for t in smaller)
    terms.extend(Compound("g", (t, u)) for t in smaller[:4] for u in smaller[:4])
    return list(dict.fromkeys(terms))


def _substitutions():
    ranges = _small_terms(2)
    for x, y in itertools.product([None] + ranges, repeat=2):
        subst = {}
        if x is not None:
            subst["X"] = x
        if y is not None:
            subst["Y"] = y
        yield subst


@pytest.mark.parametrize("left", _small_terms(2))
def test_unify_is_most_general(left):
    substitutions = list(_substitutions())
    for right in _small_terms(2):
        mgu = unify(left, right)
        unifiers = [
            subst
            for subst in substitutions
            if apply_subst(subst, left) == apply_subst(subst, right)
        ]
        if mgu is None:
            assert unifiers == []
            continue
        assert apply_subst(mgu, left) == apply_subst(mgu, right)
        for unifier in unifiers:
            # every unifier factors through the mgu
            for name in ("X", "Y"):
                variable = Variable(name)
                assert apply_subst(unifier, apply_subst(mgu, variable)) == apply_subst(
                    unifier, variable
                )
