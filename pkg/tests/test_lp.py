from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gamemistakes.lp import (Constraint, LinearProgram, Relation, Sense, Simplex, Status,
                             audit, check_certificate, solve)
from gamemistakes.matrix import value_program
from gamemistakes.zoo import rps
from oracles import brute_force_lp


def test_simple_optimal():
    lp = LinearProgram((1, 0), [((1, 1), "=", 1)])
    sol = solve(lp)
    assert sol.status is Status.OPTIMAL and sol.objective_value == 1
    assert check_certificate(lp, sol) == []


def test_infeasible():
    lp = LinearProgram((1,), [((1,), "<=", -1)])
    assert solve(lp).status is Status.INFEASIBLE


def test_unbounded():
    lp = LinearProgram((1, 1), [((1, -1), "<=", 1)])
    assert solve(lp).status is Status.UNBOUNDED


def test_rps_value_lp():
    lp = value_program(rps().payoffs)
    sol = solve(lp)
    assert sol.objective_value == 0
    assert check_certificate(lp, sol) == []


def test_free_variable_and_minimize():
    # minimize |shift| style: min y s.t. y >= x - 3, y >= 3 - x, x = 1, x free
    lp = LinearProgram((0, 1), [((-1, 1), ">=", -3), ((1, 1), ">=", 3), ((1, 0), "=", 1)],
                       free=(True, False), sense=Sense.MINIMIZE)
    sol = solve(lp)
    assert sol.objective_value == 2 and sol.primal == (1, 2)
    assert check_certificate(lp, sol) == []


def test_negative_free_solution():
    lp = LinearProgram((1,), [((1,), "<=", -5)], free=(True,))
    sol = solve(lp)
    assert sol.primal == (-5,)
    assert check_certificate(lp, sol) == []


def test_validation():
    with pytest.raises(ValueError):
        LinearProgram(())
    with pytest.raises(ValueError):
        LinearProgram((1, 2), [((1,), "<=", 1)])
    with pytest.raises(ValueError):
        LinearProgram((1,), free=(True, False))
    with pytest.raises(ValueError):
        Simplex(LinearProgram((1,)), rule="steepest")


def test_certificate_checker_rejects_bad_duals():
    lp = LinearProgram((1, 0), [((1, 1), "=", 1)])
    sol = solve(lp)
    forged = type(sol)(sol.status, sol.primal, sol.objective_value, (0,), sol.pivots)
    assert check_certificate(lp, forged)
    wrong = type(sol)(sol.status, (0, 1), sol.objective_value, sol.duals, sol.pivots)
    assert check_certificate(lp, wrong)


def test_degenerate_cycling_example():
    # Beale's classic cycling example for the textbook largest-coefficient rule.
    c = (Fraction(3, 4), -150, Fraction(1, 50), -6)
    rows = [((Fraction(1, 4), -60, Fraction(-1, 25), 9), "<=", 0),
            ((Fraction(1, 2), -90, Fraction(-1, 50), 3), "<=", 0),
            ((0, 0, 1, 0), "<=", 1)]
    lp = LinearProgram(c, rows)
    for rule in ("bland", "dantzig"):
        for crash in (True, False):
            sol = solve(lp, rule=rule, crash=crash)
            assert sol.objective_value == Fraction(1, 20)
            assert check_certificate(lp, sol) == []


small = st.integers(-3, 3)


@st.composite
def bounded_lps(draw):
    n = draw(st.integers(1, 4))
    k = draw(st.integers(0, 4))
    rows = [(tuple(draw(small) for _ in range(n)), draw(st.sampled_from(["<=", "=", ">="])),
             draw(small)) for _ in range(k)]
    rows.append(((1,) * n, "<=", draw(st.integers(0, 6))))  # keeps the region bounded
    objective = tuple(draw(small) for _ in range(n))
    sense = draw(st.sampled_from([Sense.MAXIMIZE, Sense.MINIMIZE]))
    return LinearProgram(objective, rows, sense=sense)


@settings(max_examples=200, deadline=None)
@given(bounded_lps(), st.sampled_from(["bland", "dantzig"]), st.booleans())
def test_matches_vertex_enumeration(lp, rule, crash):
    expected = brute_force_lp(lp.objective,
                              [(c.coefficients, c.relation.value, c.rhs) for c in lp.constraints],
                              maximize=lp.sense is Sense.MAXIMIZE)
    sol = solve(lp, rule=rule, crash=crash)
    if expected is None:
        assert sol.status is Status.INFEASIBLE
    else:
        assert sol.status is Status.OPTIMAL
        assert sol.objective_value == expected
        assert check_certificate(lp, sol) == []


@settings(max_examples=100, deadline=None)
@given(bounded_lps(), st.lists(st.tuples(small, small, small, small), min_size=1, max_size=3))
def test_pinned_sessions(lp, objectives):
    """Successive pinned optima equal brute force on the literal pinned program."""
    s = Simplex(lp)
    first = s.optimize()
    if not first.optimal:
        return
    s.pin()
    for obj in objectives:
        obj = obj[:lp.num_variables]
        sol = s.optimize(obj)
        literal = s.program(obj)
        expected = brute_force_lp(obj, [(c.coefficients, c.relation.value, c.rhs)
                                        for c in literal.constraints],
                                  maximize=literal.sense is Sense.MAXIMIZE)
        assert sol.objective_value == expected
        assert check_certificate(literal, sol) == []
        s.pin()


def test_audit_collects_every_solve():
    lp = LinearProgram((1, 0), [((1, 1), "=", 1)])
    with audit() as log:
        s = Simplex(lp)
        s.optimize()
        s.pin()
        s.optimize((0, 1))
    assert len(log) == 2
    assert all(check_certificate(p, sol) == [] for p, sol in log)
    assert len(log[1][0].constraints) == 2
    solve(lp)
    assert len(log) == 2


def test_dump_and_constraint_types():
    lp = LinearProgram((1,), [Constraint((1,), Relation.LE, 2)])
    s = Simplex(lp)
    s.optimize()
    assert "rhs" in s.dump()
    with pytest.raises(RuntimeError):
        Simplex(lp).pin()
