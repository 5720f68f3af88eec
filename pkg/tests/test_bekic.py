import random

import pytest

from mugames.bekic import (
    ShapeError,
    bekic_nest,
    gaussian_eliminate,
    pairing_backward,
    pairing_forward,
)
from mugames.bridge import simplify
from mugames.finiteness import INFINITE
from mugames.generators import random_system, random_term
from mugames.semantics import analyse, comparison_maps, evaluate, simultaneous_fixpoint
from mugames.terms import (
    MU,
    NU,
    Coprod,
    Equation,
    EquationSystem,
    Mu,
    Nu,
    Prod,
    SystemError_,
    Var,
    alpha_eq,
    free_vars,
    parse_system,
    substitute,
)

ONE = Prod()


def system(*eqs, params=()):
    return EquationSystem(tuple(eqs), params)


def test_bekic_nest_two_equations():
    s = system(Equation("X", MU, 1, Coprod((ONE, Var("Y")))), Equation("Y", MU, 1, Var("X")))
    sol = bekic_nest(s)
    assert sol["Y"] == Mu("Y", Mu("X", Coprod((ONE, Var("Y")))))
    assert sol["X"] == Mu("X", Coprod((ONE, Mu("Y", Mu("X1", Coprod((ONE, Var("Y"))))))))


def test_bekic_nest_independent_second_equation():
    g = Coprod((ONE, Var("Y")))
    sol = bekic_nest(system(Equation("X", MU, 1, Var("Y")), Equation("Y", MU, 1, g)))
    assert alpha_eq(sol["Y"], Mu("Y", g))


def test_bekic_nest_mutual_identity_is_empty():
    sol = bekic_nest(system(Equation("X", MU, 1, Var("Y")), Equation("Y", MU, 1, Var("X"))))
    assert alpha_eq(sol["Y"], Mu("Y", Mu("X", Var("Y"))))
    for v in "XY":
        # Equal to the identity's least fixed point once vacuous binders go.
        assert alpha_eq(simplify(sol[v]), Mu("Y", Var("Y")))
        assert evaluate(sol[v]).cardinality == 0


def test_bekic_nest_rejects_other_shapes():
    with pytest.raises(ShapeError):
        bekic_nest(system(Equation("X", MU, 1, ONE)))
    with pytest.raises(ShapeError):
        bekic_nest(system(Equation("X", MU, 1, ONE), Equation("Y", NU, 0, ONE)))


def test_gaussian_single_equation():
    t = Coprod((ONE, Var("X")))
    assert gaussian_eliminate(system(Equation("X", MU, 1, t)))["X"] == Mu("X", t)


def test_gaussian_agrees_with_bekic_nest():
    s = system(Equation("X", MU, 1, Coprod((ONE, Var("Y")))),
               Equation("Y", MU, 1, Prod((Var("X"), Var("P")))), params=("P",))
    a, b = gaussian_eliminate(s), bekic_nest(s)
    for v in "XY":
        assert alpha_eq(a[v], b[v])


def test_gaussian_mixed_system():
    s = parse_system("X =nu[2] (prod (var Y) (var Y))\nY =mu[1] (sum (var X) (var X))\n")
    sol = gaussian_eliminate(s)
    inner = Mu("Y", Coprod((Var("X"), Var("X"))))
    assert alpha_eq(sol["X"], Nu("X", Prod((inner, inner))))
    assert free_vars(sol["Y"]) == ()
    # Eva picks one of two branches forever: uncountably many strategies.
    assert evaluate(sol["X"]).verdict == "infinite"


def test_highest_priority_ends_outermost():
    s = parse_system("A =mu[3] (sum (var B) (prod))\nB =nu[0] (prod (var A))\n")
    sol = gaussian_eliminate(s)
    assert isinstance(sol["A"], Mu) and isinstance(sol["A"].body.items[0], Nu)


def test_dangling_variable_rejected():
    with pytest.raises(SystemError_):
        parse_system("X =mu[1] (var Q)\n")


def test_pairing_forward_examples():
    f = Prod((Var("Y"), Var("Y")))
    g = Coprod((ONE, Var("X")))
    sol = pairing_forward(f, g)
    assert sol["Y"] == Mu("Y", Coprod((ONE, Prod((Var("Y"), Var("Y"))))))
    assert sol["X"] == substitute(f, "Y", sol["Y"])
    assert pairing_forward(ONE, g)["Y"] == Mu("Y", Coprod((ONE, ONE)))
    dead = pairing_forward(Var("Y"), Var("X"))
    assert alpha_eq(dead["Y"], Mu("Y", Var("Y")))
    assert evaluate(dead["Y"]).cardinality == 0


def test_pairing_rejects_recursive_first_component():
    with pytest.raises(ShapeError):
        pairing_forward(Var("X"), Var("Y"))


def test_pairing_backward_examples():
    const = Coprod((ONE, ONE))
    t = pairing_backward(ONE, const, pairing_forward(ONE, const))
    assert t == Mu("Y", const)
    assert evaluate(t).cardinality == evaluate(const).cardinality == 2
    f = Coprod((ONE, Var("Y")))
    nat = pairing_backward(f, Var("X"), pairing_forward(f, Var("X")))
    assert alpha_eq(nat, Mu("Y", Coprod((ONE, Var("Y")))))
    assert evaluate(nat).verdict == "infinite"


def test_pairing_round_trip_on_random_pairs():
    rng = random.Random(5)
    for _ in range(40):
        f = random_term(rng, 3, ("Y", "P"))
        g = random_term(rng, 3, ("X", "Y", "P"))
        nested = pairing_forward(f, g)
        assert alpha_eq(pairing_backward(f, g, nested), nested["Y"])


def _finite_instance(rng, kind):
    while True:
        params = ("P", "Q")[: rng.randint(0, 2)]
        s = random_system(rng, kind, rng.randint(2, 3), params)
        env = {p: rng.randint(0, 3) for p in params}
        sol = gaussian_eliminate(s)
        if all(analyse(t, env).verdict != INFINITE for _, t in sol.solutions):
            return s, sol, env


@pytest.mark.parametrize("kind", [MU, NU])
def test_nested_solution_matches_simultaneous_fixed_point(kind):
    rng = random.Random(11)
    for _ in range(25):
        s, sol, env = _finite_instance(rng, kind)
        bodies = {e.var: e.rhs for e in s.equations}
        ref = simultaneous_fixpoint(bodies, kind, env)
        maps = comparison_maps(bodies, kind, sol.as_dict(), env)
        for x, t in sol.solutions:
            assert evaluate(t, env).cardinality == len(ref[x])
            assert maps[x].is_bijection()


def test_tie_break_order_does_not_change_cardinalities():
    rng = random.Random(3)
    for _ in range(20):
        s, sol, env = _finite_instance(rng, MU)
        rev = gaussian_eliminate(s, tie_break=lambda i: -i)
        for x, t in sol.solutions:
            assert evaluate(t, env).cardinality == evaluate(rev[x], env).cardinality
