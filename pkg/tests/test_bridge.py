from conftest import games, terms
from hypothesis import given

from mugames.bridge import game_to_system, game_to_term, simplify, term_to_game
from mugames.games import ADAM, EVA, ParityGame, zielonka_solve
from mugames.semantics import evaluate
from mugames.terms import MU, NU, Coprod, Mu, Nu, Prod, Var, alpha_eq, free_vars, subterms

NAT = ParityGame.build({0: (1, EVA), 1: (0, ADAM)}, [(0, 1), (0, 0)], 0)


def test_system_for_the_natural_numbers_game():
    s = game_to_system(NAT)
    e, leaf = s["X0"], s["X1"]
    assert (e.kind, e.priority, e.rhs) == (MU, 1, Coprod((Var("X1"), Var("X0"))))
    assert (leaf.kind, leaf.priority, leaf.rhs) == (NU, 0, Prod())


def test_dead_ends_become_constants():
    adam = ParityGame.build({0: (4, ADAM)}, [], 0)
    eva = ParityGame.build({0: (2, EVA)}, [], 0)
    a, e = game_to_system(adam)["X0"], game_to_system(eva)["X0"]
    assert (a.kind, a.priority, a.rhs) == (NU, 0, Prod())
    assert (e.kind, e.priority, e.rhs) == (MU, 1, Coprod())


def test_leaf_labels_become_parameters_and_names_avoid_them():
    g = ParityGame.build({0: (0, ADAM), 1: (0, EVA)}, [(0, 1)], 0, var_label={1: "X0"})
    s = game_to_system(g)
    assert s.params == ("X0",)
    assert s.equations[0].var != "X0"
    assert game_to_term(g) == Nu(s.equations[0].var, Prod((Var("X0"),)))


def test_game_to_term_self_loops():
    eva = ParityGame.build({0: (1, EVA)}, [(0, 0)], 0)
    adam = ParityGame.build({0: (0, ADAM)}, [(0, 0)], 0)
    assert alpha_eq(game_to_term(eva), Mu("X", Coprod((Var("X"),))))
    assert alpha_eq(game_to_term(adam), Nu("X", Prod((Var("X"),))))
    assert evaluate(game_to_term(eva)).cardinality == 0
    assert evaluate(game_to_term(adam)).cardinality == 1


def test_natural_numbers_game_term():
    t = game_to_term(NAT)
    assert evaluate(t).verdict == "infinite"
    assert alpha_eq(simplify(t), Mu("X", Coprod((Prod(), Var("X")))))


def test_unreachable_positions_are_dropped():
    g = ParityGame.build({0: (0, ADAM), 1: (1, EVA)}, [(1, 0), (1, 1)], 0)
    assert game_to_term(g) == Nu("X0", Prod())


def test_term_to_game_unit():
    g = term_to_game(Prod())
    assert g.vertices == (0,) and g.owner[0] == ADAM and not g.moves(0)


def test_term_to_game_binary_stream():
    g = term_to_game(Nu("X", Prod((Var("X"), Var("X")))))
    assert g.vertices == (0,)
    assert g.owner[0] == ADAM and g.successors(0) == (0, 0)
    assert g.priority[0] % 2 == 0
    assert zielonka_solve(g).winner(0) == EVA


def test_term_to_game_natural_numbers():
    g = term_to_game(Mu("X", Coprod((Prod(), Var("X")))))
    assert g.owner[0] == EVA and g.priority[0] % 2 == 1
    assert g.successors(0) == (1, 0)
    assert g.owner[1] == ADAM and not g.moves(1)


def test_free_variables_become_leaves():
    g = term_to_game(Prod((Var("A"), Mu("X", Var("B")))))
    assert sorted(g.var_label.values()) == ["A", "B"]
    assert zielonka_solve(g, {"A": "win", "B": "lose"}).winner(0) == ADAM


def test_nested_binders_get_increasing_priorities():
    t = Nu("X", Mu("Y", Coprod((Var("X"), Nu("Z", Prod((Var("Y"), Var("Z"))))))))
    g = term_to_game(t)
    prio = {g.names[v]: g.priority[v] for v in g.vertices}
    assert prio["root.0.0.1"] == 0
    assert prio["root.0"] == 1
    assert prio["root"] == 2


def _binder_priorities_ok(t) -> bool:
    g = term_to_game(t)
    by_pos = {g.names[v]: g.priority[v] for v in g.vertices}

    def walk(t, pos):
        match t:
            case Var():
                return -1
            case Prod(items) | Coprod(items):
                return max((walk(s, f"{pos}.{i}") for i, s in enumerate(items)), default=-1)
            case Mu(_, b) | Nu(_, b):
                if isinstance(b, (Prod, Coprod)):
                    inner = max((walk(s, f"{pos}.0.{i}") for i, s in enumerate(b.items)), default=-1)
                else:
                    inner = walk(b, f"{pos}.0")
                p = by_pos[pos]
                assert p > inner and p % 2 == (1 if isinstance(t, Mu) else 0)
                return p

    walk(t, "root")
    return True


@given(terms(params=("P",)))
def test_term_to_game_priority_discipline(t):
    assert _binder_priorities_ok(t)


@given(games(max_vertices=6))
def test_game_to_system_parity_discipline(g):
    for e in game_to_system(g).equations:
        assert (e.kind == NU) == (e.priority % 2 == 0)


@given(terms())
def test_round_trip_preserves_cardinality(t):
    a = evaluate(t)
    b = evaluate(game_to_term(term_to_game(t)))
    assert (a.verdict, a.cardinality) == (b.verdict, b.cardinality)


@given(games(max_vertices=7))
def test_winner_iff_nonempty(g):
    v = evaluate(game_to_term(g))
    assert (v.cardinality != 0) == (zielonka_solve(g).winner(g.initial) == EVA)


def test_simplify_drops_only_vacuous_binders():
    t = Mu("X", Coprod((Nu("Y", Prod()), Var("X"))))
    assert simplify(t) == Mu("X", Coprod((Prod(), Var("X"))))
    assert free_vars(simplify(t)) == ()
    assert not any(isinstance(s, Nu) for s in subterms(simplify(t)))
