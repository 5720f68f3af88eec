import pytest
from conftest import games
from hypothesis import given
from oracles import brute_force_regions

from mugames.games import (
    ADAM,
    EVA,
    GameError,
    GameValidationError,
    ParityGame,
    PGParseError,
    attractor,
    check_strategy,
    dual,
    dump_pg,
    max_priority,
    parse_pg,
    restrict,
    validate,
    zielonka_solve,
)
from mugames.graph import Graph


def loop(priority, owner):
    return ParityGame.build({0: (priority, owner)}, [(0, 0)], 0)


def test_validate_empty_arena():
    g = ParityGame(Graph.from_edges([], []), {}, {}, None)
    with pytest.raises(GameValidationError, match="no initial position"):
        validate(g)


def test_validate_labelled_leaf_with_edge():
    g = ParityGame.build({0: (0, EVA), 1: (0, ADAM)}, [(0, 1)], 0, var_label={0: "X"})
    with pytest.raises(GameValidationError) as info:
        validate(g)
    assert "vertex 0" in info.value.diagnostics[0]


def test_validate_well_formed_and_declared_maximum():
    g = ParityGame.build({0: (2, EVA), 1: (1, ADAM), 2: (0, EVA)}, [(0, 1), (1, 2), (2, 0)], 0)
    validate(g)
    with pytest.raises(GameValidationError, match="exceeds"):
        validate(g, max_priority=1)


@pytest.mark.parametrize("priority, owner, winner", [
    (0, EVA, EVA), (1, EVA, ADAM), (0, ADAM, EVA), (1, ADAM, ADAM)])
def test_self_loops(priority, owner, winner):
    w = zielonka_solve(loop(priority, owner))
    assert w.winner(0) == winner
    assert w.region(winner) == {0}


def test_dead_end_loses_for_owner():
    g = ParityGame.build({0: (0, EVA), 1: (0, ADAM), 2: (0, EVA)}, [(0, 1), (0, 2)], 0)
    w = zielonka_solve(g)
    assert w.eva_region == {0, 1} and w.adam_region == {2}
    assert g.arena.tgt[w.eva_strategy[0]] == 1


def test_labelled_leaves_follow_the_assumption():
    g = ParityGame.build({0: (0, ADAM), 1: (0, EVA)}, [(0, 1)], 0, var_label={1: "L"})
    assert zielonka_solve(g, {"L": "win"}).winner(0) == EVA
    assert zielonka_solve(g, {"L": "lose"}).winner(0) == ADAM
    with pytest.raises(GameError):
        zielonka_solve(g)


def test_attractor_examples():
    g = ParityGame.build({0: (0, EVA), 1: (0, ADAM)}, [(0, 1), (1, 1)], 0)
    assert attractor(g, EVA, set()) == set()
    assert attractor(g, EVA, {0, 1}) == {0, 1}
    assert attractor(g, EVA, {1}) == {0, 1}
    assert attractor(g, ADAM, {1}) == {1, 0}
    h = ParityGame.build({0: (0, ADAM), 1: (0, EVA), 2: (0, EVA)}, [(0, 1), (0, 2)], 0)
    assert attractor(h, EVA, {1}) == {1}


def test_restrict_drops_edges():
    g = ParityGame.build({0: (0, EVA), 1: (3, ADAM)}, [(0, 1), (1, 0), (0, 0)], 0)
    r = restrict(g, {0})
    assert r.vertices == (0,) and r.successors(0) == (0,)
    assert max_priority(g) == 3 and max_priority(r) == 0


@given(games())
def test_zielonka_matches_brute_force(g):
    w = zielonka_solve(g)
    assert (w.eva_region, w.adam_region) == brute_force_regions(g)


@given(games(), games())
def test_regions_partition_and_strategies_win(g, _):
    w = zielonka_solve(g)
    assert w.eva_region | w.adam_region == set(g.vertices)
    assert not w.eva_region & w.adam_region
    for p in (EVA, ADAM):
        assert check_strategy(g, p, w.region(p), w.strategy(p)) == []


@given(games())
def test_raising_even_priority_in_eva_region_keeps_it(g):
    w = zielonka_solve(g)
    for v in sorted(w.eva_region):
        if g.priority[v] % 2 == 0:
            raised = ParityGame(g.arena, g.owner, {**g.priority, v: g.priority[v] + 2},
                                g.initial)
            assert w.eva_region <= zielonka_solve(raised).eva_region


@given(games())
def test_dual_swaps_winners(g):
    w, d = zielonka_solve(g), zielonka_solve(dual(g))
    assert d.eva_region == w.adam_region


def test_check_strategy_detects_losing_choice():
    g = ParityGame.build({0: (0, EVA), 1: (1, EVA)}, [(0, 0), (0, 1), (1, 1)], 0)
    assert check_strategy(g, EVA, {0}, {0: 0}) == []
    assert check_strategy(g, EVA, {0, 1}, {0: 1, 1: 2})


def test_pg_round_trip():
    text = 'parity 3;\nstart 2;\n0 1 0 1,3 "left";\n1 2 1 0;\n2 0 1 0,1;\n3 0 0 "var:X";\n'
    g = parse_pg(text)
    assert g.initial == 2 and g.var_label == {3: "X"} and g.names == {0: "left"}
    assert dump_pg(g) == text


def test_pg_comments_and_first_vertex_is_initial():
    g = parse_pg("# a game\n5 0 1 5;  # loop\n")
    assert g.initial == 5 and dump_pg(g) == "parity 5;\n5 0 1 5;\n"


@pytest.mark.parametrize("text", ["0 0 2 0;", "0 0 0 1,,2;", "parity x;", "0 0;"])
def test_pg_parse_errors(text):
    with pytest.raises(PGParseError):
        parse_pg(text)


def test_pg_unknown_successor_is_validation_error():
    with pytest.raises(GameValidationError):
        parse_pg("0 0 0 7;")
