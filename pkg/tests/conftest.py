import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mugames.games import ADAM, EVA, ParityGame
from mugames.terms import Coprod, Mu, Nu, Prod, Var

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def games(draw, max_vertices=6, max_priority=4, max_degree=3, acyclic=False, dead_ends=True):
    n = draw(st.integers(1, max_vertices))
    vertices = {
        v: (draw(st.integers(0, max_priority)), draw(st.sampled_from((EVA, ADAM))))
        for v in range(n)
    }
    moves = []
    for v in range(n):
        lo = v + 1 if acyclic else 0
        if lo >= n:
            continue
        k = draw(st.integers(0 if dead_ends else 1, max_degree))
        moves += [(v, draw(st.integers(lo, n - 1))) for _ in range(k)]
    return ParityGame.build(vertices, moves, 0)


def terms(params=(), max_depth=4):
    """Terms over ``params`` whose binders are named apart along paths."""

    def build(depth, bound):
        names = tuple(params) + bound
        leaves = [st.just(Prod()), st.just(Coprod())]
        if names:
            leaves.append(st.sampled_from(names).map(Var))
        leaf = st.one_of(*leaves)
        if depth == 0:
            return leaf
        x = f"X{len(bound)}"
        kids = st.lists(st.deferred(lambda: build(depth - 1, bound)), max_size=3).map(tuple)
        return st.one_of(
            leaf,
            kids.map(Prod),
            kids.map(Coprod),
            build(depth - 1, bound + (x,)).map(lambda b: Mu(x, b)),
            build(depth - 1, bound + (x,)).map(lambda b: Nu(x, b)),
        )

    return build(max_depth, ())
