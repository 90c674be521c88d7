import math

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ribbonforge.diagram import Fold, KnotDiagram

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def convex_polygons(draw, min_n=3, max_n=9, obtuse=False):
    """Counterclockwise convex polygons inscribed in a random ellipse."""
    n = draw(st.integers(min_n, max_n))
    if obtuse:
        # regular polygon with jittered vertex angles keeps every angle >= pi/2
        jitter = draw(st.lists(st.floats(-0.15, 0.15), min_size=n, max_size=n))
        base = 2 * math.pi / n
        jitter = [j * base for j in jitter]
        thetas = np.cumsum([0.0] + [base + j for j in jitter[:-1]])
        thetas *= 2 * math.pi / (thetas[-1] + base + jitter[-1])
        a = b = 1.0
    else:
        gaps = draw(st.lists(st.floats(0.15, 1.0), min_size=n, max_size=n))
        gaps = np.array(gaps) / sum(gaps) * 2 * math.pi
        if gaps.max() >= math.pi - 0.05:
            gaps = np.full(n, 2 * math.pi / n)
        thetas = np.concatenate([[0.0], np.cumsum(gaps[:-1])])
        a = draw(st.floats(0.5, 2.0))
        b = draw(st.floats(0.5, 2.0))
    rot = draw(st.floats(0, 2 * math.pi))
    pts = [(a * math.cos(t + rot), b * math.sin(t + rot)) for t in thetas]
    return KnotDiagram(tuple(pts))


def foldings(n):
    return st.lists(st.sampled_from([Fold.UNDER, Fold.OVER]), min_size=n, max_size=n).map(tuple)


@st.composite
def convex_with_folding(draw, **kw):
    d = draw(convex_polygons(**kw))
    return d, draw(foldings(d.n))
