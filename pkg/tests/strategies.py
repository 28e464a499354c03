"""Hypothesis strategies for small instances and FD sets."""

from hypothesis import strategies as st

from fdrepair.fds import FD
from fdrepair.relation import VInstance


@st.composite
def instances(draw, min_width=2, max_width=5, max_tuples=10, max_domain=3):
    width = draw(st.integers(min_width, max_width))
    domain = draw(st.integers(1, max_domain))
    n = draw(st.integers(0, max_tuples))
    cell = st.integers(0, domain - 1).map(str)
    rows = draw(st.lists(st.tuples(*[cell] * width), min_size=n, max_size=n))
    return VInstance.from_rows("ABCDEFGH"[:width], rows)


@st.composite
def fd_sets(draw, width, max_fds=3):
    out = []
    for _ in range(draw(st.integers(1, max_fds))):
        rhs = draw(st.integers(0, width - 1))
        others = [a for a in range(width) if a != rhs]
        lhs = draw(st.sets(st.sampled_from(others), min_size=1, max_size=min(2, len(others))))
        out.append(FD(frozenset(lhs), rhs))
    return tuple(out)


@st.composite
def instance_and_fds(draw, **kw):
    inst = draw(instances(**kw))
    return inst, draw(fd_sets(inst.width))
