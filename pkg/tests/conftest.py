import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "laws",
    max_examples=200,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("laws")

from ecsolve.algebra import RATIONAL, BiSeries, PPoly, PRatFunc, Q  # noqa: E402

small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.builds(lambda p, q: Q(p, q), st.integers(-9, 9), st.integers(1, 5))
ppolys = st.lists(rationals, min_size=0, max_size=4).map(PPoly)
nonzero_ppolys = ppolys.filter(lambda p: not p.is_zero())
pratfuncs = st.builds(PRatFunc, ppolys, nonzero_ppolys)
nonzero_pratfuncs = pratfuncs.filter(bool)


def biseries(kind=RATIONAL, L=3, S=3, scalars=rationals):
    keys = st.tuples(st.integers(0, L), st.integers(0, S))
    return st.dictionaries(keys, scalars, max_size=6).map(lambda c: BiSeries(kind, L, S, c))
