from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from dynred.projective import Mobius, ProjPoint
from dynred.ratmap import RatMap, resultant_of_forms

settings.register_profile(
    "default", derandomize=True, deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small = st.integers(-9, 9)
rationals = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 12))
points = st.one_of(st.just(ProjPoint(1, 0)), rationals.map(ProjPoint.from_value))


@st.composite
def morphisms(draw, degree=None, height=9):
    d = draw(st.sampled_from([2, 3])) if degree is None else degree
    coeffs = st.lists(st.integers(-height, height), min_size=d + 1, max_size=d + 1)
    F = draw(coeffs)
    G = draw(coeffs)
    if resultant_of_forms(F, G) == 0:
        # a fixed nondegenerate fallback keeps the strategy total
        F, G = [1] + [0] * d, [0] * d + [1]
    return RatMap.normalized(F, G)


@st.composite
def mobius_maps(draw, height=7):
    m = draw(st.lists(st.integers(-height, height), min_size=4, max_size=4))
    if m[0] * m[3] - m[1] * m[2] == 0:
        m = [m[0] + 1, m[1], m[2], m[3] + 1] if (m[0] + 1) * (m[3] + 1) != m[1] * m[2] else [1, 0, 0, 1]
    return Mobius.normalized(*m)
