import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from patstd.syntax import Abs, App, Const, PApp, PConst, PVar, Var

settings.register_profile("default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=2000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

VARS = ("x", "y", "z")
CONSTS = ("A", "B", "C")

pvars = st.sampled_from(VARS).map(PVar)
pconsts = st.sampled_from(CONSTS).map(PConst)


def _data_patterns():
    return st.recursive(pconsts, lambda inner: st.builds(PApp, inner, st.one_of(pvars, inner)), max_leaves=4)


data_patterns = _data_patterns()
patterns = st.one_of(pvars, data_patterns)

atoms = st.one_of(st.sampled_from(VARS).map(Var), st.sampled_from(CONSTS).map(Const))
terms = st.recursive(
    atoms,
    lambda inner: st.one_of(st.builds(Abs, patterns, inner), st.builds(App, inner, inner)),
    max_leaves=7,
)


def _data_terms():
    return st.recursive(
        st.sampled_from(CONSTS).map(Const),
        lambda inner: st.builds(App, inner, terms),
        max_leaves=4,
    )


data_terms = _data_terms()
substitutions = st.dictionaries(st.sampled_from(VARS), terms, max_size=2)
