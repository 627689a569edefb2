"""Hypothesis strategies for complexes, specs and tuples of faces."""

from hypothesis import strategies as st

from polytc.formulas import SphereProductSpec
from polytc.simplicial import from_maximal_faces


@st.composite
def complexes(draw, max_n=5, max_facets=5):
    n = draw(st.integers(1, max_n))
    faces = draw(st.lists(st.sets(st.integers(1, n), max_size=n), max_size=max_facets))
    return from_maximal_faces(n, [sorted(f) for f in faces])


@st.composite
def specs(draw, max_n=4, max_facets=4, dims=(1, 2, 3)):
    K = draw(complexes(max_n, max_facets))
    ks = draw(st.lists(st.sampled_from(dims), min_size=K.n, max_size=K.n))
    return SphereProductSpec(K, tuple(ks))


@st.composite
def face_tuples(draw, K, min_size=1, max_size=4):
    faces = K.faces()
    return draw(st.lists(st.sampled_from(faces), min_size=min_size, max_size=max_size))
