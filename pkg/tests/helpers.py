"""Shared strategies and small builders for the test suite."""

from hypothesis import assume
import hypothesis.strategies as st

from facetor.simplicial import CharacteristicData, SimplicialPoset


def double_edge_poset():
    """Two vertices joined by two distinct edges (not a complex)."""
    return SimplicialPoset.from_elements([
        ("0", [], []), ("a", ["a"], ["0"]), ("b", ["b"], ["0"]),
        ("e1", ["a", "b"], ["a", "b"]), ("e2", ["a", "b"], ["a", "b"]),
    ], vertices=["a", "b"])


def solid_simplex(k):
    verts = [chr(97 + i) for i in range(k + 1)]
    return SimplicialPoset.from_facets([verts], vertices=verts)


def cycle_facets(n):
    return [[str(i + 1), str((i + 1) % n + 1)] for i in range(n)]


def cstar2_data():
    """Two disjoint vertices in rank 3 with two ghost vertices."""
    poset = SimplicialPoset.from_facets([["v"], ["w"]], vertices=["v", "w"])
    chi = {"v": (1, 1, 1), "w": (-1, -1, -1),
           "g1": (1, 0, 0), "g2": (0, 1, 0)}
    return CharacteristicData(poset, ["v", "w", "g1", "g2"], chi, 3,
                              name="cstar2-p1")


def two_points_classes(table):
    """The four standard classes of the cstar2 table: a1, a2, b, c."""
    a1 = table.reduce({((1,), ()): 1, ((3,), ()): -1})
    a2 = table.reduce({((2,), ()): 1, ((3,), ()): -1})
    b = table.reduce({((1, 2), ()): 1, ((2, 3), ()): 1, ((1, 3), ()): -1})
    c = table.reduce({((), (("{v}", 1),)): 1})
    return a1, a2, b, c


def basis_change_source(target):
    """cstar2 in the basis where the first ray is the third basis vector."""
    chi = {"v": (0, 0, 1), "w": (0, 0, -1),
           "g1": (1, 0, 0), "g2": (0, 1, 0)}
    return CharacteristicData(target.poset, ["v", "w", "g1", "g2"], chi, 3,
                              name="cstar2-p1 rebased")


@st.composite
def small_complex_facets(draw, max_vertices=5, max_facets=6):
    nv = draw(st.integers(0, max_vertices))
    verts = [chr(97 + i) for i in range(nv)]
    facets = []
    if nv:
        for _ in range(draw(st.integers(0, max_facets))):
            facets.append(draw(st.lists(
                st.sampled_from(verts), min_size=1, max_size=nv, unique=True)))
    return facets, verts


def _primitive_vectors(n, bound=2):
    from math import gcd
    out = []

    def rec(prefix):
        if len(prefix) == n:
            g = 0
            for x in prefix:
                g = gcd(g, x)
            if g == 1:
                out.append(tuple(prefix))
            return
        for x in range(-bound, bound + 1):
            rec(prefix + [x])

    rec([])
    return out


_PRIMITIVE = {n: _primitive_vectors(n) for n in (1, 2, 3)}


@st.composite
def small_characteristic_data(draw, max_vertices=4, n_max=3):
    """Validated characteristic data on a random small complex, facet sizes
    capped at the lattice rank, with up to two ghost vertices."""
    n = draw(st.integers(1, n_max))
    nv = draw(st.integers(0, max_vertices))
    verts = [chr(97 + i) for i in range(nv)]
    facets = []
    if nv:
        for _ in range(draw(st.integers(0, 5))):
            facets.append(draw(st.lists(
                st.sampled_from(verts), min_size=1,
                max_size=min(nv, n), unique=True)))
    poset = SimplicialPoset.from_facets(facets, vertices=verts)
    ambient = list(poset.vertices)
    for i in range(draw(st.integers(0, 2))):
        ambient.append("z%d" % i)
    chi = {v: draw(st.sampled_from(_PRIMITIVE[n])) for v in ambient}
    data = CharacteristicData(poset, ambient, chi, n)
    assume(data.validate() == [])
    return data


def rp2_facets():
    """Six vertex triangulation of the real projective plane."""
    return [["1", "2", "3"], ["1", "3", "4"], ["1", "4", "5"],
            ["1", "2", "6"], ["1", "5", "6"], ["2", "3", "5"],
            ["2", "4", "5"], ["2", "4", "6"], ["3", "4", "6"],
            ["3", "5", "6"]]
