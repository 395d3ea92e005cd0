import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import DATASETS, dataset, hirzebruch_start
from kfv.intersection import (
    bareiss_det, determinant_label, determinant_labels, forest_det, full_determinant, gram,
    is_negative_definite, leading_minors, parity_check, target_admissibility,
)
from kfv.surface_graph import SurfaceGraph, new_projective_plane
from test_surface_graph import random_surface, surfaces


def cofactor_det(m):
    """Naive Laplace expansion; the oracle for small matrices."""
    n = len(m)
    if n == 0:
        return 1
    return sum((-1) ** j * m[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(n) if m[0][j])


def minus_minor(g, c):
    G = gram(g)
    idx = [i for i, x in enumerate(G.ids) if x != c]
    return [[-G.rows[i][j] for j in idx] for i in idx]


def test_line_label_is_one():
    g = new_projective_plane().freeze()
    assert determinant_label(g, 1) == 1


def test_hirzebruch_label_is_zero():
    g = new_projective_plane()
    e = g.blowup_free_point(1)
    assert determinant_label(g.freeze(), e) == 0


def test_four_curve_surface_labels():
    g = hirzebruch_start().freeze()
    labels = determinant_labels(g)
    assert labels[4] == 6 == cofactor_det(minus_minor(g, 4))
    assert labels == {c: cofactor_det(minus_minor(g, c)) for c in g.ids()}


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_cofactor(m):
    assert bareiss_det(m) == cofactor_det(m)


@given(st.integers(1, 6), st.data())
def test_leading_minors_match_cofactor(n, data):
    m = data.draw(st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n))
    minors = leading_minors(m)
    for k, value in enumerate(minors, start=1):
        if value is None:
            break
        assert value == cofactor_det([row[:k] for row in m[:k]])


@given(surfaces)
def test_tree_matches_bareiss_on_random_surfaces(g):
    g.freeze()
    assert determinant_labels(g, "tree") == determinant_labels(g, "bareiss")


@pytest.mark.parametrize("name", DATASETS)
def test_tree_matches_bareiss_on_bundled(name):
    # dense elimination per label is quartic overall, so big sources are sampled
    for g in dataset(name).surfaces.values():
        tree = determinant_labels(g, "tree")
        sample = g.ids() if len(g.curves) < 30 else g.ids()[::7]
        assert {c: tree[c] for c in sample} == {c: determinant_label(g, c, "bareiss") for c in sample}
        assert full_determinant(g, "tree") == full_determinant(g, "bareiss") == -1


def test_forest_zero_pivot():
    # path a - b with a zero diagonal at the leaf: det [[0,1],[1,5]] = -1
    assert forest_det({1: 0, 2: 5}, {1: {2: 1}, 2: {1: 1}}) == -1
    assert forest_det({1: 0, 2: 0, 3: 0}, {1: {2: 1}, 2: {1: 1, 3: 1}, 3: {2: 1}}) == 0


@given(surfaces)
def test_blowup_surfaces_are_unimodular(g):
    assert full_determinant(g.freeze()) == -1


@given(surfaces)
def test_signature_one_positive(g):
    m = np.array(gram(g.freeze()).rows, dtype=float)
    assert (np.linalg.eigvalsh(m) > 1e-9).sum() == 1


@pytest.mark.parametrize("name", DATASETS)
def test_parity_on_bundled(name):
    for g in dataset(name).surfaces.values():
        assert parity_check(g) == []


@given(surfaces)
def test_parity_on_random(g):
    assert parity_check(g.freeze()) == []


@pytest.mark.parametrize("name", DATASETS)
def test_targets_admissible_sources_not(name):
    ff = dataset(name)
    assert target_admissibility(ff.surfaces["Y"])["ok"]
    z = target_admissibility(ff.surfaces["Z"])
    assert not z["kbar_nonpositive"] and z["positive_kbar"]


def test_negative_definite_matches_sympy():
    g = random_surface(11, 12).freeze()
    for k in range(1, len(g.ids()) + 1):
        for subset in itertools.islice(itertools.combinations(g.ids(), k), 5):
            ids = sorted(subset)
            m = sympy.Matrix([[gram(g).rows[g.ids().index(a)][g.ids().index(b)] for b in ids] for a in ids])
            assert is_negative_definite(g, set(ids)) == (-m).is_positive_definite


def test_exceptional_curves_are_negative_definite():
    g = random_surface(3, 20).freeze()
    assert is_negative_definite(g, set(g.ids()) - {1})
    assert not is_negative_definite(g, set(g.ids()))


def test_unfrozen_surface_rejected():
    with pytest.raises(ValueError):
        gram(SurfaceGraph.projective_plane())
