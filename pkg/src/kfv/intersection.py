"""Intersection forms of boundary trees.

Gram matrices are indexed by ascending curve id.  Determinant labels use the
minus-intersection form: the label of c is det(-M) with c's row and column
deleted (1 for the empty matrix).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class GramMatrix:
    ids: tuple
    rows: tuple

    def index(self, c):
        return self.ids.index(c)

    def negated(self):
        return [[-x for x in row] for row in self.rows]


def _require_frozen(g):
    if not g.frozen:
        raise ValueError("intersection computations need a frozen surface")


def gram(g):
    _require_frozen(g)
    ids = tuple(g.ids())
    pos = {c: i for i, c in enumerate(ids)}
    rows = [[0] * len(ids) for _ in ids]
    for c in ids:
        i = pos[c]
        rows[i][i] = g.self_int(c)
        for m in g.neighbors(c):
            rows[i][pos[m]] = 1
    return GramMatrix(ids, tuple(tuple(r) for r in rows))


def bareiss_det(matrix):
    """Fraction-free Gaussian elimination over the integers."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def leading_minors(matrix):
    """All leading principal minors, read off the Bareiss pivots (no row swaps)."""
    a = [list(row) for row in matrix]
    n = len(a)
    minors = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if pivot == 0:
            # later minors need pivoting; Sylvester already fails here
            minors.extend([None] * (n - k - 1))
            break
        for i in range(k + 1, n):
            lead = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - lead * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return minors


def forest_det(diag, adjacency):
    """det of a symmetric matrix whose off-diagonal pattern is a forest.

    ``diag`` maps vertex -> diagonal entry, ``adjacency`` vertex -> {vertex:
    off-diagonal entry}.  Leaves are eliminated one at a time (Schur
    complement); a zero pivot at a leaf l with parent p contributes -b^2 and
    removes both l and p.
    """
    d = {v: Fraction(x) for v, x in diag.items()}
    adj = {v: dict(nb) for v, nb in adjacency.items()}
    det = Fraction(1)
    leaves = [v for v in d if len(adj[v]) <= 1]
    while d:
        while leaves and leaves[-1] not in d:
            leaves.pop()
        if not leaves:
            raise ValueError("off-diagonal pattern is not a forest")
        v = leaves.pop()
        if len(adj[v]) > 1:
            continue
        if not adj[v]:
            det *= d.pop(v)
            del adj[v]
            continue
        (p, b), = adj[v].items()
        if d[v] != 0:
            det *= d[v]
            d[p] -= Fraction(b * b) / d[v]
            _drop(v, d, adj, leaves)
        else:
            det *= -(b * b)
            _drop(v, d, adj, leaves)
            _drop(p, d, adj, leaves)
    return int(det)


def _drop(v, d, adj, leaves):
    del d[v]
    for m in adj.pop(v):
        del adj[m][v]
        if len(adj[m]) <= 1:
            leaves.append(m)


def _minus_form(g, keep):
    diag = {c: -g.self_int(c) for c in keep}
    adjacency = {c: {m: -1 for m in g.neighbors(c) if m in keep} for c in keep}
    return diag, adjacency


def determinant_label(g, c, method="tree"):
    """det(-M) with the row and column of c removed.

    ``method="tree"`` eliminates along the tree structure; ``"bareiss"`` runs
    dense fraction-free elimination on the same matrix.  Both are exact.
    """
    _require_frozen(g)
    keep = [x for x in g.ids() if x != c]
    if method == "bareiss":
        m = gram(g)
        idx = [i for i, x in enumerate(m.ids) if x != c]
        return bareiss_det([[-m.rows[i][j] for j in idx] for i in idx])
    if method != "tree":
        raise ValueError(f"unknown method {method!r}")
    return forest_det(*_minus_form(g, set(keep)))


def determinant_labels(g, method="tree"):
    return {c: determinant_label(g, c, method) for c in g.ids()}


def full_determinant(g, method="tree"):
    """det(-M) over all curves."""
    _require_frozen(g)
    if method == "bareiss":
        return bareiss_det(gram(g).negated())
    return forest_det(*_minus_form(g, set(g.ids())))


def parity_check(g, labels=None):
    labels = labels or determinant_labels(g)
    return [{"curve": c, "kbar": g.kbar(c), "det_label": labels[c]}
            for c in g.ids() if (g.kbar(c) + labels[c]) % 2 == 0]


def is_negative_definite(g, subset):
    """True iff -M restricted to ``subset`` is positive definite (Sylvester)."""
    _require_frozen(g)
    ids = sorted(subset)
    if not ids:
        return True
    pos = {c: i for i, c in enumerate(ids)}
    mat = [[0] * len(ids) for _ in ids]
    for c in ids:
        i = pos[c]
        mat[i][i] = -g.self_int(c)
        for m in g.neighbors(c):
            if m in pos:
                mat[i][pos[m]] = -1
    return all(x is not None and x > 0 for x in leading_minors(mat))


def target_admissibility(g, labels=None):
    """Checks a target surface needs: labels <= 0, det labels >= 0, valency <= 3."""
    labels = labels or determinant_labels(g)
    positive_kbar = [c for c in g.ids() if g.kbar(c) > 0]
    negative_det = [c for c in g.ids() if labels[c] < 0]
    zero_det = [c for c in g.ids() if labels[c] == 0]
    high_valency = [c for c in g.ids() if g.valency(c) > 3]
    return {
        "kbar_nonpositive": not positive_kbar,
        "positive_kbar": positive_kbar,
        "det_nonnegative": not negative_det,
        "negative_det": negative_det,
        "zero_det": zero_det,
        "valency_at_most_3": not high_valency,
        "high_valency": high_valency,
        "ok": not (positive_kbar or negative_det or high_valency),
    }
