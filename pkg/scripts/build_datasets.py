"""Generate the bundled .kfw datasets in src/kfv/data/.

Every surface is built by a construction script so curve ids come out of the
blowup calculus itself.  Pullback columns are written out by hand; each one is
cross-checked against an independent exact solve of E.phi^*(F) = phi_*(E).F
over the type 1, 2 and 4 curves, and the written file must verify cleanly.

    python scripts/build_datasets.py [--check]
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from kfv.kfw_format import parse
from kfv.surface_graph import SurfaceGraph
from kfv.verify import verify

DATA = Path(__file__).resolve().parents[1] / "src" / "kfv" / "data"

P_W = ("w^8+(2+8*sqrt(-3))*w^7+(-233+50*sqrt(-3))/3*w^6+(-4600/9-376*sqrt(-3))/3*w^5"
       "+(835-890*sqrt(-3))/3*w^4+(2420+22*sqrt(-3))/3*w^3+(1043/3+336*sqrt(-3))*w^2"
       "+(-118+158*sqrt(-3))*w+(-28+4*sqrt(-3))")
R_W = ("w^5+(4+16*sqrt(-3))/3*w^4+(-278+68*sqrt(-3))/9*w^3+(-140/3-24*sqrt(-3))*w^2"
       "+(35-112*sqrt(-3))/3*w+(68-20*sqrt(-3))/3")
Q_T = "35*t^4-182*t^3+390*t^2-455*t+455"


class Script:
    """A surface under construction plus the text lines that rebuild it."""

    def __init__(self):
        self.g = SurfaceGraph.projective_plane()
        self.lines = ["p2"]

    def note(self, text):
        self.lines.append(f"# {text}")

    def free(self, c):
        self.lines.append(f"blowfree {c}")
        return self.g.blowup_free_point(c)

    def edge(self, a, b):
        self.lines.append(f"blowedge {a} {b}")
        return self.g.blowup_intersection(a, b)

    def contract(self, c):
        self.lines.append(f"contract {c}")
        self.g.contract(c)

    def chain_free(self, c, n):
        out = []
        for _ in range(n):
            c = self.free(c)
            out.append(c)
        return out

    def kbar(self, c):
        return self.g.kbar(c)


class MapData:
    def __init__(self, degree, partial=False):
        self.degree = degree
        self.partial = partial
        self.types = {}
        self.pullback = {}
        self.lines = [f"degree {degree}"] + (["partial"] if partial else [])

    def note(self, text):
        self.lines.append(f"# {text}")

    def _type(self, E, kind, line):
        assert E not in self.types, E
        self.types[E] = (kind,) + line
        if kind == 1:
            self.lines.append(f"type {E} 1 target={line[0]} e={line[1]} f={line[2]}")
        elif kind == 3:
            self.lines.append(f"type {E} 3 e={line[0]}")
        else:
            self.lines.append(f"type {E} {kind}")

    def t1(self, E, F, e, f):
        self._type(E, 1, (F, e, f))

    def t2(self, *Es):
        for E in Es:
            self._type(E, 2, ())

    def t3(self, E, e):
        self._type(E, 3, (e,))

    def t4(self, *Es):
        for E in Es:
            self._type(E, 4, ())

    def pb(self, F, terms):
        """terms: list of (coefficient, zid)."""
        col = self.pullback.setdefault(F, {})
        for c, E in terms:
            assert E not in col, (F, E)
            col[E] = c
        self.lines.append(f"pullback {F} : " + " + ".join(f"{c}*{E}" for c, E in terms))


# ---------------------------------------------------------------------------
# independent pullback solve

def solve_pullback(z, y, types, F):
    """Solve for phi^*(F) on type-2 curves from the pushforward identity; exact."""
    known = {}
    unknown = []
    for E, t in types.items():
        if t[0] == 1:
            known[E] = Fraction(t[2]) if t[1] == F else Fraction(0)
        elif t[0] == 2:
            unknown.append(E)
        else:
            known[E] = Fraction(0)
    pos = {E: i for i, E in enumerate(unknown)}
    rows = []
    for E, t in types.items():
        if t[0] == 3:
            continue
        if t[0] == 1:
            tgt = t[1]
            rhs = Fraction(t[3] * (y.self_int(tgt) if tgt == F else (1 if F in y.neighbors(tgt) else 0)))
        else:
            rhs = Fraction(0)
        row = [Fraction(0)] * len(unknown)
        for E2, c in [(E, z.self_int(E))] + [(n, 1) for n in z.neighbors(E)]:
            if E2 in pos:
                row[pos[E2]] += c
            else:
                rhs -= c * known[E2]
        rows.append(row + [rhs])
    sol = _solve(rows, len(unknown))
    out = {E: v for E, v in known.items() if v}
    for E, i in pos.items():
        if sol[i]:
            out[E] = sol[i]
    return out


def _solve(rows, n):
    rows = [list(r) for r in rows]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            raise ValueError(f"pullback not determined on unknown {c}")
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][n] != 0:
            raise ValueError("pushforward identity is inconsistent")
    return [rows[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# target surfaces

def y_trunk(s):
    """Line, three curves attached to it, and the long chain up to the first K-bar 0 curve."""
    s.note("line 1, the first blowup 2, then 3 and 4 from the intersection points with the line")
    c2 = s.free(1)
    c3 = s.edge(c2, 1)
    c4 = s.edge(c3, 1)
    s.note("chain of free blowups out of 4: labels -4 .. 0")
    s.chain_free(c4, 5)


def first_y():
    s = Script()
    y_trunk(s)
    s.note("trivalent 11 over the -1 curve 8 and the label 0 curve 9")
    s.edge(8, 9)
    s.edge(8, 10)
    s.free(11)
    s.free(12)
    return s


def second_y():
    s = Script()
    y_trunk(s)
    s.note("trivalent 12 built from 8, 9 and their blowups")
    s.edge(8, 9)
    s.edge(10, 9)
    s.edge(10, 11)
    s.free(12)
    s.free(13)
    return s


def three_y():
    s = first_y()
    s.note("two more trivalent curves beyond 12 and 13")
    s.edge(12, 13)
    s.edge(14, 13)
    s.free(15)
    return s


FIRST_VALUATIONS = {1: (-1, -1), 2: (-1, 0), 3: (-2, -1), 4: (-3, -2), 5: (-3, -2), 6: (-3, -2),
                    7: (-3, -2), 8: (-3, -2), 9: (-3, -2), 10: (-6, -4), 11: (-9, -6),
                    12: (-9, -6), 13: (-9, -6)}
SECOND_VALUATIONS = dict(list(FIRST_VALUATIONS.items())[:9])
SECOND_VALUATIONS.update({10: (-6, -4), 11: (-9, -6), 12: (-15, -10), 13: (-15, -10), 14: (-15, -10)})
THREE_VALUATIONS = dict(FIRST_VALUATIONS)
THREE_VALUATIONS.update({14: (-18, -12), 15: (-27, -18), 16: (-27, -18)})


# ---------------------------------------------------------------------------
# source surfaces and maps

def first_like(k=2, three=False):
    """Source of the degree-16 frameworks; k selects the isotope, three the three-dessin variant."""
    s = Script()
    m = MapData(16, partial=three)
    s.note("base: 2 from the line, then 3..8 near the point at infinity of 2")
    c2 = s.free(1)
    c3 = s.free(c2)
    c4 = s.edge(c2, c3)
    c5 = s.edge(c2, c4)
    c6 = s.free(c5)
    c7 = s.edge(c5, c6)
    c8 = s.edge(c7, c5)
    s.note("line side: 9, 10, ... later contracted down to a chain ending at a dicritical curve")
    c9 = s.free(1)
    c10 = s.free(c9)
    c11 = s.free(c10)
    c12 = s.free(c11)
    line_pos = {-1: c9, 0: c10, 1: c11, 2: c12}
    if not three:
        prev = s.edge(c11, c12)
        line_pos[3] = prev
        while s.kbar(prev) < 2 * k + 1:
            prev = s.edge(prev, c12)
            line_pos[s.kbar(prev)] = prev

    s.note("leaves on 8 with label -4, mapping 2:1 onto the line")
    leaves = [s.free(c8) for _ in range(8)]
    s.note("three-curve branches on 8 over 2 and 3")
    plums = []
    for _ in range(5):
        a = s.free(c8)
        b = s.edge(a, c8)
        c = s.free(a)
        plums.append((a, b, c))
    s.note("copies of the target branch beyond 4, attached to 8")
    forks = []
    nfork = 12 if three else 9
    for _ in range(3):
        g = [s.free(c8)]
        g += s.chain_free(g[0], 4)
        g.append(s.edge(g[3], g[4]))
        g.append(s.edge(g[3], g[5]))
        g.append(s.free(g[6]))
        g.append(s.free(g[7]))
        if three:
            g.append(s.edge(g[7], g[8]))
            g.append(s.edge(g[9], g[8]))
            g.append(s.free(g[10]))
        assert len(g) == nfork
        forks.append(g)

    greens, blues, extras, copies = [], [], [], []
    if three:
        s.note("copies of the target branch beyond 11, attached to 5")
        for _ in range(8):
            a = s.free(c5)
            b = s.free(a)
            c = s.edge(a, b)
            d = s.edge(c, b)
            e = s.free(d)
            copies.append((a, b, c, d, e))
    else:
        s.note("two-curve branches on 5 over 12 and 13")
        for _ in range(12 - 2 * k):
            h = s.free(c5)
            greens.append((h, s.free(h)))
    s.note("three-curve branches on 5 over 9 and 10")
    for _ in range(6 - k):
        a = s.free(c5)
        b = s.edge(a, c5)
        c = s.free(a)
        blues.append((a, b, c))
    if not three and k > 2:
        s.note("three-curve branches on 5 ending in a dicritical leaf")
        for _ in range(3 * k - 6):
            a = s.free(c5)
            b = s.free(a)
            extras.append((a, b, s.free(b)))

    long_branch = {-1: c2}
    if three:
        s.note("four curves between 2 and 5")
        B = s.edge(c2, c5)
        A = s.edge(B, c5)
        C = s.edge(B, c2)
        D = s.edge(C, c2)
        s.note("leaves on 2 over 13 and 16")
        dandelions = [s.free(c2) for _ in range(3)]
        sepia = s.free(c2)
        s0 = s.free(c2)
        s1 = s.free(s0)
        s2 = s.free(s1)
    else:
        s.note("chain between 2 and 5")
        prev = s.edge(c2, c5)
        long_branch[-3] = prev
        while s.kbar(prev) > -(2 * k + 1):
            prev = s.edge(prev, c5)
            long_branch[s.kbar(prev)] = prev
    s.contract(1)
    s.contract(c9)

    s.note("chain between 8 and 5")
    chain = {-7: s.edge(c8, c5)}
    prev = chain[-7]
    while s.kbar(prev) > -52:
        prev = s.edge(c8, prev)
        chain[s.kbar(prev)] = prev
    chain[-39] = s.edge(chain[-22], chain[-17])
    chain[-19] = s.edge(chain[-12], chain[-7])
    chain[-26] = s.edge(chain[-19], chain[-7])
    chain[-9] = s.edge(chain[-7], c5)
    chain[-11] = s.edge(chain[-9], c5)
    chain[-13] = s.edge(chain[-11], c5)

    # types
    m.note("the curve over the line's neighbors and the trivalent curves")
    m.t1(c8, 4, 1, 16)
    m.t1(c5, 11, 1, 13)
    m.t1(c7, 3, 1, 1)
    m.t1(c6, 2, 1, 1)
    m.t1(c4, 10, 1, 1)
    m.t1(c3, 9, 1, 1)
    if three:
        m.t1(c2, 15, 1, 5)
    else:
        m.t2(c2)
    for leaf in leaves:
        m.t1(leaf, 1, 2, 1)
    for a, b, c in plums:
        m.t2(a)
        m.t1(b, 3, 3, 1)
        m.t1(c, 2, 3, 1)
    for g in forks:
        for i, E in enumerate(g):
            m.t1(E, 5 + i, 1, 1)
    for kb, F in ((-52, 5), (-39, 6), (-26, 7), (-13, 8)):
        m.t1(chain[kb], F, 13, 1)
    m.t2(*(E for kb, E in sorted(chain.items()) if kb not in (-52, -39, -26, -13)))
    for a, b, c in blues:
        m.t2(a)
        m.t1(b, 10, 3, 1)
        m.t1(c, 9, 3, 1)
    for h, h2 in greens:
        m.t1(h, 12, 1, 1)
        m.t1(h2, 13, 1, 1)
    for a, b, c in extras:
        m.t1(a, 10, 1, 1)
        m.t1(b, 9, 1, 1)
        m.t3(c, 1)
    for copy in copies:
        for E, F in zip(copy, (12, 13, 14, 15, 16)):
            m.t1(E, F, 1, 1)
    e = 2 * k + 1
    if three:
        m.t1(A, 12, 5, 1)
        m.t1(D, 14, 5, 1)
        m.t2(B, C)
        for d in dandelions:
            m.t1(d, 16, 1, 1)
        m.t1(sepia, 13, 3, 1)
        m.t1(s0, 13, 2, 1)
        m.t2(s1)
        m.t3(s2, 2)
        m.t1(c10, 16, 2, 1)
        m.t2(c11)
        m.t3(c12, 2)
    else:
        m.t1(long_branch[-e], 12, e, 1)
        m.t2(*(E for kb, E in long_branch.items() if kb not in (-e, -1)))
        m.t1(c10, 13, e, 1)
        for kb, E in line_pos.items():
            if kb == e:
                m.t3(E, e)
            elif kb == 2:
                m.t4(E)
            elif kb > 0:
                m.t2(E)

    # pullbacks
    m.note("pullback columns, one group per line")
    m.pb(1, [(2, x) for x in leaves])
    m.pb(2, [(1, c6)] + [t for a, b, c in plums for t in ((3, c), (1, a))])
    m.pb(3, [(1, c7)] + [t for a, b, c in plums for t in ((3, b), (1, a))])
    m.pb(4, [(1, c8)])
    ch = chain
    m.pb(5, [(1, g[0]) for g in forks])
    m.pb(5, [(13, ch[-52]), (11, ch[-47]), (9, ch[-42]), (7, ch[-37]), (5, ch[-32]), (3, ch[-27]),
             (1, ch[-22])])
    m.pb(6, [(1, g[1]) for g in forks])
    m.pb(6, [(13, ch[-39]), (1, ch[-47]), (2, ch[-42]), (3, ch[-37]), (4, ch[-32]), (5, ch[-27]),
             (6, ch[-22]), (5, ch[-17]), (2, ch[-12]), (1, ch[-19])])
    m.pb(7, [(1, g[2]) for g in forks])
    m.pb(7, [(13, ch[-26]), (1, ch[-17]), (3, ch[-12]), (8, ch[-19]), (3, ch[-7]), (2, ch[-9]),
             (1, ch[-11])])
    m.pb(8, [(1, g[3]) for g in forks])
    m.pb(8, [(13, ch[-13]), (9, ch[-11]), (5, ch[-9]), (1, ch[-7])])
    m.pb(9, [(1, g[4]) for g in forks] + [(1, c3)])
    m.pb(9, [t for a, b, c in blues for t in ((3, c), (1, a))] + [(1, b) for a, b, c in extras])
    m.pb(10, [(1, g[5]) for g in forks] + [(1, c4)])
    m.pb(10, [t for a, b, c in blues for t in ((3, b), (1, a))] + [(1, a) for a, b, c in extras])
    m.pb(11, [(1, g[6]) for g in forks] + [(1, c5)])
    if three:
        m.pb(12, [(1, g[7]) for g in forks] + [(1, cp[0]) for cp in copies])
        m.pb(12, [(5, A), (2, B), (1, C)])
        m.pb(13, [(1, g[8]) for g in forks] + [(1, cp[1]) for cp in copies])
        m.pb(14, [(1, g[9]) for g in forks] + [(1, cp[2]) for cp in copies])
        m.pb(14, [(5, D), (3, C), (1, B)])
        m.pb(15, [(1, g[10]) for g in forks] + [(1, cp[3]) for cp in copies])
        m.pb(16, [(1, g[11]) for g in forks] + [(1, cp[4]) for cp in copies])
        named = {"A": A, "B": B, "C": C, "D": D, "sepia": sepia, "s0": s0, "s1": s1, "s2": s2}
    else:
        m.pb(12, [(1, g[7]) for g in forks] + [(1, h) for h, _ in greens])
        m.pb(12, [(j, long_branch[-j]) for j in range(e, 0, -2)])
        m.pb(13, [(1, g[8]) for g in forks] + [(1, h2) for _, h2 in greens])
        m.pb(13, [(e, c10)] + [(k - (j - 1) // 2, long_branch[-j]) for j in range(2 * k - 1, 0, -2)]
             + [(k - (j - 1) // 2, line_pos[j]) for j in range(1, 2 * k, 2)])
        named = {}
    return s, m, {"c2": c2, "c5": c5, "c8": c8, "c10": c10, "c11": c11, "c12": c12, **named}


def second():
    s = Script()
    m = MapData(28)
    s.note("base: 2 from the line, then 3..9 near the point at infinity of 2")
    c2 = s.free(1)
    c3 = s.free(c2)
    c4 = s.edge(c2, c3)
    c5 = s.edge(c4, c3)
    c6 = s.edge(c4, c5)
    c7 = s.free(c6)
    c8 = s.edge(c6, c7)
    c9 = s.edge(c8, c6)
    s.note("line side: contracted later, leaving a chain that ends at a dicritical curve")
    c10 = s.free(1)
    c11 = s.free(c10)
    c12 = s.free(c11)
    c13 = s.edge(c11, c12)
    c14 = s.edge(c13, c12)
    c15 = s.edge(c13, c14)
    c16 = s.edge(c15, c14)
    c17 = s.edge(c16, c14)
    s.note("leaves on 9 with label -4, mapping 2:1 onto the line")
    leaves = [s.free(c9) for _ in range(14)]
    s.note("three-curve branches on 9 over 2 and 3")
    plums = []
    for _ in range(9):
        a = s.free(c9)
        b = s.edge(a, c9)
        plums.append((a, b, s.free(a)))
    s.note("copies of the target branch beyond 4, attached to 9")
    forks = []
    for _ in range(5):
        g = [s.free(c9)]
        g += s.chain_free(g[0], 4)
        g.append(s.edge(g[3], g[4]))
        g.append(s.edge(g[5], g[4]))
        g.append(s.edge(g[5], g[6]))
        g.append(s.free(g[7]))
        g.append(s.free(g[8]))
        forks.append(g)
    s.note("two-curve branches on 6 over 13 and 14")
    greens = []
    for _ in range(16):
        h = s.free(c6)
        greens.append((h, s.free(h)))
    s.note("four-curve branches on 6")
    fours = []
    for _ in range(2):
        a = s.free(c6)
        b = s.edge(c6, a)
        c = s.edge(c6, b)
        fours.append((a, b, c, s.free(a)))
    s.note("six-curve branches on 6 ending in a dicritical leaf")
    sixes = []
    for _ in range(4):
        a = s.free(c6)
        b = s.edge(c6, a)
        c = s.free(a)
        d = s.free(c)
        e = s.free(d)
        sixes.append((a, b, c, d, e, s.free(e)))
    s.contract(1)
    s.contract(c10)
    s.contract(c2)
    s.note("chain between 6 and 4")
    L1 = s.edge(c6, c4)
    L2 = s.edge(c6, L1)
    L3 = s.edge(c6, L2)
    s.note("chain between 9 and 6; the left part is attached to 9, the right part to 6")
    left = {-7: s.edge(c9, c6)}
    prev = left[-7]
    while s.kbar(prev) > -92:
        prev = s.edge(c9, prev)
        left[s.kbar(prev)] = prev
    left[-69] = s.edge(left[-37], left[-32])
    left[-29] = s.edge(left[-17], left[-12])
    left[-46] = s.edge(left[-17], left[-29])
    right = {}
    prev = left[-7]
    while s.kbar(prev) > -23 or prev == left[-7]:
        prev = s.edge(prev, c6)
        right[s.kbar(prev)] = prev
    s.note("labels -17 and -23 occur twice; the primed names are the -17 curve attached to 9")
    s.note("and the -23 curve between the -7 and -16 curves")
    right[-16] = s.edge(left[-7], right[-9])
    right["-23'"] = s.edge(left[-7], right[-16])

    m.t1(c9, 4, 1, 28)
    m.t1(c6, 12, 1, 23)
    m.t1(c8, 3, 1, 1)
    m.t1(c7, 2, 1, 1)
    m.t1(c5, 11, 1, 1)
    m.t1(c3, 9, 1, 1)
    m.t2(c4)
    m.t1(c11, 14, 7, 1)
    m.t4(c12)
    m.t2(c13)
    m.t4(c14)
    m.t2(c15, c16)
    m.t3(c17, 7)
    for leaf in leaves:
        m.t1(leaf, 1, 2, 1)
    for a, b, c in plums:
        m.t2(a)
        m.t1(b, 3, 3, 1)
        m.t1(c, 2, 3, 1)
    for g in forks:
        for i, E in enumerate(g):
            m.t1(E, 5 + i, 1, 1)
    for h, h2 in greens:
        m.t1(h, 13, 1, 1)
        m.t1(h2, 14, 1, 1)
    for a, b, c, d in fours:
        m.t2(a, b)
        m.t1(c, 11, 5, 1)
        m.t1(d, 9, 5, 1)
    for a, b, c, d, e, f in sixes:
        m.t2(a)
        m.t1(b, 11, 3, 1)
        m.t1(c, 9, 3, 1)
        m.t2(d, e)
        m.t3(f, 3)
    m.t2(L1, L2)
    m.t1(L3, 13, 7, 1)
    for kb, F in ((-92, 5), (-69, 6), (-46, 7)):
        m.t1(left[kb], F, 23, 1)
    m.t2(*(E for kb, E in sorted(left.items()) if kb not in (-92, -69, -46)))
    m.t1(right["-23'"], 8, 23, 1)
    m.t1(right[-23], 10, 23, 1)
    m.t2(*(E for kb, E in right.items() if kb not in ("-23'", -23)))

    lf, rt = left, right
    m.pb(1, [(2, x) for x in leaves])
    m.pb(2, [(1, c7)] + [t for a, b, c in plums for t in ((3, c), (1, a))])
    m.pb(3, [(1, c8)] + [t for a, b, c in plums for t in ((3, b), (1, a))])
    m.pb(4, [(1, c9)])
    m.pb(5, [(1, g[0]) for g in forks])
    m.pb(5, [(23 - 2 * j, lf[-92 + 5 * j]) for j in range(12)])
    m.pb(6, [(1, g[1]) for g in forks])
    m.pb(6, [(23, lf[-69])] + [(11 - j, lf[-37 - 5 * j]) for j in range(11)]
         + [(10, lf[-32]), (7, lf[-27]), (4, lf[-22]), (1, lf[-17])])
    m.pb(7, [(1, g[2]) for g in forks])
    m.pb(7, [(23, lf[-46]), (7, lf[-17]), (5, lf[-22]), (3, lf[-27]), (1, lf[-32]), (14, lf[-29]),
             (5, lf[-12]), (1, lf[-7])])
    m.pb(8, [(1, g[3]) for g in forks])
    m.pb(8, [(23, rt["-23'"]), (5, lf[-7]), (2, lf[-12]), (1, lf[-29]), (15, rt[-16]), (7, rt[-9]),
             (6, rt[-11]), (5, rt[-13]), (4, rt[-15]), (3, rt[-17]), (2, rt[-19]), (1, rt[-21])])
    m.pb(9, [(1, g[4]) for g in forks] + [(1, c3)])
    m.pb(9, [t for a, b, c, d in fours for t in ((5, d), (2, a), (1, b))]
         + [t for a, b, c, d, e, f in sixes for t in ((3, c), (1, a), (2, d), (1, e))])
    m.pb(10, [(1, g[5]) for g in forks])
    m.pb(10, [(23, rt[-23]), (20, rt[-21]), (17, rt[-19]), (14, rt[-17]), (11, rt[-15]), (8, rt[-13]),
              (5, rt[-11]), (2, rt[-9]), (1, rt[-16])])
    m.pb(11, [(1, g[6]) for g in forks] + [(1, c5)])
    m.pb(11, [t for a, b, c, d in fours for t in ((5, c), (3, b), (1, a))]
         + [t for a, b, c, d, e, f in sixes for t in ((3, b), (1, a))])
    m.pb(12, [(1, g[7]) for g in forks] + [(1, c6)])
    m.pb(13, [(1, g[8]) for g in forks] + [(1, h) for h, _ in greens])
    m.pb(13, [(7, L3), (5, L2), (3, L1), (1, c4)])
    m.pb(14, [(1, g[9]) for g in forks] + [(1, h2) for _, h2 in greens])
    m.pb(14, [(7, c11), (3, c4), (2, L1), (1, L2), (3, c13), (2, c15), (1, c16)])
    return s, m, {"c4": c4, "c6": c6, "c9": c9, "c11": c11, "c17": c17}


# ---------------------------------------------------------------------------
# file assembly

def render(title, z, y, m, valuations, chain, defines=(), belyi=(), candidate=None):
    out = [f"# {title}", "", "[surface Y]"] + y.lines + ["", "[surface Z]"] + z.lines + [""]
    out += ["[map]"] + m.lines + [""]
    out += ["[valuations]"]
    for i, name in enumerate(("y1", "y2")):
        out.append(name + " " + " ".join(f"{F}={v[i]}" for F, v in sorted(valuations.items())))
    out += ["", "[chain]"] + [f"blowedge {a} {b}" for a, b in chain] + [""]
    if defines:
        out += ["[define]"] + [f"{k} = {v}" for k, v in defines] + [""]
    for zid, profile, num, den in belyi:
        out.append(f"[belyi {zid}]")
        out.append(f"profile {profile}")
        if num is not None:
            out += [f"num = {num}", f"den = {den}"]
        out.append("")
    if candidate:
        out += ["[candidate]", f"y1 = {candidate[0]}", f"y2 = {candidate[1]}", ""]
    return "\n".join(out)


def cross_check(z, y, m, fill=False):
    """Compare every written column with the independent solve; optionally add missing ones."""
    for F in y.g.ids():
        solved = solve_pullback(z.g, y.g, m.types, F)
        assert all(v.denominator == 1 and v > 0 for v in solved.values()), (F, solved)
        solved = {E: int(v) for E, v in solved.items()}
        written = m.pullback.get(F, {})
        if written == solved:
            continue
        if fill and all(solved.get(E) == c for E, c in written.items()):
            extra = sorted((E, c) for E, c in solved.items() if E not in written)
            m.pb(F, [(c, E) for E, c in extra])
            continue
        diff = {E: (written.get(E), solved.get(E)) for E in set(written) | set(solved)
                if written.get(E) != solved.get(E)}
        raise AssertionError(f"pullback of Y{F} disagrees with the solve: {diff}")


def build():
    files = {}

    y = first_y()
    z, m, c = first_like(2)
    cross_check(z, y, m)
    defines = [("p", P_W), ("r", R_W), ("q", Q_T), ("W", "(x1*x2^3-1)^3/x2")]
    files["first.kfw"] = render(
        "degree-16 framework with two non-trivial three-point covers", z, y, m, FIRST_VALUATIONS,
        [(c["c2"], c["c10"]), (c["c2"], "#1")], defines,
        [(c["c8"], "deg=16 over0=2^8 over1=3^5,1 overInf=13,1^3", "p^2", "w*r^3"),
         (c["c5"], "deg=13 over0=13 over1=3^4,1 overInf=5,1^8", "3^15", "t*q^3")],
        ("x1^3*x2^8*p(W)", "x1^2*x2^5*(x1*x2^3-1)*r(W)"))

    for k in range(2, 7):
        y = first_y()
        z, m, c = first_like(k)
        cross_check(z, y, m)
        over0 = ",".join(x for x in (f"3^{6 - k}" if k < 6 else "", f"1^{3 * k - 5}") if x)
        over1 = f"{2 * k + 1}" + (f",1^{12 - 2 * k}" if k < 6 else "")
        polys = [("t^13+1", "1")] if k == 6 else [("3^15", "t*q^3")] if k == 2 else [(None, None)]
        num, den = polys[0]
        files[f"isotope_k{k}.kfw"] = render(
            f"degree-16 isotope with parameter k = {k}", z, y, m, FIRST_VALUATIONS,
            [(c["c2"], c["c10"]), (c["c2"], "#1")], [("q", Q_T)] if k == 2 else (),
            [(c["c5"], f"deg=13 over0=13 over1={over0} overInf={over1}", num, den)])

    y = second_y()
    z, m, c = second()
    cross_check(z, y, m)
    files["second.kfw"] = render(
        "degree-28 framework", z, y, m, SECOND_VALUATIONS,
        [(c["c4"], c["c11"]), ("#1", c["c11"]), ("#1", "#2")], (),
        [(c["c9"], "deg=28 over0=2^14 over1=3^9,1 overInf=23,1^5", None, None),
         (c["c6"], "deg=23 over0=23 over1=5^2,3^4,1 overInf=7,1^16", None, None)])

    y = three_y()
    z, m, c = first_like(three=True)
    m.note("rows not written out by hand, completed from the pushforward identity")
    cross_check(z, y, m, fill=True)
    files["three_dessin.kfw"] = render(
        "degree-16 framework with three non-trivial three-point covers", z, y, m, THREE_VALUATIONS,
        [(c["c2"], c["c10"]), (c["c2"], "#1")], (),
        [(c["c2"], "deg=5 over0=5 over1=3,2 overInf=2,1^3", "x^3*(x-5)^2", "108")])
    return files


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare with the bundled files, do not write")
    args = ap.parse_args(argv)
    status = 0
    for name, text in build().items():
        report = verify(parse(text, name))
        line = report.to_text().splitlines()[-1]
        print(f"{name}: {line}")
        if report.exit_code:
            print(report.to_text())
            status = 1
        path = DATA / name
        if args.check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                print(f"{name}: differs from the bundled copy")
                status = 1
        else:
            DATA.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
    return status


if __name__ == "__main__":
    sys.exit(main())
