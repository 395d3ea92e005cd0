"""Trees of curves at infinity and the blowup/contraction calculus.

A surface is a tree whose vertices are boundary curves.  Each curve carries
its K-bar label (``kbar``, fixed at creation) and its self-intersection
(``self_int``, changed only by blowups and contractions).  Every mutation is
appended to ``log`` so a surface can be rebuilt from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class GraphError(ValueError):
    pass


@dataclass
class CurveNode:
    id: int
    kbar: int
    self_int: int
    neighbors: set = field(default_factory=set)

    @property
    def valency(self):
        return len(self.neighbors)


class SurfaceGraph:
    def __init__(self):
        self.curves = {}
        self.log = []
        self.frozen = False
        self._next_id = 1

    # -- construction ----------------------------------------------------
    @classmethod
    def projective_plane(cls):
        g = cls()
        g._add(-2, 1)
        g.log.append(("p2",))
        return g

    @classmethod
    def declared(cls, curves, edges):
        """Surface given directly as (id, kbar, self_int) triples and id pairs."""
        g = cls()
        for cid, kbar, self_int in curves:
            if cid in g.curves:
                raise GraphError(f"duplicate curve id {cid}")
            g.curves[cid] = CurveNode(cid, kbar, self_int)
        for a, b in edges:
            for c in (a, b):
                if c not in g.curves:
                    raise GraphError(f"edge references unknown curve {c}")
            if a == b or b in g.curves[a].neighbors:
                raise GraphError(f"bad or repeated edge {a} {b}")
            g.curves[a].neighbors.add(b)
            g.curves[b].neighbors.add(a)
        g._next_id = max(g.curves, default=0) + 1
        g.log.append(("declare", tuple(sorted(curves)), tuple(sorted(tuple(sorted(e)) for e in edges))))
        g.check_tree()
        return g

    @classmethod
    def replay(cls, log):
        g = None
        for event in log:
            kind = event[0]
            if kind == "p2":
                if g is not None:
                    raise GraphError("p2 must be the first event")
                g = cls.projective_plane()
            elif kind == "declare":
                if g is not None:
                    raise GraphError("a declared surface cannot follow other events")
                g = cls.declared(event[1], event[2])
            elif g is None:
                raise GraphError("construction must start with p2")
            elif kind == "blowfree":
                g.blowup_free_point(event[1])
            elif kind == "blowedge":
                g.blowup_intersection(event[1], event[2])
            elif kind == "contract":
                g.contract(event[1])
            else:
                raise GraphError(f"unknown event {kind!r}")
        if g is None:
            raise GraphError("empty construction")
        return g

    def copy(self):
        g = SurfaceGraph()
        g.curves = {c.id: CurveNode(c.id, c.kbar, c.self_int, set(c.neighbors))
                    for c in self.curves.values()}
        g.log = list(self.log)
        g._next_id = self._next_id
        return g

    def freeze(self):
        self.frozen = True
        return self

    def _mutable(self):
        if self.frozen:
            raise GraphError("surface is frozen")

    def _add(self, kbar, self_int):
        cid = self._next_id
        self._next_id += 1
        self.curves[cid] = CurveNode(cid, kbar, self_int)
        return cid

    def _get(self, cid):
        try:
            return self.curves[cid]
        except KeyError:
            raise GraphError(f"unknown curve id {cid}") from None

    def blowup_free_point(self, c):
        self._mutable()
        parent = self._get(c)
        new = self._add(parent.kbar + 1, -1)
        parent.self_int -= 1
        parent.neighbors.add(new)
        self.curves[new].neighbors.add(c)
        self.log.append(("blowfree", c))
        self.check_tree()
        return new

    def blowup_intersection(self, c1, c2):
        self._mutable()
        a, b = self._get(c1), self._get(c2)
        if c2 not in a.neighbors:
            raise GraphError(f"curves {c1} and {c2} do not meet")
        new = self._add(a.kbar + b.kbar, -1)
        a.neighbors.discard(c2)
        b.neighbors.discard(c1)
        a.neighbors.add(new)
        b.neighbors.add(new)
        self.curves[new].neighbors = {c1, c2}
        a.self_int -= 1
        b.self_int -= 1
        self.log.append(("blowedge", c1, c2))
        self.check_tree()
        return new

    def contract(self, c):
        self._mutable()
        node = self._get(c)
        if node.self_int != -1:
            raise GraphError(f"curve {c} has self-intersection {node.self_int}, not -1")
        if node.valency >= 3:
            raise GraphError(f"curve {c} meets {node.valency} curves")
        if len(self.curves) == 1:
            raise GraphError("cannot contract the last curve at infinity")
        nbrs = sorted(node.neighbors)
        if len(nbrs) == 2 and nbrs[1] in self.curves[nbrs[0]].neighbors:
            raise GraphError(f"neighbors of {c} already meet")
        for n in nbrs:
            other = self.curves[n]
            other.neighbors.discard(c)
            other.self_int += 1
        if len(nbrs) == 2:
            self.curves[nbrs[0]].neighbors.add(nbrs[1])
            self.curves[nbrs[1]].neighbors.add(nbrs[0])
        del self.curves[c]
        self.log.append(("contract", c))
        self.check_tree()

    # -- queries ---------------------------------------------------------
    def ids(self):
        return sorted(self.curves)

    def edges(self):
        return sorted((a, b) for a in self.curves for b in self.curves[a].neighbors if a < b)

    def kbar(self, c):
        return self._get(c).kbar

    def self_int(self, c):
        return self._get(c).self_int

    def neighbors(self, c):
        return sorted(self._get(c).neighbors)

    def valency(self, c):
        return self._get(c).valency

    def is_script(self):
        return bool(self.log) and self.log[0][0] == "p2"

    def check_tree(self):
        n = len(self.curves)
        if n == 0:
            raise GraphError("surface has no curves")
        for c in self.curves.values():
            for m in c.neighbors:
                if m not in self.curves or c.id not in self.curves[m].neighbors:
                    raise GraphError(f"asymmetric or dangling edge {c.id}-{m}")
        if len(self.edges()) != n - 1:
            raise GraphError("graph is not a tree: wrong edge count")
        start = next(iter(self.curves))
        seen = {start}
        stack = [start]
        while stack:
            for m in self.curves[stack.pop()].neighbors:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        if len(seen) != n:
            raise GraphError("graph is not a tree: disconnected")

    def snapshot(self):
        return (tuple((c.id, c.kbar, c.self_int) for c in sorted(self.curves.values(), key=lambda c: c.id)),
                tuple(self.edges()))


def new_projective_plane():
    return SurfaceGraph.projective_plane()


def selfint_from_labels(g, c):
    """Self-intersection forced by the adjunction identity a*E^2 + sum(a_i) - k = -2."""
    a = g.kbar(c)
    if a == 0:
        raise GraphError(f"curve {c} has K-bar label 0; self-intersection is not determined")
    nbr = [g.kbar(n) for n in g.neighbors(c)]
    num = sum(nbr) - len(nbr) + 2
    if num % a:
        raise GraphError(f"curve {c}: ({num})/({a}) is not an integer")
    return -(num // a)


def adjunction_audit(g):
    """Curves violating a*E^2 + sum of neighbor labels - valency = -2."""
    bad = []
    for c in g.ids():
        node = g.curves[c]
        value = node.kbar * node.self_int + sum(g.kbar(n) for n in node.neighbors) - node.valency
        if value != -2:
            bad.append({"curve": c, "expected": -2, "actual": value})
    return bad


def _center(g):
    ids = g.ids()
    if len(ids) <= 2:
        return ids
    degree = {c: g.valency(c) for c in ids}
    layer = [c for c in ids if degree[c] <= 1]
    remaining = len(ids)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for c in layer:
            for m in g.curves[c].neighbors:
                degree[m] -= 1
                if degree[m] == 1:
                    nxt.append(m)
        layer = nxt
    return sorted(layer)


def _encode(g, root, parent):
    node = g.curves[root]
    children = sorted(_encode(g, m, root) for m in node.neighbors if m != parent)
    return f"({node.kbar},{node.self_int}" + "".join(children) + ")"


def canonical_form(g):
    """AHU encoding of the tree with (kbar, self_int) vertex colors, rooted at its center."""
    centers = _center(g)
    if len(centers) == 1:
        return _encode(g, centers[0], None)
    a, b = centers
    ea, eb = _encode(g, a, b), _encode(g, b, a)
    first, second = sorted((ea, eb))
    return f"[{first}{second}]"
