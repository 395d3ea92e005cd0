"""Candidate maps between Picard groups of a source Z and a target Y.

The pullback P is stored by Y-curve: ``pullback[F][E]`` is the coefficient
of E in phi^*(F).  The pushforward Q is never stored; it follows from the
curve types: Q[F, E] = f(E) when E is type 1 over F, 0 for types 2 and 4,
and undefined for type 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .intersection import is_negative_definite
from .surface_graph import GraphError, SurfaceGraph

PASS, FAIL, INFO = "pass", "fail", "info"


class StructuralError(ValueError):
    """A framework whose data cannot be checked at all."""


@dataclass(frozen=True)
class CurveType:
    kind: int
    target: int | None = None
    e: int | None = None
    f: int | None = None


@dataclass
class Violation:
    check: str
    curves: tuple
    expected: object
    actual: object

    def to_dict(self):
        return {"check": self.check, "curves": list(self.curves),
                "expected": self.expected, "actual": self.actual}


@dataclass
class CheckResult:
    name: str
    status: str
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def failed(self):
        return self.status == FAIL

    def to_dict(self):
        return {"check": self.name, "status": self.status,
                "violations": [v.to_dict() for v in self.violations],
                "notes": list(self.notes), "data": self.data}


def result(name, violations, notes=(), data=None, informational=False):
    violations = sorted(violations, key=lambda v: (tuple(str(c) for c in v.curves), str(v.expected)))
    if informational:
        status = INFO
    else:
        status = FAIL if violations else PASS
    return CheckResult(name, status, violations, list(notes), data or {})


@dataclass
class FrameworkMap:
    source: SurfaceGraph
    target: SurfaceGraph
    degree: int
    types: dict
    pullback: dict
    partial: bool = False

    def __post_init__(self):
        self.rows = {}
        for F, col in self.pullback.items():
            for E, c in col.items():
                self.rows.setdefault(E, {})[F] = c

    def P(self, E, F):
        return self.pullback.get(F, {}).get(E, 0)

    def columns(self):
        return sorted(self.pullback)

    def typed(self, *kinds):
        return sorted(E for E, t in self.types.items() if t.kind in kinds)

    def validate(self):
        """Raise StructuralError if the data is not even checkable."""
        z, y = self.source, self.target
        problems = []
        if self.degree < 1:
            problems.append(f"degree must be positive, got {self.degree}")
        for E, t in self.types.items():
            if E not in z.curves:
                problems.append(f"type given for unknown Z curve {E}")
            if t.kind not in (1, 2, 3, 4):
                problems.append(f"Z curve {E}: type {t.kind} is not 1-4")
            if t.kind == 1:
                if t.target not in y.curves:
                    problems.append(f"Z curve {E}: target {t.target} is not a Y curve")
                if not t.e or t.e < 1 or not t.f or t.f < 1:
                    problems.append(f"Z curve {E}: type 1 needs positive e and f")
            if t.kind == 3 and (not t.e or t.e < 1):
                problems.append(f"Z curve {E}: type 3 needs positive e")
        if not self.partial:
            untyped = sorted(set(z.curves) - set(self.types))
            if untyped:
                problems.append(f"Z curves without a type: {untyped}")
            missing = sorted(set(y.curves) - set(self.pullback))
            if missing:
                problems.append(f"Y curves without a pullback: {missing}")
        for F, col in self.pullback.items():
            if F not in y.curves:
                problems.append(f"pullback of unknown Y curve {F}")
            for E, c in col.items():
                if E not in z.curves:
                    problems.append(f"pullback of {F} uses unknown Z curve {E}")
                    continue
                if c < 0:
                    problems.append(f"negative coefficient {c} of {E} in pullback of {F}")
                kind = self.types.get(E, CurveType(0)).kind
                if kind in (3, 4) and c:
                    problems.append(f"pullback of {F} is supported on type-{kind} curve {E}")
        if problems:
            raise StructuralError("; ".join(problems))

    def coverage_notes(self):
        notes = []
        ncol, ny = len(self.pullback), len(self.target.curves)
        ntyped, nz = len(self.types), len(self.source.curves)
        notes.append(f"pullback columns given: {ncol}/{ny}")
        notes.append(f"typed Z curves: {ntyped}/{nz}")
        if self.partial:
            notes.append("map flagged partial: checks restricted to the given rows and columns")
        return notes


def gz_times_p(m, columns=None):
    """(G_Z P)[E][F] = E . phi^*(F) for every Z curve E, sparse."""
    z = m.source
    cols = m.columns() if columns is None else columns
    out = {}
    for E in z.ids():
        row = {}
        nbrs = z.neighbors(E)
        s = z.self_int(E)
        for F in cols:
            col = m.pullback.get(F, {})
            val = s * col.get(E, 0) + sum(col.get(n, 0) for n in nbrs)
            if val:
                row[F] = val
        out[E] = row
    return out


def _gram_entry(g, a, b):
    if a == b:
        return g.self_int(a)
    return 1 if b in g.curves[a].neighbors else 0


def verify_degree_identity(m):
    """Q . P = d . Id on the given Y columns."""
    name = "degree_identity"
    for E in m.typed(3):
        if m.rows.get(E):
            raise StructuralError(f"pullback supported on type-3 curve {E}")
    cols = m.columns()
    qp = {}
    for E in m.typed(1):
        t = m.types[E]
        for F2, c in m.rows.get(E, {}).items():
            qp[(t.target, F2)] = qp.get((t.target, F2), 0) + t.f * c
    bad = []
    for F in cols:
        for F2 in cols:
            want = m.degree if F == F2 else 0
            got = qp.get((F, F2), 0)
            if got != want:
                bad.append(Violation(name, (F, F2), want, got))
    notes = [f"Q.P = {m.degree}.Id on {len(cols)} Y curves"] if not bad else []
    return result(name, bad, notes, {"degree": m.degree})


def verify_projection_formula(m, gp=None):
    """(a) P^T G_Z P = d G_Y and (b) E.phi^*(F) = phi_*(E).F for types 1, 2, 4."""
    z, y = m.source, m.target
    cols = m.columns()
    gp = gp or gz_times_p(m, cols)
    bad_a = []
    for F in cols:
        col = m.pullback[F]
        for F2 in cols:
            lhs = sum(c * gp[E].get(F2, 0) for E, c in col.items())
            rhs = m.degree * _gram_entry(y, F, F2)
            if lhs != rhs:
                bad_a.append(Violation("projection_pullback", (F, F2), rhs, lhs))
    bad_b = []
    for E in m.typed(1, 2, 4):
        t = m.types[E]
        for F in cols:
            lhs = gp[E].get(F, 0)
            rhs = t.f * _gram_entry(y, t.target, F) if t.kind == 1 else 0
            if lhs != rhs:
                bad_b.append(Violation("projection_pushforward", (E, F), rhs, lhs))
    ra = result("projection_pullback", bad_a,
                [] if bad_a else [f"P^T G_Z P = {m.degree} G_Y holds entrywise"])
    rb = result("projection_pushforward", bad_b,
                [] if bad_b else ["G_Z P = Q^T G_Y on all type 1, 2, 4 rows"])
    return ra, rb


def verify_label_compatibility(m):
    z, y = m.source, m.target
    bad = []
    for E in m.typed(1):
        t = m.types[E]
        want = t.e * y.kbar(t.target)
        if z.kbar(E) != want:
            bad.append(Violation("label_compatibility", (E, t.target), want, z.kbar(E)))
        if t.target in m.pullback and m.P(E, t.target) != t.e:
            bad.append(Violation("label_compatibility", (E, t.target), {"P": t.e}, {"P": m.P(E, t.target)}))
        if set(m.rows.get(E, {})) - {t.target}:
            bad.append(Violation("label_compatibility", (E,), {"row_support": [t.target]},
                                 {"row_support": sorted(m.rows[E])}))
    return result("label_compatibility", bad,
                  [] if bad else [f"kbar(E) = e.kbar(F) and P[E,F] = e on {len(m.typed(1))} type-1 curves"])


def verify_fiber_degrees(m):
    sums = {}
    for E in m.typed(1):
        t = m.types[E]
        sums[t.target] = sums.get(t.target, 0) + t.e * t.f
    bad = [Violation("fiber_degrees", (F,), m.degree, s) for F, s in sorted(sums.items()) if s != m.degree]
    notes = []
    missed = sorted(set(m.target.curves) - set(sums))
    if missed and not m.partial:
        notes.append(f"Y curves with no type-1 preimage: {missed}")
    if not bad:
        notes.append(f"sum of e.f = {m.degree} over each of {len(sums)} hit Y curves")
    return result("fiber_degrees", bad, notes, {"sums": {str(k): v for k, v in sorted(sums.items())}})


def dicritical_profile(m, gp=None):
    y = m.target
    gp = gp or gz_times_p(m)
    bad = []
    vectors = {}
    for E in m.typed(3):
        vec = {F: v for F, v in sorted(gp[E].items())}
        vectors[str(E)] = {str(F): v for F, v in vec.items()}
        for F, v in vec.items():
            if v < 0:
                bad.append(Violation("dicritical", (E, F), ">= 0", v))
            elif y.kbar(F) != 0:
                bad.append(Violation("dicritical", (E, F), "only K-bar 0 curves", {"kbar": y.kbar(F), "value": v}))
    notes = [f"E{E}: {vec}" for E, vec in vectors.items()]
    return result("dicritical", bad, notes, {"vectors": vectors})


def kbar_pullback_report(m):
    """Coefficient of E in phi^*(K-bar_Y) against kbar(E).

    Required to match for type-1 curves, type-2 curves with kbar <= 0, and
    type-3 curves (after adding e); other mismatches are listed as notes.
    """
    z, y = m.source, m.target
    bad, notes = [], []
    for E in z.ids():
        t = m.types.get(E)
        if t is None:
            continue
        coef = sum(y.kbar(F) * c for F, c in m.rows.get(E, {}).items())
        want = coef + (t.e if t.kind == 3 else 0)
        if want == z.kbar(E):
            continue
        enforced = t.kind in (1, 3) or (t.kind == 2 and z.kbar(E) <= 0)
        if enforced:
            bad.append(Violation("kbar_pullback", (E,), z.kbar(E), want))
        else:
            notes.append(f"E{E} (type {t.kind}, kbar {z.kbar(E)}): pullback coefficient {want}")
    return result("kbar_pullback", bad, notes)


def propagate_valuations(m, v):
    """v_Z(E) = sum over F of P[E,F] v_Y(F), componentwise."""
    width = len(next(iter(v.values()))) if v else 2
    out = {}
    for E in m.source.ids():
        acc = [0] * width
        for F, c in m.rows.get(E, {}).items():
            for i, x in enumerate(v[F]):
                acc[i] += c * x
        out[E] = tuple(acc)
    return out


@dataclass
class DegreeChain:
    steps: list
    pairs: list
    separate: tuple | None

    @property
    def total(self):
        return tuple(-x for x in self.pairs[-1]) if self.pairs else None


def degree_pair(m, v, chain):
    """Re-create contracted curves by edge blowups and sum valuations along the way."""
    vz = propagate_valuations(m, v)
    g = m.source.copy()
    g.frozen = False
    refs = {}

    def resolve(ref):
        if isinstance(ref, str) and ref.startswith("#"):
            if ref not in refs:
                raise GraphError(f"chain reference {ref} used before it exists")
            return refs[ref]
        if ref not in g.curves:
            raise GraphError(f"chain step references unknown curve {ref}")
        return ref

    steps, pairs = [], []
    for i, (a, b) in enumerate(chain, start=1):
        ia, ib = resolve(a), resolve(b)
        new = g.blowup_intersection(ia, ib)
        vz[new] = tuple(x + y for x, y in zip(vz[ia], vz[ib]))
        refs[f"#{i}"] = new
        steps.append({"step": f"#{i}", "parents": [a, b], "kbar": g.kbar(new), "valuation": vz[new]})
        pairs.append(vz[new])
    separate = None
    if chain:
        a, b = (resolve(r) for r in chain[-1])
        separate = tuple((-vz[a][i], -vz[b][i]) for i in range(len(vz[a])))
    return DegreeChain(steps, pairs, separate)


def valuation_edge_rule(y, v):
    """On a scripted Y, a curve made by an edge blowup has the sum of its parents' valuations."""
    bad = []
    for new, kind, parents in creation_events(y):
        if kind != "blowedge" or new not in y.curves:
            continue
        if any(p not in v for p in parents) or new not in v:
            continue
        want = tuple(a + b for a, b in zip(v[parents[0]], v[parents[1]]))
        if tuple(v[new]) != want:
            bad.append(Violation("valuation_edge_rule", (new,) + tuple(parents), want, tuple(v[new])))
    return result("valuation_edge_rule", bad)


def creation_events(g):
    """(new id, event kind, parent ids) for each curve-creating event of a script."""
    if not g.is_script():
        return []
    h = None
    out = []
    for event in g.log:
        if event[0] == "p2":
            h = SurfaceGraph.projective_plane()
            out.append((1, "p2", ()))
        elif event[0] == "blowfree":
            out.append((h.blowup_free_point(event[1]), "blowfree", (event[1],)))
        elif event[0] == "blowedge":
            out.append((h.blowup_intersection(event[1], event[2]), "blowedge", (event[1], event[2])))
        elif event[0] == "contract":
            h.contract(event[1])
    return out


def line_complement_definite(m):
    """Whether removing the type-1 preimages of Y's original line leaves a definite form."""
    y = m.target
    if not y.is_script() or 1 not in y.curves:
        return result("line_complement_definite", [], ["Y has no scripted original line"], informational=True)
    removed = sorted(E for E in m.typed(1) if m.types[E].target == 1)
    rest = set(m.source.ids()) - set(removed)
    value = is_negative_definite(m.source, rest)
    notes = [f"removed {len(removed)} curves over the original line: {removed}",
             f"intersection form on the remaining {len(rest)} curves negative definite: {value}"]
    data = {"removed": removed, "definite": value}
    if not value:
        notes.append("disagrees with the expected negative definite complement")
        dicritical = m.typed(3)
        also = is_negative_definite(m.source, rest - set(dicritical))
        notes.append(f"with the type-3 curves {dicritical} also removed: {also}")
        data["definite_without_type3"] = also
    return result("line_complement_definite", [], notes, data, informational=True)
