"""Run every check on a parsed framework file and assemble a report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .belyi import check_riemann_hurwitz, profile_from_framework, verify_rational_belyi
from .exact_arith import format_scalar, jacobian
from .expr import parse_poly
from .intersection import determinant_labels, full_determinant, parity_check, target_admissibility
from .picard_map import (
    FAIL, INFO, PASS, CheckResult, StructuralError, Violation, degree_pair, dicritical_profile,
    gz_times_p, kbar_pullback_report, line_complement_definite, result, valuation_edge_rule,
    verify_degree_identity, verify_fiber_degrees, verify_label_compatibility,
    verify_projection_formula,
)
from .surface_graph import GraphError, adjunction_audit

REPORT_VERSION = 1


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def exit_code(self):
        if self.error is not None:
            return 2
        return 1 if any(c.status == FAIL for c in self.checks) else 0

    def check(self, name):
        return next(c for c in self.checks if c.name == name)

    def to_dict(self):
        return {"report_version": REPORT_VERSION, "file": self.name, "exit_code": self.exit_code,
                "error": self.error, "checks": [c.to_dict() for c in self.checks],
                "summary": self.summary}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, default=_jsonable)

    def to_text(self):
        lines = [f"kfv report (report_version {REPORT_VERSION}): {self.name}"]
        if self.error is not None:
            lines.append(f"error: {self.error}")
        for c in self.checks:
            lines.append(f"[{c.status}] {c.name}")
            for note in c.notes:
                lines.append(f"    {note}")
            for v in c.violations[:20]:
                lines.append(f"    violation at {_curves(v.curves)}: expected {v.expected}, got {v.actual}")
            if len(c.violations) > 20:
                lines.append(f"    ... {len(c.violations) - 20} more violations")
        s = self.summary
        if "chain_pole_orders" in s:
            lines.append("chain_pole_orders: " + " ".join(_pair(p) for p in s["chain_pole_orders"]))
        if "degree_pair" in s:
            lines.append(f"degree_pair: {_pair(s['degree_pair'])}")
        if "separate_degrees" in s:
            y1, y2 = s["separate_degrees"]
            lines.append(f"separate_degrees: y1 {_pair(y1)} y2 {_pair(y2)}")
        if "jacobian" in s:
            lines.append(f"jacobian: {s['jacobian']}")
        counts = {}
        for c in self.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
        lines.append("result: " + ("ERROR" if self.exit_code == 2 else "FAIL" if self.exit_code else "PASS")
                     + f" ({counts.get(PASS, 0)} pass, {counts.get(FAIL, 0)} fail, {counts.get(INFO, 0)} info)")
        return "\n".join(lines) + "\n"


def _pair(p):
    return "(" + ",".join(str(x) for x in p) + ")"


def _curves(curves):
    return ",".join(str(c) for c in curves)


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    return str(x)


def _surface_checks(ff, report):
    labels = {}
    for name, g in ff.surfaces.items():
        bad = [Violation("adjunction", (r["curve"],), r["expected"], r["actual"]) for r in adjunction_audit(g)]
        report.checks.append(result(f"adjunction[{name}]", bad,
                                    [] if bad else [f"adjunction holds on all {len(g.curves)} curves"]))
    for name, g in ff.surfaces.items():
        labels[name] = determinant_labels(g)
    if "Y" in ff.surfaces:
        report.checks.append(_admissibility("Y", ff.surfaces["Y"], labels["Y"]))
    for name, g in ff.surfaces.items():
        bad = [Violation("parity", (r["curve"],), "kbar + det odd", {"kbar": r["kbar"], "det": r["det_label"]})
               for r in parity_check(g, labels[name])]
        report.checks.append(result(f"parity[{name}]", bad,
                                    [] if bad else [f"kbar + det label odd on all {len(g.curves)} curves"]))
    for name, g in ff.surfaces.items():
        det = full_determinant(g)
        bad = [] if det == -1 else [Violation("unimodular", (), -1, det)]
        report.checks.append(result(f"unimodular[{name}]", bad, [f"det(-G) = {det}"]))
    return labels


def _admissibility(name, g, labels):
    adm = target_admissibility(g, labels)
    bad = [Violation("admissibility", (c,), "kbar <= 0", g.kbar(c)) for c in adm["positive_kbar"]]
    bad += [Violation("admissibility", (c,), "det label >= 0", labels[c]) for c in adm["negative_det"]]
    bad += [Violation("admissibility", (c,), "valency <= 3", g.valency(c)) for c in adm["high_valency"]]
    notes = [f"zero determinant labels: {adm['zero_det']}"] if adm["zero_det"] else []
    return result(f"admissibility[{name}]", bad, notes)


def _map_checks(ff, m, report):
    m.validate()
    if m.partial or len(m.types) < len(m.source.curves) or len(m.pullback) < len(m.target.curves):
        report.checks.append(CheckResult("coverage", INFO, [], m.coverage_notes()))
    gp = gz_times_p(m)
    report.checks.append(verify_degree_identity(m))
    report.checks.extend(verify_projection_formula(m, gp))
    report.checks.append(verify_label_compatibility(m))
    report.checks.append(verify_fiber_degrees(m))
    dic = dicritical_profile(m, gp)
    z = m.source
    dic.notes = [f"E{E} (kbar {z.kbar(int(E))}): " + ", ".join(
        f"Y{F} (kbar {m.target.kbar(int(F))}) -> {v}" for F, v in vec.items())
        for E, vec in dic.data["vectors"].items()]
    report.checks.append(dic)
    kp = kbar_pullback_report(m)
    report.checks.append(kp)
    report.checks.append(line_complement_definite(m))


def _belyi_checks(ff, m, report):
    env = ff.environment()
    for zid, block in ff.belyi.items():
        name = f"belyi[{zid}]"
        bad, notes, data = [], [], {}
        fw = None
        if m is not None and m.types.get(zid) is not None and m.types[zid].kind == 1:
            try:
                fw = profile_from_framework(m, zid)
                notes.append(f"from framework: {fw} (over Y{fw.tags[0]}, Y{fw.tags[1]}, Y{fw.tags[2]})")
                if not check_riemann_hurwitz(fw):
                    bad.append(Violation(name, (zid,), "Riemann-Hurwitz", str(fw)))
            except ValueError as exc:
                bad.append(Violation(name, (zid,), "framework profile", str(exc)))
        if block.profile is not None:
            p = block.profile
            notes.append(f"declared: {p}")
            if not check_riemann_hurwitz(p):
                bad.append(Violation(name, (zid,), "Riemann-Hurwitz", str(p)))
            if fw is not None and fw.key() != p.key():
                bad.append(Violation(name, (zid,), str(p), str(fw)))
        if block.num is not None:
            num, den = parse_poly(block.num, env), parse_poly(block.den, env)
            try:
                rp = verify_rational_belyi(num, den)
                notes.append(f"rational map: {rp}")
                target = block.profile or fw
                if target is not None and rp.key() != target.key():
                    bad.append(Violation(name, (zid,), str(target), str(rp)))
                data["rational_profile"] = str(rp)
                diff = num - den
                data["deg_num_minus_den"] = diff.degree()
                notes.append(f"deg(num - den) = {diff.degree()}")
            except ValueError as exc:
                bad.append(Violation(name, (zid,), "rational Belyi map", str(exc)))
        report.checks.append(result(name, bad, notes, data))
    if m is None:
        return
    covered = set(ff.belyi)
    bad, notes = [], []
    for E in m.typed(1):
        F = m.types[E].target
        if E in covered or m.target.valency(F) != 3:
            continue
        try:
            p = profile_from_framework(m, E)
        except ValueError as exc:
            bad.append(Violation("belyi_trivalent", (E,), "computable profile", str(exc)))
            continue
        if not check_riemann_hurwitz(p):
            bad.append(Violation("belyi_trivalent", (E,), "Riemann-Hurwitz", str(p)))
        else:
            notes.append(f"E{E} over Y{F}: {p}")
    report.checks.append(result("belyi_trivalent", bad, notes))


def _degree_checks(ff, m, report):
    v = ff.valuation_vector()
    if v is None:
        return None
    report.checks.append(valuation_edge_rule(ff.surfaces["Y"], v))
    if not ff.chain or m is None:
        return None
    try:
        chain = degree_pair(m, v, ff.chain)
    except GraphError as exc:
        report.checks.append(result("degree_chain", [Violation("degree_chain", (), "valid chain", str(exc))]))
        return None
    bad = []
    last = chain.steps[-1]
    if last["kbar"] != -2:
        bad.append(Violation("degree_chain", (last["step"],), "final kbar -2", last["kbar"]))
    notes = [f"{s['step']} = blowedge {s['parents'][0]} {s['parents'][1]}: kbar {s['kbar']}, "
             f"valuations {_pair(s['valuation'])}" for s in chain.steps]
    report.checks.append(result("degree_chain", bad, notes,
                                {"pairs": chain.pairs, "separate": chain.separate}))
    report.summary["chain_pole_orders"] = [tuple(-x for x in p) for p in chain.pairs]
    report.summary["degree_pair"] = chain.total
    report.summary["separate_degrees"] = chain.separate
    return chain


def _candidate_check(ff, chain, report):
    if not ff.candidate:
        return
    env = ff.environment()
    y1, y2 = parse_poly(ff.candidate["y1"], env), parse_poly(ff.candidate["y2"], env)
    bad, notes = [], []
    union = (y1 + y2).vars
    if len(union) != 2:
        bad.append(Violation("candidate_jacobian", (), "two variables", union))
        report.checks.append(result("candidate_jacobian", bad))
        return
    j = jacobian(y1, y2)
    if len(j.terms) != 1:
        bad.append(Violation("candidate_jacobian", (), "a single monomial", f"{len(j.terms)} terms"))
    else:
        (exps, c), = j.terms.items()
        mono = "*".join(f"{x}^{e}" for x, e in zip(j.vars, exps) if e)
        text = f"{format_scalar(c)}*{mono}" if mono else format_scalar(c)
        notes.append(f"jacobian = {text}")
        report.summary["jacobian"] = text
    degs = tuple(tuple(p.degree(x) for x in union) for p in (y1, y2))
    notes.append(f"degrees in ({','.join(union)}): y1 {_pair(degs[0])} y2 {_pair(degs[1])}")
    if chain is not None and chain.separate is not None:
        want = tuple(tuple(sorted(d)) for d in chain.separate)
        got = tuple(tuple(sorted(d)) for d in degs)
        if want != got:
            bad.append(Violation("candidate_jacobian", (), {"separate_degrees": chain.separate},
                                 {"separate_degrees": degs}))
    report.checks.append(result("candidate_jacobian", bad, notes))


def verify(ff):
    """All checks in a fixed order. Structural problems put the report in error state."""
    report = Report(ff.name)
    try:
        _surface_checks(ff, report)
        m = ff.framework()
        if m is not None:
            _map_checks(ff, m, report)
        _belyi_checks(ff, m, report)
        chain = _degree_checks(ff, m, report)
        _candidate_check(ff, chain, report)
    except StructuralError as exc:
        report.error = f"structural error: {exc}"
    return report
