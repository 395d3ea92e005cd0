"""Reader and writer for the line-oriented framework file format (.kfw).

Blocks::

    [surface NAME]   curve/edge lines, or p2/blowfree/blowedge/contract lines
    [map]            degree, partial, type, pullback lines
    [valuations]     y1 <yid>=<int> ...   and   y2 <yid>=<int> ...
    [chain]          blowedge <ref> <ref>   (refs: Z ids or #k for earlier steps)
    [define]         <name> = <expr>
    [belyi ZID]      profile ..., num = <expr>, den = <expr>
    [candidate]      y1 = <expr>, y2 = <expr>

``#`` starts a comment unless it is immediately followed by a digit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .belyi import RamificationProfile, format_partition, parse_profile
from .expr import ExpressionError, parse_poly
from .exact_arith import VARIABLE_ORDER
from .picard_map import CurveType, FrameworkMap
from .surface_graph import GraphError, SurfaceGraph

_COMMENT = re.compile(r"#(?!\d)")
_INT = re.compile(r"[+-]?\d+$")


class ParseError(ValueError):
    def __init__(self, line, column, message):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass
class MapBlock:
    degree: int | None = None
    partial: bool = False
    types: dict = field(default_factory=dict)
    pullback: dict = field(default_factory=dict)


@dataclass
class BelyiBlock:
    profile: RamificationProfile | None = None
    num: str | None = None
    den: str | None = None


@dataclass
class FrameworkFile:
    surfaces: dict = field(default_factory=dict)
    map: MapBlock | None = None
    valuations: dict | None = None
    chain: list = field(default_factory=list)
    defines: dict = field(default_factory=dict)
    belyi: dict = field(default_factory=dict)
    candidate: dict = field(default_factory=dict)
    name: str = ""

    def framework(self):
        """The FrameworkMap between surfaces Z and Y, or None without a map block."""
        if self.map is None:
            return None
        z, y = self.surfaces["Z"], self.surfaces["Y"]
        return FrameworkMap(z, y, self.map.degree, dict(self.map.types),
                            {F: dict(col) for F, col in self.map.pullback.items()},
                            self.map.partial)

    def valuation_vector(self):
        if not self.valuations:
            return None
        ids = sorted(set(self.valuations.get("y1", {})) | set(self.valuations.get("y2", {})))
        return {i: (self.valuations["y1"].get(i), self.valuations["y2"].get(i)) for i in ids}

    def environment(self):
        env = {}
        for name, text in self.defines.items():
            env[name] = parse_poly(text, env)
        return env

    def structure(self):
        """Comparable summary used for round-trip checks."""
        return (
            {n: (g.snapshot(), tuple(g.log)) for n, g in self.surfaces.items()},
            None if self.map is None else (self.map.degree, self.map.partial,
                                           dict(self.map.types), self.map.pullback),
            self.valuations, list(self.chain), dict(self.defines),
            {k: (v.profile, v.num, v.den) for k, v in self.belyi.items()},
            dict(self.candidate),
        )


# ---------------------------------------------------------------------------
# parsing

class _Reader:
    def __init__(self, text):
        self.ff = FrameworkFile()
        self.block = None
        self.block_arg = None
        self.seen_blocks = set()
        self.surface_lines = {}
        self.text = text

    def error(self, lineno, col, msg):
        raise ParseError(lineno, col, msg)

    def run(self):
        for lineno, raw in enumerate(self.text.splitlines(), start=1):
            m = _COMMENT.search(raw)
            line = raw[:m.start()] if m else raw
            if not line.strip():
                continue
            indent = len(line) - len(line.lstrip())
            stripped = line.strip()
            if stripped.startswith("["):
                self.open_block(lineno, indent + 1, stripped)
            else:
                self.statement(lineno, indent + 1, stripped)
        self.finish_surface()
        self.resolve()
        return self.ff

    # -- blocks ----------------------------------------------------------
    def open_block(self, lineno, col, text):
        self.finish_surface()
        if not text.endswith("]"):
            self.error(lineno, col, "block header must end with ']'")
        words = text[1:-1].split()
        if not words:
            self.error(lineno, col, "empty block header")
        kind, args = words[0], words[1:]
        if kind in ("surface", "belyi"):
            if len(args) != 1:
                self.error(lineno, col, f"[{kind}] takes exactly one argument")
            arg = args[0]
            if kind == "belyi":
                arg = self.int_at(lineno, col, arg)
            key = (kind, arg)
        elif kind in ("map", "valuations", "chain", "define", "candidate"):
            if args:
                self.error(lineno, col, f"[{kind}] takes no argument")
            key = (kind,)
            arg = None
        else:
            self.error(lineno, col, f"unknown block [{kind}]")
        if key in self.seen_blocks:
            self.error(lineno, col, f"duplicate block {text}")
        self.seen_blocks.add(key)
        self.block, self.block_arg = kind, arg
        if kind == "surface":
            self.surface_lines[arg] = {"lineno": lineno, "decl": [], "edges": [], "script": []}
        elif kind == "map":
            self.ff.map = MapBlock()
            self.map_lines = {"types": {}, "pullback": {}, "lineno": lineno}
        elif kind == "valuations":
            self.ff.valuations = {"y1": {}, "y2": {}}
            self.val_lines = {}
        elif kind == "belyi":
            self.ff.belyi[arg] = BelyiBlock()
            self.belyi_lines = getattr(self, "belyi_lines", {})
            self.belyi_lines[arg] = lineno
        elif kind == "chain":
            self.chain_lines = []

    def int_at(self, lineno, col, word):
        if not _INT.match(word):
            self.error(lineno, col, f"expected an integer, got {word!r}")
        return int(word)

    def statement(self, lineno, col, text):
        if self.block is None:
            self.error(lineno, col, "statement outside of any block")
        getattr(self, "st_" + self.block)(lineno, col, text)

    # -- surfaces --------------------------------------------------------
    def st_surface(self, lineno, col, text):
        words = text.split()
        info = self.surface_lines[self.block_arg]
        head = words[0]
        if head == "curve":
            if len(words) != 4:
                self.error(lineno, col, "expected: curve <id> kbar=<int> selfint=<int>")
            cid = self.int_at(lineno, col, words[1])
            kv = self.keyvals(lineno, col, words[2:], {"kbar", "selfint"})
            info["decl"].append((lineno, (cid, kv["kbar"], kv["selfint"])))
        elif head == "edge":
            if len(words) != 3:
                self.error(lineno, col, "expected: edge <id> <id>")
            info["edges"].append((lineno, (self.int_at(lineno, col, words[1]),
                                           self.int_at(lineno, col, words[2]))))
        elif head == "p2":
            if len(words) != 1:
                self.error(lineno, col, "p2 takes no arguments")
            info["script"].append((lineno, ("p2",)))
        elif head in ("blowfree", "contract"):
            if len(words) != 2:
                self.error(lineno, col, f"expected: {head} <id>")
            info["script"].append((lineno, (head, self.int_at(lineno, col, words[1]))))
        elif head == "blowedge":
            if len(words) != 3:
                self.error(lineno, col, "expected: blowedge <id> <id>")
            info["script"].append((lineno, ("blowedge", self.int_at(lineno, col, words[1]),
                                            self.int_at(lineno, col, words[2]))))
        else:
            self.error(lineno, col, f"unknown surface statement {head!r}")

    def keyvals(self, lineno, col, words, allowed, required=None):
        out = {}
        for w in words:
            if "=" not in w:
                self.error(lineno, col, f"expected key=value, got {w!r}")
            k, v = w.split("=", 1)
            if k not in allowed:
                self.error(lineno, col, f"unexpected key {k!r}")
            if k in out:
                self.error(lineno, col, f"repeated key {k!r}")
            out[k] = self.int_at(lineno, col, v)
        need = allowed if required is None else required
        missing = sorted(set(need) - set(out))
        if missing:
            self.error(lineno, col, f"missing {', '.join(missing)}")
        return out

    def finish_surface(self):
        if self.block != "surface":
            return
        name = self.block_arg
        info = self.surface_lines[name]
        if info["script"] and (info["decl"] or info["edges"]):
            self.error(info["lineno"], 1, f"surface {name} mixes a script with curve/edge lines")
        if info["script"]:
            g = None
            for lineno, event in info["script"]:
                try:
                    if g is None:
                        if event[0] != "p2":
                            self.error(lineno, 1, "a construction script must start with p2")
                        g = SurfaceGraph.projective_plane()
                    elif event[0] == "p2":
                        self.error(lineno, 1, "p2 may only appear once")
                    elif event[0] == "blowfree":
                        g.blowup_free_point(event[1])
                    elif event[0] == "blowedge":
                        g.blowup_intersection(event[1], event[2])
                    else:
                        g.contract(event[1])
                except GraphError as exc:
                    self.error(lineno, 1, str(exc))
        elif info["decl"]:
            seen = {}
            for lineno, (cid, _, _) in info["decl"]:
                if cid in seen:
                    self.error(lineno, 1, f"duplicate curve id {cid}")
                seen[cid] = lineno
            for lineno, (a, b) in info["edges"]:
                for c in (a, b):
                    if c not in seen:
                        self.error(lineno, 1, f"edge references unknown curve {c}")
            try:
                g = SurfaceGraph.declared([d for _, d in info["decl"]], [e for _, e in info["edges"]])
            except GraphError as exc:
                self.error(info["lineno"], 1, f"surface {name}: {exc}")
        else:
            self.error(info["lineno"], 1, f"surface {name} is empty")
        self.ff.surfaces[name] = g.freeze()

    # -- map -------------------------------------------------------------
    def st_map(self, lineno, col, text):
        mb = self.ff.map
        words = text.split()
        head = words[0]
        if head == "degree":
            if len(words) != 2 or mb.degree is not None:
                self.error(lineno, col, "expected a single 'degree <int>' line")
            mb.degree = self.int_at(lineno, col, words[1])
        elif head == "partial":
            mb.partial = True
        elif head == "type":
            if len(words) < 3:
                self.error(lineno, col, "expected: type <zid> <kind> ...")
            zid = self.int_at(lineno, col, words[1])
            kind = self.int_at(lineno, col, words[2])
            if zid in mb.types:
                self.error(lineno, col, f"duplicate type for Z curve {zid}")
            if kind == 1:
                kv = self.keyvals(lineno, col, words[3:], {"target", "e", "f"})
                t = CurveType(1, kv["target"], kv["e"], kv["f"])
            elif kind in (2, 4):
                if len(words) != 3:
                    self.error(lineno, col, f"type {kind} takes no data")
                t = CurveType(kind)
            elif kind == 3:
                kv = self.keyvals(lineno, col, words[3:], {"e"})
                t = CurveType(3, e=kv["e"])
            else:
                self.error(lineno, col, f"curve type must be 1-4, got {kind}")
            mb.types[zid] = t
            self.map_lines["types"][zid] = lineno
        elif head == "pullback":
            m = re.match(r"pullback\s+(\S+)\s*:\s*(.*)$", text)
            if not m:
                self.error(lineno, col, "expected: pullback <yid> : <coef>*<zid> + ...")
            yid = self.int_at(lineno, col, m.group(1))
            col_map = mb.pullback.setdefault(yid, {})
            lines = self.map_lines["pullback"].setdefault(yid, {})
            for term in m.group(2).split("+"):
                term = term.strip()
                if not term:
                    self.error(lineno, col, "empty pullback term")
                if "*" in term:
                    c, z = term.split("*", 1)
                    coef = self.int_at(lineno, col, c.strip())
                    zid = self.int_at(lineno, col, z.strip())
                else:
                    coef, zid = 1, self.int_at(lineno, col, term)
                if zid in col_map:
                    self.error(lineno, col, f"Z curve {zid} listed twice in pullback of {yid}")
                col_map[zid] = coef
                lines[zid] = lineno
        else:
            self.error(lineno, col, f"unknown map statement {head!r}")

    # -- valuations, chain -----------------------------------------------
    def st_valuations(self, lineno, col, text):
        words = text.split()
        if words[0] not in ("y1", "y2"):
            self.error(lineno, col, "valuation lines start with y1 or y2")
        store = self.ff.valuations[words[0]]
        for w in words[1:]:
            if "=" not in w:
                self.error(lineno, col, f"expected <yid>=<int>, got {w!r}")
            k, v = w.split("=", 1)
            yid = self.int_at(lineno, col, k)
            if yid in store:
                self.error(lineno, col, f"duplicate {words[0]} valuation for {yid}")
            store[yid] = self.int_at(lineno, col, v)
            self.val_lines[(words[0], yid)] = lineno

    def st_chain(self, lineno, col, text):
        words = text.split()
        if len(words) != 3 or words[0] != "blowedge":
            self.error(lineno, col, "expected: blowedge <ref> <ref>")
        refs = []
        for w in words[1:]:
            if w.startswith("#"):
                k = self.int_at(lineno, col, w[1:])
                if not 1 <= k <= len(self.ff.chain):
                    self.error(lineno, col, f"chain reference {w} does not name an earlier step")
                refs.append(w)
            else:
                refs.append(self.int_at(lineno, col, w))
        self.ff.chain.append(tuple(refs))
        self.chain_lines.append(lineno)

    # -- expressions -----------------------------------------------------
    def assignment(self, lineno, col, text):
        m = re.match(r"([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(.+)$", text)
        if not m:
            self.error(lineno, col, "expected: <name> = <expression>")
        return m.group(1), m.group(2).strip(), col + m.start(2)

    def check_expr(self, lineno, col, text, env):
        try:
            return parse_poly(text, env)
        except ExpressionError as exc:
            self.error(lineno, col + exc.column - 1, exc.message)
        except (ValueError, ZeroDivisionError) as exc:
            self.error(lineno, col, str(exc))

    def st_define(self, lineno, col, text):
        name, expr, ecol = self.assignment(lineno, col, text)
        if name in VARIABLE_ORDER or name == "sqrt":
            self.error(lineno, col, f"{name!r} is reserved")
        if name in self.ff.defines:
            self.error(lineno, col, f"{name!r} defined twice")
        env = getattr(self, "_env", {})
        env[name] = self.check_expr(lineno, ecol, expr, env)
        self._env = env
        self.ff.defines[name] = expr

    def st_belyi(self, lineno, col, text):
        block = self.ff.belyi[self.block_arg]
        if text.startswith("profile"):
            if block.profile is not None:
                self.error(lineno, col, "duplicate profile line")
            try:
                block.profile = parse_profile(text[len("profile"):])
            except ValueError as exc:
                self.error(lineno, col, str(exc))
            return
        name, expr, ecol = self.assignment(lineno, col, text)
        if name not in ("num", "den") or getattr(block, name) is not None:
            self.error(lineno, col, "belyi blocks take one num and one den expression")
        self.check_expr(lineno, ecol, expr, getattr(self, "_env", {}))
        setattr(block, name, expr)

    def st_candidate(self, lineno, col, text):
        name, expr, ecol = self.assignment(lineno, col, text)
        if name not in ("y1", "y2") or name in self.ff.candidate:
            self.error(lineno, col, "candidate block takes one y1 and one y2 expression")
        self.check_expr(lineno, ecol, expr, getattr(self, "_env", {}))
        self.ff.candidate[name] = expr

    # -- cross references ------------------------------------------------
    def resolve(self):
        ff = self.ff
        if ff.map is not None:
            ml = self.map_lines
            for name in ("Z", "Y"):
                if name not in ff.surfaces:
                    self.error(ml["lineno"], 1, f"a map block needs a [surface {name}] block")
            if ff.map.degree is None:
                self.error(ml["lineno"], 1, "map block has no degree")
            z, y = ff.surfaces["Z"], ff.surfaces["Y"]
            for zid, t in ff.map.types.items():
                line = ml["types"][zid]
                if zid not in z.curves:
                    self.error(line, 1, f"type for unknown Z curve {zid}")
                if t.kind == 1 and t.target not in y.curves:
                    self.error(line, 1, f"type-1 target {t.target} is not a Y curve")
            for yid, col in ff.map.pullback.items():
                lines = ml["pullback"][yid]
                if yid not in y.curves:
                    self.error(min(lines.values()), 1, f"pullback of unknown Y curve {yid}")
                for zid in col:
                    if zid not in z.curves:
                        self.error(lines[zid], 1, f"pullback of {yid} uses unknown Z curve {zid}")
                    t = ff.map.types.get(zid)
                    if t is not None and t.kind in (3, 4) and col[zid]:
                        self.error(lines[zid], 1,
                                   f"pullback of {yid} is supported on type-{t.kind} curve {zid}")
        if ff.valuations is not None:
            y = ff.surfaces.get("Y")
            if y is None:
                self.error(1, 1, "valuations need a [surface Y] block")
            for (which, yid), line in self.val_lines.items():
                if yid not in y.curves:
                    self.error(line, 1, f"{which} valuation for unknown Y curve {yid}")
            for yid in y.curves:
                for which in ("y1", "y2"):
                    if yid not in ff.valuations[which]:
                        self.error(1, 1, f"no {which} valuation for Y curve {yid}")
        if ff.chain:
            z = ff.surfaces.get("Z")
            if z is None:
                self.error(self.chain_lines[0], 1, "a chain needs a [surface Z] block")
            for line, refs in zip(self.chain_lines, ff.chain):
                for r in refs:
                    if isinstance(r, int) and r not in z.curves:
                        self.error(line, 1, f"chain step references unknown Z curve {r}")
        for zid, block in ff.belyi.items():
            line = self.belyi_lines[zid]
            if "Z" not in ff.surfaces or zid not in ff.surfaces["Z"].curves:
                self.error(line, 1, f"belyi block for unknown Z curve {zid}")
            if block.profile is None and block.num is None:
                self.error(line, 1, "belyi block needs a profile or a num/den pair")
            if (block.num is None) != (block.den is None):
                self.error(line, 1, "belyi block needs both num and den")
        if ff.candidate and set(ff.candidate) != {"y1", "y2"}:
            self.error(1, 1, "candidate block needs both y1 and y2")


def parse(text, name=""):
    ff = _Reader(text).run()
    ff.name = name
    return ff


# ---------------------------------------------------------------------------
# writing

def _surface_lines(g):
    if g.is_script():
        out = []
        for event in g.log:
            out.append(" ".join(str(x) for x in event))
        return out
    out = [f"curve {c} kbar={g.kbar(c)} selfint={g.self_int(c)}" for c in g.ids()]
    out += [f"edge {a} {b}" for a, b in g.edges()]
    return out


def serialize(ff):
    out = []
    for name, g in ff.surfaces.items():
        out.append(f"[surface {name}]")
        out.extend(_surface_lines(g))
        out.append("")
    if ff.map is not None:
        mb = ff.map
        out.append("[map]")
        out.append(f"degree {mb.degree}")
        if mb.partial:
            out.append("partial")
        for zid in sorted(mb.types):
            t = mb.types[zid]
            if t.kind == 1:
                out.append(f"type {zid} 1 target={t.target} e={t.e} f={t.f}")
            elif t.kind == 3:
                out.append(f"type {zid} 3 e={t.e}")
            else:
                out.append(f"type {zid} {t.kind}")
        for yid in sorted(mb.pullback):
            terms = " + ".join(f"{c}*{z}" for z, c in sorted(mb.pullback[yid].items()))
            out.append(f"pullback {yid} : {terms}")
        out.append("")
    if ff.valuations is not None:
        out.append("[valuations]")
        for which in ("y1", "y2"):
            vals = ff.valuations[which]
            out.append(which + " " + " ".join(f"{k}={vals[k]}" for k in sorted(vals)))
        out.append("")
    if ff.chain:
        out.append("[chain]")
        for a, b in ff.chain:
            out.append(f"blowedge {a} {b}")
        out.append("")
    if ff.defines:
        out.append("[define]")
        for name, text in ff.defines.items():
            out.append(f"{name} = {text}")
        out.append("")
    for zid, block in ff.belyi.items():
        out.append(f"[belyi {zid}]")
        if block.profile is not None:
            p = block.profile
            out.append(f"profile deg={p.n} over0={format_partition(p.over0)} "
                       f"over1={format_partition(p.over1)} overInf={format_partition(p.overinf)}")
        if block.num is not None:
            out.append(f"num = {block.num}")
            out.append(f"den = {block.den}")
        out.append("")
    if ff.candidate:
        out.append("[candidate]")
        for k in ("y1", "y2"):
            out.append(f"{k} = {ff.candidate[k]}")
        out.append("")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# bundled datasets

def bundled_names():
    return sorted(p.name for p in resources.files("kfv").joinpath("data").iterdir()
                  if p.name.endswith(".kfw"))


def read_text(path_or_name):
    """Read a .kfw file from disk, falling back to the bundled datasets."""
    p = Path(path_or_name)
    if p.exists():
        return p.read_text(encoding="utf-8"), p.name
    name = p.name if p.name.endswith(".kfw") else p.name + ".kfw"
    res = resources.files("kfv").joinpath("data", name)
    if res.is_file():
        return res.read_text(encoding="utf-8"), name
    raise FileNotFoundError(f"no such file or bundled dataset: {path_or_name}")


def load(path_or_name):
    text, name = read_text(path_or_name)
    return parse(text, name)
