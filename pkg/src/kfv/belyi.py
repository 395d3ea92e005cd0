"""Three-point ramification data on trivalent target curves."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, prod

from .exact_arith import gcd_univariate, multiplicity_profile

FOUND = "found"
EXHAUSTED = "not-found-exhausted"
BUDGET = "budget-exceeded"
DEFAULT_BUDGET = 10**8


def _part(parts):
    return tuple(sorted((int(x) for x in parts), reverse=True))


@dataclass(frozen=True)
class RamificationProfile:
    n: int
    over0: tuple
    over1: tuple
    overinf: tuple
    tags: tuple = (None, None, None)

    def __post_init__(self):
        object.__setattr__(self, "over0", _part(self.over0))
        object.__setattr__(self, "over1", _part(self.over1))
        object.__setattr__(self, "overinf", _part(self.overinf))
        for name, p in zip(("over0", "over1", "overInf"), self.partitions()):
            if sum(p) != self.n or any(x < 1 for x in p):
                raise ValueError(f"{name}={format_partition(p)} is not a partition of {self.n}")

    def partitions(self):
        return (self.over0, self.over1, self.overinf)

    def key(self):
        """Comparison key up to permuting the three branch points."""
        return (self.n, tuple(sorted(self.partitions())))

    def __str__(self):
        return (f"deg={self.n} over0={format_partition(self.over0)} "
                f"over1={format_partition(self.over1)} overInf={format_partition(self.overinf)}")


def format_partition(parts):
    out = []
    for value in sorted(set(parts), reverse=True):
        count = parts.count(value)
        out.append(str(value) if count == 1 else f"{value}^{count}")
    return ",".join(out)


def parse_partition(text):
    parts = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError(f"empty part in partition {text!r}")
        if "^" in chunk:
            value, count = chunk.split("^", 1)
            parts.extend([int(value)] * int(count))
        else:
            parts.append(int(chunk))
    return _part(parts)


def parse_profile(text):
    """Read ``deg=16 over0=2^8 over1=13,1^3 overInf=3^5,1``."""
    fields = {}
    for token in text.split():
        if "=" not in token:
            raise ValueError(f"expected key=value, got {token!r}")
        key, value = token.split("=", 1)
        fields[key] = value
    missing = {"deg", "over0", "over1", "overInf"} - set(fields)
    if missing:
        raise ValueError(f"profile is missing {sorted(missing)}")
    extra = set(fields) - {"deg", "over0", "over1", "overInf"}
    if extra:
        raise ValueError(f"unknown profile keys {sorted(extra)}")
    return RamificationProfile(int(fields["deg"]), parse_partition(fields["over0"]),
                               parse_partition(fields["over1"]), parse_partition(fields["overInf"]))


def check_riemann_hurwitz(p):
    """Genus-0 three-point cover condition: sum of (n - #parts) equals 2n - 2."""
    return sum(p.n - len(q) for q in p.partitions()) == 2 * p.n - 2


def profile_from_framework(m, E):
    """Profile of phi restricted to the type-1 curve E over its trivalent target."""
    t = m.types.get(E)
    if t is None or t.kind != 1:
        raise ValueError(f"Z curve {E} is not of type 1")
    F = t.target
    y, z = m.target, m.source
    fn = y.neighbors(F)
    if len(fn) != 3:
        raise ValueError(f"target {F} of E{E} meets {len(fn)} curves, not 3")
    parts = {F2: [] for F2 in fn}
    for E2 in z.neighbors(E):
        for F2 in fn:
            c = m.P(E2, F2)
            if c:
                if c % t.e:
                    raise ValueError(f"e(E{E}) = {t.e} does not divide P[{E2},{F2}] = {c}")
                parts[F2].append(c // t.e)
    for F2, q in parts.items():
        if sum(q) != t.f:
            raise ValueError(f"parts over Y curve {F2} sum to {sum(q)}, not f = {t.f}")
    return RamificationProfile(t.f, parts[fn[0]], parts[fn[1]], parts[fn[2]], tuple(fn))


def _parts_from(poly, n):
    parts = []
    for mult, share in multiplicity_profile(poly):
        parts.extend([mult] * share)
    at_infinity = n - poly.degree()
    if at_infinity > 0:
        parts.append(at_infinity)
    return parts


def verify_rational_belyi(num, den):
    """Profile of t -> num/den over 0, 1 and infinity, by squarefree decomposition."""
    if num.is_zero() or den.is_zero():
        raise ValueError("numerator and denominator must be nonzero")
    g = gcd_univariate(num, den)
    if g.degree() > 0:
        raise ValueError(f"numerator and denominator share the factor {g}")
    n = max(num.degree(), den.degree())
    if n == 0:
        raise ValueError("constant map")
    diff = num - den
    if diff.is_zero():
        raise ValueError("map is identically 1")
    return RamificationProfile(n, _parts_from(num, n), _parts_from(diff, n), _parts_from(den, n),
                               ("0", "1", "inf"))


def isotope_profile(k):
    if not 2 <= k <= 6:
        raise ValueError(f"k must be in 2..6, got {k}")
    return RamificationProfile(13, [3] * (6 - k) + [1] * (3 * k - 5),
                               [2 * k + 1] + [1] * (12 - 2 * k), [13])


# ---------------------------------------------------------------------------
# permutation triples

def cycle_type(perm):
    seen = [False] * len(perm)
    lengths = []
    for s in range(len(perm)):
        if not seen[s]:
            n = 0
            x = s
            while not seen[x]:
                seen[x] = True
                x = perm[x]
                n += 1
            lengths.append(n)
    return _part(lengths)


def compose(a, b):
    """a after b: x -> a[b[x]]."""
    return [a[x] for x in b]


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return out


def is_transitive(perms, n):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i, x in enumerate(p):
            parent[find(i)] = find(x)
    return len({find(i) for i in range(n)}) == 1


def canonical_permutation(parts):
    """Lexicographically smallest permutation with the given cycle type."""
    perm = []
    start = 0
    for length in sorted(parts):
        perm.extend(range(start + 1, start + length))
        perm.append(start)
        start += length
    return perm


def _class_size(parts, n):
    counts = {}
    for x in parts:
        counts[x] = counts.get(x, 0) + 1
    return factorial(n) // prod(x**c * factorial(c) for x, c in counts.items())


def cycles(perm):
    seen = set()
    out = []
    for s in range(len(perm)):
        if s not in seen:
            cyc = []
            x = s
            while x not in seen:
                seen.add(x)
                cyc.append(x + 1)
                x = perm[x]
            out.append(tuple(cyc))
    return out


@dataclass
class SearchResult:
    status: str
    witness: tuple | None
    nodes: int

    def to_dict(self):
        out = {"status": self.status, "nodes": self.nodes}
        if self.witness:
            out["witness"] = {name: [list(c) for c in cycles(p)]
                              for name, p in zip(("sigma0", "sigma1", "sigmaInf"), self.witness)}
        return out


class _Budget(Exception):
    pass


def _search(n, first, second_parts, third_parts, budget):
    """Find sigma of type second_parts with sigma*first of type third_parts, transitive."""
    first_inv = inverse(first)
    img = [-1] * n           # the searched permutation
    prod_f = [-1] * n        # product x -> img[first[x]]
    prod_b = [-1] * n
    need = {}
    for x in third_parts:
        need[x] = need.get(x, 0) + 1
    lengths = {}
    for x in second_parts:
        lengths[x] = lengths.get(x, 0) + 1
    nodes = [0]

    def max_need():
        return max((k for k, c in need.items() if c), default=0)

    def assign(a, b):
        """Set img[a] = b; returns the closed product-cycle length, 0, or -1 to prune."""
        u = first_inv[a]
        prod_f[u] = b
        prod_b[b] = u
        length = 1
        x = b
        while prod_f[x] != -1 and x != u:
            x = prod_f[x]
            length += 1
        if x == u:
            if need.get(length, 0) == 0:
                return -1
            return length
        back = u
        while prod_b[back] != -1 and back != b:
            back = prod_b[back]
            length += 1
        if length + 1 > max_need():
            return -1
        return 0

    def unassign(a, b):
        u = first_inv[a]
        prod_f[u] = -1
        prod_b[b] = -1

    def place(a, b):
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Budget
        img[a] = b
        closed = assign(a, b)
        if closed < 0:
            unassign(a, b)
            img[a] = -1
            return None
        if closed:
            need[closed] -= 1
        return closed

    def undo(a, b, closed):
        if closed:
            need[closed] += 1
        unassign(a, b)
        img[a] = -1

    used = [False] * n

    def new_cycle():
        start = next((i for i in range(n) if not used[i]), None)
        if start is None:
            return is_transitive([first, img], n)
        for length in sorted(k for k, c in lengths.items() if c):
            lengths[length] -= 1
            used[start] = True
            if extend(start, start, length - 1):
                return True
            used[start] = False
            lengths[length] += 1
        return False

    def extend(start, last, remaining):
        if remaining == 0:
            closed = place(last, start)
            if closed is None:
                return False
            if new_cycle():
                return True
            undo(last, start, closed)
            return False
        for nxt in range(start + 1, n):
            if used[nxt]:
                continue
            closed = place(last, nxt)
            if closed is None:
                continue
            used[nxt] = True
            if extend(start, nxt, remaining - 1):
                return True
            used[nxt] = False
            undo(last, nxt, closed)
        return False

    try:
        ok = new_cycle()
    except _Budget:
        return BUDGET, None, nodes[0]
    return (FOUND if ok else EXHAUSTED), (list(img) if ok else None), nodes[0]


def realizable_as_permutation_triple(p, budget=DEFAULT_BUDGET):
    """Search for a transitive triple s0, s1, sInf with sInf*s1*s0 = 1 of the given types."""
    if not check_riemann_hurwitz(p):
        raise ValueError(f"profile {p} fails Riemann-Hurwitz")
    n = p.n
    parts = p.partitions()
    sizes = [_class_size(q, n) for q in parts]
    second = min(range(3), key=lambda i: (sizes[i], i))
    others = [i for i in range(3) if i != second]
    first = max(others, key=lambda i: (sizes[i], -i))
    third = 3 - first - second
    base = canonical_permutation(parts[first])
    status, searched, nodes = _search(n, base, parts[second], parts[third], budget)
    if status != FOUND:
        return SearchResult(status, None, nodes)
    perms = [None, None, None]
    product = compose(searched, base)
    if (first, second, third) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        perms[first], perms[second], perms[third] = base, searched, inverse(product)
    else:
        perms[third], perms[second], perms[first] = product, inverse(searched), inverse(base)
    witness = tuple(perms)
    _validate(p, witness)
    return SearchResult(FOUND, witness, nodes)


def _validate(p, witness):
    s0, s1, sinf = witness
    n = p.n
    ident = list(range(n))
    if compose(sinf, compose(s1, s0)) != ident:
        raise AssertionError("witness does not multiply to the identity")
    if tuple(cycle_type(s) for s in witness) != p.partitions():
        raise AssertionError("witness has the wrong cycle types")
    if not is_transitive(witness, n):
        raise AssertionError("witness is not transitive")
