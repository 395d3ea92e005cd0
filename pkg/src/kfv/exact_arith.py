"""Exact scalars and sparse Laurent polynomials.

Coefficients are ``Fraction`` for rationals and ``QuadScalar`` for elements
a + b*sqrt(d) of a quadratic field.  A coefficient whose irrational part is
zero is always stored as a plain ``Fraction``, so equality and hashing do
not depend on how a value was produced.

Polynomials carry a tuple of variable names and a map from exponent tuples
to coefficients.  Exponents may be negative (Laurent polynomials); this is
what edge-coordinate substitutions produce.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

# Fixed display/merge order for the variables used by the text grammar.
VARIABLE_ORDER = ("x1", "x2", "x", "y", "w", "t", "u", "v", "alpha", "beta")


def _var_key(name):
    if name in VARIABLE_ORDER:
        return (0, VARIABLE_ORDER.index(name), name)
    return (1, 0, name)


def _squarefree_int(d):
    n = abs(d)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


class QuadScalar:
    """Element a + b*sqrt(d) of Q(sqrt(d)); d is a fixed square-free integer."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=-3):
        if d in (0, 1) or not _squarefree_int(d):
            raise ValueError(f"discriminant {d} is not a square-free integer != 0, 1")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def _coerce(self, other):
        if isinstance(other, QuadScalar):
            if other.d != self.d:
                raise ValueError(f"mixing Q(sqrt({self.d})) and Q(sqrt({other.d}))")
            return other
        if isinstance(other, (int, Rational)):
            return QuadScalar(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return normalize(QuadScalar(self.a + o.a, self.b + o.b, self.d))

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return normalize(QuadScalar(self.a - o.a, self.b - o.b, self.d))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return normalize(QuadScalar(self.a * other, self.b * other, self.d))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return normalize(QuadScalar(self.a * o.a + self.d * self.b * o.b,
                                    self.a * o.b + self.b * o.a, self.d))

    __rmul__ = __mul__

    def conjugate(self):
        return QuadScalar(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadScalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return normalize(QuadScalar(self.a / other, self.b / other, self.d))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        return scalar_pow(self, n)

    def __eq__(self, other):
        if isinstance(other, QuadScalar):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d) or (
                self.b == 0 and other.b == 0 and self.a == other.a)
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QuadScalar({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_scalar(self)


def normalize(c):
    """Canonical coefficient: Fraction unless there is an irrational part."""
    if isinstance(c, QuadScalar):
        if c.b == 0:
            return c.a
        return c
    return Fraction(c)


def scalar_pow(c, n):
    if n < 0:
        return scalar_pow(1 / c if not isinstance(c, QuadScalar) else c.inverse(), -n)
    result = Fraction(1)
    base = c
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return normalize(result)


def scalar_disc(c):
    return c.d if isinstance(c, QuadScalar) else None


def join_disc(d1, d2):
    """Common field of two coefficient domains; rationals embed everywhere."""
    if d1 is None:
        return d2
    if d2 is None or d1 == d2:
        return d1
    raise ValueError(f"mixing Q(sqrt({d1})) and Q(sqrt({d2}))")


def _fmt_fraction(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(c):
    c = normalize(c)
    if isinstance(c, Fraction):
        return _fmt_fraction(c)
    root = f"sqrt({c.d})"
    if c.a == 0:
        if c.b == 1:
            return root
        if c.b == -1:
            return f"-{root}"
        return f"{_fmt_fraction(c.b)}*{root}"
    sign = "+" if c.b > 0 else "-"
    mag = abs(c.b)
    tail = root if mag == 1 else f"{_fmt_fraction(mag)}*{root}"
    return f"({_fmt_fraction(c.a)}{sign}{tail})"


class Poly:
    """Sparse Laurent polynomial with exact coefficients.

    ``disc`` is None for coefficients in Q, otherwise the discriminant of the
    quadratic field the coefficients live in.
    """

    __slots__ = ("vars", "terms", "disc")

    def __init__(self, vars, terms, disc=None):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ValueError(f"repeated variable in {vars}")
        clean = {}
        for exps, c in terms.items():
            if len(exps) != len(vars):
                raise ValueError("exponent tuple does not match variable list")
            c = normalize(c)
            if c != 0:
                disc = join_disc(disc, scalar_disc(c))
                clean[tuple(exps)] = c
        self.vars = vars
        self.terms = clean
        self.disc = disc

    # -- construction helpers -------------------------------------------
    @classmethod
    def const(cls, c, vars=(), disc=None):
        c = normalize(c)
        return cls(vars, {(0,) * len(vars): c}, join_disc(disc, scalar_disc(c)))

    @classmethod
    def var(cls, name, disc=None):
        return cls((name,), {(1,): Fraction(1)}, disc)

    @classmethod
    def from_coeffs(cls, var, coeffs, disc=None):
        """Univariate polynomial from coefficients listed lowest degree first."""
        return cls((var,), {(i,): c for i, c in enumerate(coeffs)}, disc)

    # -- variable alignment ---------------------------------------------
    def with_vars(self, vars):
        vars = tuple(vars)
        if vars == self.vars:
            return self
        missing = [v for v in self.vars if v not in vars]
        if missing:
            raise ValueError(f"cannot drop variables {missing}")
        idx = [vars.index(v) for v in self.vars]
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(vars)
            for i, e in zip(idx, exps):
                new[i] = e
            terms[tuple(new)] = c
        return Poly(vars, terms, self.disc)

    def drop_unused(self):
        used = [i for i, v in enumerate(self.vars)
                if any(exps[i] for exps in self.terms)]
        vars = tuple(self.vars[i] for i in used)
        terms = {tuple(exps[i] for i in used): c for exps, c in self.terms.items()}
        return Poly(vars, terms, self.disc)

    def _align(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if self.vars == other.vars:
            return self, other
        vars = tuple(sorted(set(self.vars) | set(other.vars), key=_var_key))
        return self.with_vars(vars), other.with_vars(vars)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (Poly, int, Rational, QuadScalar)):
            return NotImplemented
        a, b = self._align(other)
        terms = dict(a.terms)
        for exps, c in b.terms.items():
            terms[exps] = terms.get(exps, 0) + c
        return Poly(a.vars, terms, join_disc(a.disc, b.disc))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()}, self.disc)

    def __sub__(self, other):
        if not isinstance(other, (Poly, int, Rational, QuadScalar)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational, QuadScalar)):
            return Poly(self.vars, {e: c * other for e, c in self.terms.items()},
                        join_disc(self.disc, scalar_disc(normalize(other))))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._align(other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly(a.vars, terms, join_disc(a.disc, b.disc))

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero scalar or by a single monomial (Laurent)."""
        if isinstance(other, Poly):
            if len(other.terms) != 1:
                raise ValueError("division by a polynomial that is not a monomial")
            return self * other.monomial_inverse()
        inv = other.inverse() if isinstance(other, QuadScalar) else Fraction(1) / Fraction(other)
        return self * inv

    def monomial_inverse(self):
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible")
        (exps, c), = self.terms.items()
        inv = c.inverse() if isinstance(c, QuadScalar) else 1 / c
        return Poly(self.vars, {tuple(-e for e in exps): inv}, self.disc)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.monomial_inverse() ** (-n)
        result = Poly.const(1, self.vars, self.disc)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Rational, QuadScalar)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self):
        p = self.drop_unused()
        return hash((p.vars, frozenset(p.terms.items())))

    # -- queries ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def _index(self, var):
        try:
            return self.vars.index(var)
        except ValueError:
            return None

    def degree(self, var=None):
        """Total degree, or degree in ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self._index(var)
        if i is None:
            return 0
        return max(e[i] for e in self.terms)

    def min_degree(self, var):
        if not self.terms:
            raise ValueError("zero polynomial has no order")
        i = self._index(var)
        if i is None:
            return 0
        return min(e[i] for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def diff(self, var):
        i = self._index(var)
        if i is None:
            return Poly(self.vars, {}, self.disc)
        terms = {}
        for exps, c in self.terms.items():
            if exps[i]:
                e = list(exps)
                e[i] -= 1
                terms[tuple(e)] = c * exps[i]
        return Poly(self.vars, terms, self.disc)

    def subs(self, mapping):
        """Substitute polynomials (or scalars) for variables.

        Negative powers are allowed only when the substituted value is a
        monomial, which keeps the result a Laurent polynomial.
        """
        keep = [v for v in self.vars if v not in mapping]
        values = {v: (p if isinstance(p, Poly) else Poly.const(p)) for v, p in mapping.items()}
        cache = {}

        def power(v, e):
            key = (v, e)
            if key not in cache:
                base = values[v]
                if e < 0 and not base.is_monomial():
                    raise ValueError(f"negative power of {v} cannot be expanded: "
                                     f"substitution is not a Laurent monomial")
                cache[key] = base ** e
            return cache[key]

        result = Poly(tuple(sorted(keep, key=_var_key)), {}, self.disc)
        for exps, c in self.terms.items():
            term = Poly.const(c, (), self.disc)
            rest = {}
            for v, e in zip(self.vars, exps):
                if v in mapping:
                    if e:
                        term = term * power(v, e)
                elif e:
                    rest[v] = e
            if rest:
                vs = tuple(rest)
                term = term * Poly(vs, {tuple(rest[v] for v in vs): 1})
            result = result + term
        return result

    def lift(self, disc):
        """The same polynomial viewed over Q(sqrt(disc))."""
        return Poly(self.vars, self.terms, join_disc(self.disc, disc))

    # -- univariate helpers ---------------------------------------------
    def univariate_var(self):
        p = self.drop_unused()
        if len(p.vars) > 1:
            raise ValueError(f"expected a univariate polynomial, got variables {p.vars}")
        return p.vars[0] if p.vars else None

    def coeffs(self, var=None):
        """Dense coefficient list (lowest degree first) of a univariate polynomial."""
        p = self.drop_unused()
        if var is None:
            var = p.univariate_var()
        if not p.terms:
            return []
        if not p.vars:
            return [p.terms[()]]
        if p.vars != (var,):
            raise ValueError(f"polynomial is not univariate in {var}")
        if p.min_degree(var) < 0:
            raise ValueError("negative exponents in a univariate polynomial")
        out = [Fraction(0)] * (p.degree(var) + 1)
        for (e,), c in p.terms.items():
            out[e] = c
        return out

    # -- display ---------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def format_poly(p):
    if not p.terms:
        return "0"
    parts = []
    order = sorted(p.terms, key=lambda e: (-sum(e), tuple(-x for x in e)))
    for exps in order:
        c = p.terms[exps]
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(p.vars, exps) if e)
        negative = isinstance(c, Fraction) and c < 0
        mag = -c if negative else c
        if mono:
            body = mono if mag == 1 else f"{format_scalar(mag)}*{mono}"
        else:
            body = format_scalar(mag)
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts)


# ---------------------------------------------------------------------------
# univariate algebra

def _field_inverse(c):
    return c.inverse() if isinstance(c, QuadScalar) else Fraction(1) / c


def _trim(cs):
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _divmod_dense(a, b):
    a = list(a)
    inv = _field_inverse(b[-1])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        factor = normalize(a[-1] * inv)
        q[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] = normalize(a[shift + i] - factor * c)
    return _trim(q), a


def _monic_dense(cs):
    inv = _field_inverse(cs[-1])
    return [normalize(c * inv) for c in cs]


def _gcd_dense(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _divmod_dense(a, b)
        a, b = b, r
    return _monic_dense(a) if a else []


def _common_var(*polys):
    names = {p.univariate_var() for p in polys} - {None}
    if len(names) > 1:
        raise ValueError(f"polynomials in different variables: {sorted(names)}")
    return names.pop() if names else "t"


def _common_disc(*polys):
    discs = {p.disc for p in polys} - {None}
    if len(discs) > 1:
        raise ValueError(f"polynomials over different fields: {sorted(discs)}")
    return discs.pop() if discs else None


def poly_divmod(a, b):
    var = _common_var(a, b)
    disc = _common_disc(a, b)
    bc = b.coeffs(var) if b.drop_unused().vars else b.coeffs()
    if not bc:
        raise ZeroDivisionError("polynomial division by zero")
    ac = a.coeffs(var) if a.drop_unused().vars else a.coeffs()
    q, r = _divmod_dense(ac, bc)
    return Poly.from_coeffs(var, q, disc), Poly.from_coeffs(var, r, disc)


def _dense(p, var):
    return p.coeffs(var) if p.drop_unused().vars else p.coeffs()


def gcd_univariate(a, b):
    """Monic gcd of two univariate polynomials over the same field."""
    var = _common_var(a, b)
    disc = _common_disc(a, b)
    g = _gcd_dense(_dense(a, var), _dense(b, var))
    return Poly.from_coeffs(var, g, disc)


def squarefree_decomposition(f):
    """Yun's algorithm: returns [(m, g_m)] with f = c * prod g_m^m, g_m squarefree."""
    if f.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    var = _common_var(f)
    disc = f.disc
    a = _trim(_dense(f, var))
    if len(a) == 1:
        return []
    deriv = [normalize(c * i) for i, c in enumerate(a)][1:]
    g = _gcd_dense(a, deriv)
    b, _ = _divmod_dense(a, g)
    c, _ = _divmod_dense(deriv, g)
    out = []
    m = 1
    while len(b) > 1:
        bprime = [normalize(x * i) for i, x in enumerate(b)][1:]
        d = [normalize(x - y) for x, y in _zip_pad(c, bprime)]
        d = _trim(d)
        h = _gcd_dense(b, d) if d else _monic_dense(b)
        if len(h) > 1:
            out.append((m, Poly.from_coeffs(var, h, disc)))
        b, _ = _divmod_dense(b, h)
        if d:
            c, _ = _divmod_dense(d, h)
        else:
            c = []
        m += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def multiplicity_profile(f):
    """[(multiplicity, degree share)] from the squarefree decomposition of f."""
    return [(m, g.degree()) for m, g in squarefree_decomposition(f)]


def jacobian(f, g, vars=None):
    """df/dx1 * dg/dx2 - df/dx2 * dg/dx1 for the two variables of the pair."""
    if vars is None:
        names = set(f.drop_unused().vars) | set(g.drop_unused().vars)
        if len(names) != 2:
            raise ValueError(f"jacobian needs a bivariate pair, got variables {sorted(names)}")
        vars = tuple(sorted(names, key=_var_key))
    x, y = vars
    return f.diff(x) * g.diff(y) - f.diff(y) * g.diff(x)


def substitute(f, mapping):
    """Laurent expansion of f after replacing each variable by an expression."""
    return f.subs(mapping)


def order_in_variable(f, var):
    """Minimal exponent of ``var`` over all terms (the valuation along var = 0)."""
    if f.is_zero():
        raise ValueError("order of the zero polynomial is undefined")
    return f.min_degree(var)
