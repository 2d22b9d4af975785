"""Exact rational scalars, sparse multivariate polynomials and monomial spaces.

Scalars are ``gmpy2.mpq`` values.  Polynomials are stored as a map from
exponent tuples to nonzero coefficients.  Monomials are ordered by total
degree first and then by descending lexicographic exponent, so in four
variables the order starts ``1, x1, x2, x3, x4, x1^2, x1*x2, ...``.
"""

from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import factorial
from operator import add

from gmpy2 import mpq

Rational = type(mpq())

ZERO = mpq(0)
ONE = mpq(1)


def as_rational(value):
    """Convert ints, Fractions, mpq values or "p/q" strings to a Rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return mpq(value.strip())
    return mpq(value)


def rational_str(value):
    """Serialize a rational as "p/q" (or "p" when integral)."""
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def monomial_key(alpha):
    return (sum(alpha), tuple(-a for a in alpha))


def exponents(degree, nvars):
    """All exponent tuples of exact total degree ``degree``, in monomial order."""
    if degree < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        alpha = [0] * nvars
        for i in combo:
            alpha[i] += 1
        out.append(tuple(alpha))
    return sorted(out, key=monomial_key)


def exponents_upto(degree, nvars):
    return [a for d in range(degree + 1) for a in exponents(d, nvars)]


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for alpha, c in terms.items():
                if c:
                    if len(alpha) != nvars:
                        raise ValueError(f"exponent {alpha} does not have {nvars} entries")
                    clean[tuple(alpha)] = as_rational(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c, nvars):
        return cls._raw(nvars, {(0,) * nvars: as_rational(c)} if c else {})

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def variable(cls, i, nvars):
        alpha = [0] * nvars
        alpha[i] = 1
        return cls._raw(nvars, {tuple(alpha): ONE})

    @classmethod
    def monomial(cls, alpha, c=1):
        return cls._raw(len(alpha), {tuple(alpha): as_rational(c)} if c else {})

    @classmethod
    def affine(cls, const, linear):
        """Build ``const + sum(linear[i] * x_i)``."""
        n = len(linear)
        terms = {}
        if const:
            terms[(0,) * n] = as_rational(const)
        for i, c in enumerate(linear):
            if c:
                alpha = [0] * n
                alpha[i] = 1
                terms[tuple(alpha)] = as_rational(c)
        return cls._raw(n, terms)

    # -- basic queries -------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(a) for a in self.terms), default=-1)

    def degree_in(self, variables):
        return max((sum(a[i] for i in variables) for a in self.terms), default=-1)

    def coeff(self, alpha):
        return self.terms.get(tuple(alpha), ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]))

    def is_homogeneous(self, degree=None):
        degrees = {sum(a) for a in self.terms}
        if not degrees:
            return True
        if len(degrees) > 1:
            return False
        return degree is None or degrees == {degree}

    def homogeneous_part(self, degree):
        return Polynomial._raw(self.nvars, {a: c for a, c in self.terms.items() if sum(a) == degree})

    # -- arithmetic ----------------------------------------------------

    def _check(self, other):
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            v = terms.get(a, ZERO) + c
            if v:
                terms[a] = v
            else:
                terms.pop(a, None)
        return Polynomial._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_rational(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {a: c * v for a, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = {}
        get = out.get
        for a, ca in small.items():
            for b, cb in big.items():
                key = tuple(map(add, a, b))
                out[key] = get(key, ZERO) + ca * cb
        return Polynomial._raw(self.nvars, {a: c for a, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(ONE / as_rational(c))

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Rational)) or hasattr(other, "denominator"):
            return self.terms == ({(0,) * self.nvars: as_rational(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution --------------------------------------

    def diff(self, i):
        terms = {}
        for a, c in self.terms.items():
            if a[i]:
                b = list(a)
                b[i] -= 1
                terms[tuple(b)] = c * a[i]
        return Polynomial._raw(self.nvars, terms)

    def antiderivative(self, i):
        """Antiderivative in variable i vanishing at x_i = 0."""
        terms = {}
        for a, c in self.terms.items():
            b = list(a)
            b[i] += 1
            terms[tuple(b)] = c / b[i]
        return Polynomial._raw(self.nvars, terms)

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point):
        point = [as_rational(x) for x in point]
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = ZERO
        for a, c in self.terms.items():
            v = c
            for x, e in zip(point, a):
                if e:
                    v *= x**e
            total += v
        return total

    def compose(self, subs):
        """Substitute polynomial ``subs[i]`` for variable ``x_i``."""
        if len(subs) != self.nvars:
            raise ValueError(f"need {self.nvars} substitutions, got {len(subs)}")
        if not subs:
            return self
        nv = subs[0].nvars
        powers = [{0: Polynomial.constant(1, nv)} for _ in subs]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * subs[i]
            return cache[e]

        out = Polynomial.zero(nv)
        for a, c in self.sorted_terms():
            term = Polynomial.constant(c, nv)
            for i, e in enumerate(a):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def embed(self, nvars, positions):
        """View this polynomial as one in ``nvars`` variables; variable i goes to ``positions[i]``."""
        terms = {}
        for a, c in self.terms.items():
            b = [0] * nvars
            for e, p in zip(a, positions):
                b[p] = e
            terms[tuple(b)] = c
        return Polynomial._raw(nvars, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        names = [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for a, c in self.sorted_terms():
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, a) if e)
            if not mono:
                parts.append(rational_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{rational_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def variables(nvars):
    return [Polynomial.variable(i, nvars) for i in range(nvars)]


# -- monomial spaces ----------------------------------------------------


def monomials_P(k, nvars):
    """Monomial basis of P^k (empty when k < 0)."""
    return [Polynomial.monomial(a) for a in exponents_upto(k, nvars)]


def monomials_Ptilde(k, nvars):
    """Monomial basis of the homogeneous polynomials of degree exactly k."""
    return [Polynomial.monomial(a) for a in exponents(k, nvars)]


def monomials_Q(degrees):
    """Monomial basis of the tensor space with per-variable maximal degrees."""
    if any(d < 0 for d in degrees):
        return []
    alphas = sorted(product(*(range(d + 1) for d in degrees)), key=monomial_key)
    return [Polynomial.monomial(a) for a in alphas]


def monomials_product(blocks):
    """Products p(x_I) q(x_J) of monomial spaces on disjoint variable blocks.

    ``blocks`` is a list of ``(degree, variable positions)``; each factor runs
    over the full P^degree in its variables.  Empty if any degree is negative.
    """
    nvars = sum(len(pos) for _, pos in blocks)
    factors = []
    for degree, pos in blocks:
        if degree < 0:
            return []
        factors.append([(a, pos) for a in exponents_upto(degree, len(pos))])
    out = []
    for combo in product(*factors):
        alpha = [0] * nvars
        for a, pos in combo:
            for e, p in zip(a, pos):
                alpha[p] = e
        out.append(tuple(alpha))
    return [Polynomial.monomial(a) for a in sorted(out, key=monomial_key)]


# -- integration ----------------------------------------------------------


def monomial_integral_simplex(alpha, d=None):
    """Integral of x^alpha over the unit d-simplex {x >= 0, sum(x) <= 1}."""
    alpha = tuple(alpha)
    if d is not None and d != len(alpha):
        raise ValueError(f"multi-index {alpha} does not have {d} entries")
    return _simplex_integral(alpha)


@lru_cache(maxsize=None)
def _simplex_integral(alpha):
    d = len(alpha)
    num = 1
    for a in alpha:
        num *= factorial(a)
    return mpq(num, factorial(d + sum(alpha)))


@lru_cache(maxsize=None)
def monomial_integral_product(alpha, factors):
    """Integral of x^alpha over a product of unit simplices of dimensions ``factors``."""
    value = ONE
    start = 0
    for d in factors:
        value *= _simplex_integral(alpha[start:start + d])
        start += d
    return value


def integrate_unit(p, factors=None):
    """Integrate over the unit simplex (default) or a product of unit simplices."""
    factors = tuple(factors) if factors else (p.nvars,)
    if sum(factors) != p.nvars:
        raise ValueError(f"domain of dimension {sum(factors)} does not match {p.nvars} variables")
    return sum((c * monomial_integral_product(a, factors) for a, c in p.terms.items()), ZERO)
