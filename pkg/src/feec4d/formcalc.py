"""Polynomial differential forms in four (or fewer) variables and their proxies.

A form stores its raw components omega_I for increasing index tuples I, e.g.
for 2-forms in 4D the order is (12, 13, 14, 23, 24, 34).  The factor 1/2 of
the 2-form proxy is applied only when converting to or from proxies, so the
exterior derivative and the Koszul operator act on raw components without
convention factors.
"""

from itertools import combinations, permutations

from .polycore import Polynomial, as_rational


def form_indices(n, s):
    return list(combinations(range(n), s))


def levi_civita(*idx):
    """Sign of the permutation ``idx`` of 0..n-1, or 0 with a repeated index."""
    if len(set(idx)) != len(idx):
        return 0
    sign = 1
    idx = list(idx)
    for i in range(len(idx)):
        while idx[i] != i:
            j = idx[i]
            idx[i], idx[j] = idx[j], idx[i]
            sign = -sign
    return sign


def _insert_sign(i, index):
    """Sign of dx^i ^ dx^I = sign * dx^(I + {i}) for sorted I."""
    return -1 if sum(1 for j in index if j < i) % 2 else 1


class FormPoly:
    """An s-form on R^n with polynomial coefficients (raw components)."""

    __slots__ = ("s", "n", "comps")

    def __init__(self, s, comps, n=4):
        comps = tuple(comps)
        expected = len(form_indices(n, s))
        if not 0 <= s <= n or len(comps) != expected:
            raise ValueError(f"a {s}-form on R^{n} needs {expected} components, got {len(comps)}")
        self.s = s
        self.n = n
        self.comps = tuple(c if isinstance(c, Polynomial) else Polynomial.constant(c, n) for c in comps)
        if any(c.nvars != n for c in self.comps):
            raise ValueError("component polynomials must live in the form's variables")

    @classmethod
    def zero(cls, s, n=4):
        return cls(s, [Polynomial.zero(n)] * len(form_indices(n, s)), n)

    @classmethod
    def from_terms(cls, s, mapping, n=4):
        """Build from ``{index tuple (0-based, any order): polynomial}``."""
        idx = form_indices(n, s)
        comps = [Polynomial.zero(n) for _ in idx]
        for key, poly in mapping.items():
            order = sorted(key)
            sign = levi_civita(*[order.index(k) for k in key])
            if not sign:
                continue
            pos = idx.index(tuple(order))
            comps[pos] = comps[pos] + (poly if isinstance(poly, Polynomial) else Polynomial.constant(poly, n)) * sign
        return cls(s, comps, n)

    @property
    def indices(self):
        return form_indices(self.n, self.s)

    def component(self, index):
        return self.comps[self.indices.index(tuple(index))]

    def __add__(self, other):
        self._check(other)
        return FormPoly(self.s, [a + b for a, b in zip(self.comps, other.comps)], self.n)

    def __sub__(self, other):
        self._check(other)
        return FormPoly(self.s, [a - b for a, b in zip(self.comps, other.comps)], self.n)

    def __neg__(self):
        return FormPoly(self.s, [-a for a in self.comps], self.n)

    def __mul__(self, factor):
        """Multiply every component by a scalar or a polynomial."""
        return FormPoly(self.s, [c * factor for c in self.comps], self.n)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, FormPoly) and (self.s, self.n, self.comps) == (other.s, other.n, other.comps)

    def __hash__(self):
        return hash((self.s, self.n, self.comps))

    def __repr__(self):
        names = ["".join(str(i + 1) for i in idx) or "0" for idx in self.indices]
        body = ", ".join(f"{name}: {c!r}" for name, c in zip(names, self.comps) if c)
        return f"FormPoly(s={self.s}, n={self.n}, {{{body}}})"

    def _check(self, other):
        if (self.s, self.n) != (other.s, other.n):
            raise ValueError("forms of different degree or dimension")

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def degree(self):
        return max(c.degree() for c in self.comps)

    def to_vector(self):
        """Sparse coefficient vector keyed by (component position, exponent)."""
        return {(i, a): c for i, comp in enumerate(self.comps) for a, c in comp.terms.items()}

    def evaluate(self, point):
        return tuple(c.evaluate(point) for c in self.comps)

    def wedge(self, other):
        if self.n != other.n:
            raise ValueError("forms on different spaces")
        terms = {}
        for i, a in zip(self.indices, self.comps):
            if not a:
                continue
            for j, b in zip(other.indices, other.comps):
                if b and not set(i) & set(j):
                    key = i + j
                    terms[key] = terms.get(key, Polynomial.zero(self.n)) + a * b
        return FormPoly.from_terms(self.s + other.s, terms, self.n)


def dform(omega):
    """Exterior derivative."""
    if omega.s >= omega.n:
        raise ValueError("the exterior derivative of a top-degree form is not defined here")
    target = form_indices(omega.n, omega.s + 1)
    comps = [Polynomial.zero(omega.n) for _ in target]
    pos = {idx: k for k, idx in enumerate(target)}
    for index, coeff in zip(omega.indices, omega.comps):
        if not coeff:
            continue
        for i in range(omega.n):
            if i in index:
                continue
            key = tuple(sorted(index + (i,)))
            comps[pos[key]] = comps[pos[key]] + coeff.diff(i) * _insert_sign(i, index)
    return FormPoly(omega.s + 1, comps, omega.n)


def koszul(omega):
    """Koszul operator: contraction with the position vector x."""
    if omega.s == 0:
        raise ValueError("the Koszul operator lowers degree; 0-forms are not accepted")
    n = omega.n
    x = [Polynomial.variable(i, n) for i in range(n)]
    terms = {}
    for index, coeff in zip(omega.indices, omega.comps):
        if not coeff:
            continue
        for p, i in enumerate(index):
            rest = index[:p] + index[p + 1:]
            term = coeff * x[i] * (-1 if p % 2 else 1)
            terms[rest] = terms.get(rest, Polynomial.zero(n)) + term
    return FormPoly.from_terms(omega.s - 1, terms, n)


# -- proxies ------------------------------------------------------------------

_PAIRS = form_indices(4, 2)  # (12, 13, 14, 23, 24, 34)
_TRIPLE_SIGNS = [((1, 2, 3), 1), ((0, 2, 3), -1), ((0, 1, 3), 1), ((0, 1, 2), -1)]


def _zero_like(v):
    return Polynomial.zero(v.nvars) if isinstance(v, Polynomial) else as_rational(0)


def vtom(w):
    """6-vector (w12, w13, w14, w23, w24, w34) to a skew 4x4 matrix."""
    if len(w) != 6:
        raise ValueError("vtom needs a 6-vector")
    z = _zero_like(w[0])
    m = [[z] * 4 for _ in range(4)]
    for (i, j), v in zip(_PAIRS, w):
        m[i][j] = v
        m[j][i] = -v
    return tuple(tuple(row) for row in m)


def mtov(a):
    """Inverse of ``vtom``; rejects matrices that are not skew."""
    if len(a) != 4 or any(len(row) != 4 for row in a):
        raise ValueError("mtov needs a 4x4 matrix")
    for i in range(4):
        for j in range(4):
            if a[i][j] != -a[j][i]:
                raise ValueError("matrix is not skew-symmetric")
    return tuple(a[i][j] for i, j in _PAIRS)


def upsilon(omega):
    """Proxy of a 4D form: scalar, 4-vector or skew matrix."""
    if omega.n != 4:
        raise ValueError("proxies are defined for forms on R^4")
    c = omega.comps
    if omega.s in (0, 4):
        return c[0]
    if omega.s == 1:
        return c
    if omega.s == 2:
        return vtom([v / 2 for v in c])
    return tuple(omega.component(idx) * sign for idx, sign in _TRIPLE_SIGNS)


def from_proxy(s, proxy):
    """Inverse of ``upsilon``."""
    if s in (0, 4):
        return FormPoly(s, [proxy])
    if s == 1:
        return FormPoly(1, proxy)
    if s == 2:
        return FormPoly(2, [v * 2 for v in mtov(proxy)])
    by_index = {idx: proxy[k] * sign for k, (idx, sign) in enumerate(_TRIPLE_SIGNS)}
    return FormPoly(3, [by_index[idx] for idx in form_indices(4, 3)])


# -- first-order operators on proxies ---------------------------------------


def _d(f, i):
    return f.diff(i) if isinstance(f, Polynomial) else as_rational(0)


def grad(u):
    return tuple(u.diff(i) for i in range(4))


def skw_grad(e):
    # (Grad E)_ij = d_j E_i;  skwGrad E = ((Grad E)^T - Grad E) / 2
    return tuple(tuple((e[j].diff(i) - e[i].diff(j)) / 2 for j in range(4)) for i in range(4))


def curl_skew(f):
    return tuple(
        sum((f[k][l].diff(j) * levi_civita(i, j, k, l) for j, k, l in permutations(range(4), 3) if i not in (j, k, l)),
            Polynomial.zero(4))
        for i in range(4)
    )


def div_vec(g):
    return sum((g[i].diff(i) for i in range(4)), Polynomial.zero(4))


def curl_vec(e):
    z = Polynomial.zero(4)
    return tuple(
        tuple(sum((e[l].diff(k) * levi_civita(i, j, k, l) for k in range(4) for l in range(4)), z) for j in range(4))
        for i in range(4)
    )


def div_skew(f):
    return tuple(sum((f[i][j].diff(j) for j in range(4)), Polynomial.zero(4)) for i in range(4))


def _sum(items, like):
    total = _zero_like(like)
    for item in items:
        total = total + item
    return total


def cross_vv(m, n):
    """[M x N]_ij = sum_kl eps_ijkl M_k N_l."""
    return tuple(
        tuple(_sum((m[k] * n[l] * levi_civita(i, j, k, l) for k in range(4) for l in range(4)
                    if levi_civita(i, j, k, l)), m[0]) for j in range(4))
        for i in range(4)
    )


def cross_vm(m, u):
    """[M x U]_i = sum_jkl eps_ijkl M_j U_kl."""
    return tuple(
        _sum((m[j] * u[k][l] * levi_civita(i, j, k, l) for j, k, l in permutations(range(4), 3) if i not in (j, k, l)),
             m[0])
        for i in range(4)
    )


def triple_cross(u, v, w):
    """Generalized cross product [u x v x w]_i = sum_jkl eps_ijkl u_j v_k w_l."""
    return tuple(
        _sum((u[j] * v[k] * w[l] * levi_civita(i, j, k, l) for j, k, l in permutations(range(4), 3)
              if i not in (j, k, l)), u[0])
        for i in range(4)
    )


def contract(a, b):
    """Frobenius pairing A:B = sum_ij A_ij B_ij."""
    return _sum((a[i][j] * b[i][j] for i in range(4) for j in range(4)), a[0][0])


def dot(a, b):
    return _sum((x * y for x, y in zip(a, b)), a[0])


def outer_skew(e, n):
    """(E (x) n - n (x) E) / 2, the 1-form facet trace in matrix form."""
    return tuple(tuple((e[i] * n[j] - n[i] * e[j]) / 2 for j in range(4)) for i in range(4))
