"""Trimmed polynomial form spaces, bubbles and dofs on the reference pentatope."""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb

from .formcalc import FormPoly, from_proxy, koszul, mtov, triple_cross, vtom
from .linalg import det, kernel
from .orthopoly import integrated_jacobi, integrated_legendre, jacobi, legendre, scaled
from .polycore import ONE, Polynomial, exponents, monomials_P, variables
from .refgeom import make_refcell
from .space import PolySpace, exactness_report, vector_space
from .tracedof import dof_matrix, number, trace_dim_formula, trace_dofs, volume_dof

N = 4
CELL = "pentatope"


def _x():
    return variables(N)


def _zero():
    return Polynomial.zero(N)


# -- spaces -------------------------------------------------------------------


def _homogeneous_kernel(k, ncomp, constraint):
    """Tuples of degree-k homogeneous polynomials p with constraint(p) == 0.

    ``constraint`` maps a tuple of polynomials to a tuple of polynomials and
    must be linear; the kernel is computed on monomial coefficients.
    """
    monos = exponents(k, N)
    unknowns = [(c, a) for c in range(ncomp) for a in monos]
    columns = {}
    for c, a in unknowns:
        comps = [_zero()] * ncomp
        comps[c] = Polynomial.monomial(a)
        for e, poly in enumerate(constraint(comps)):
            for b, coeff in poly.terms.items():
                columns.setdefault((e, b), {})[(c, a)] = coeff
    out = []
    for vec in kernel(columns.values(), unknowns):
        comps = [_zero() for _ in range(ncomp)]
        for (c, a), coeff in vec.items():
            comps[c] = comps[c] + Polynomial.monomial(a, coeff)
        out.append(comps)
    return out


def _matvec(m, v):
    return tuple(sum((m[i][j] * v[j] for j in range(N)), _zero()) for i in range(N))


def _constraint_basis(k, s):
    x = _x()
    low = monomials_P(k - 1, N)
    if s == 0:
        return [FormPoly(0, [p]) for p in monomials_P(k, N)]
    if s == 4:
        return [FormPoly(4, [p]) for p in low]
    if s == 1:
        extra = _homogeneous_kernel(k, 4, lambda p: (sum((pi * xi for pi, xi in zip(p, x)), _zero()),))
        return vector_space(1, [low] * 4) + [FormPoly(1, p) for p in extra]
    if s == 2:
        # raw components w with L(w) x = 0; the factor 1/2 of the proxy does not change the span
        extra = _homogeneous_kernel(k, 6, lambda w: _matvec(vtom(w), x))
        return vector_space(2, [low] * 6) + [FormPoly(2, w) for w in extra]
    proxies = vector_space(3, [low] * 4)
    base = [from_proxy(3, f.comps) for f in proxies]
    radial = [from_proxy(3, tuple(xi * q for xi in x)) for q in monomials_P(k - 1, N) if q.degree() == k - 1]
    return base + radial


def _koszul_basis(k, s):
    """P^{k-1} forms of degree s plus the Koszul image of homogeneous degree k-1 (s+1)-forms."""
    ncomp = comb(N, s)
    low = monomials_P(k - 1, N)
    out = vector_space(s, [low] * ncomp)
    if s < N:
        top = [q for q in low if q.degree() == k - 1]
        out += [koszul(f) for f in vector_space(s + 1, [top] * comb(N, s + 1))]
    return out


def _bmatrix_basis(k):
    """2-forms as L(P^{k-1})^6 plus homogeneous multiples of the four B matrices."""
    low = monomials_P(k - 1, N)
    out = vector_space(2, [low] * 6)
    for q in (m for m in low if m.degree() == k - 1):
        for b in b_matrices():
            out.append(FormPoly(2, [c * q for c in mtov(b)]))
    return out


@lru_cache(maxsize=None)
def build_space_T4(k, s, method="constraint"):
    """Basis of V^{k,s} on the pentatope.

    ``method`` is "constraint" (kernels of p.x = 0 and Bx = 0), "koszul"
    (trimmed space via the Koszul operator) or, for s = 2 only, "bmatrix".
    """
    if k < 1 or not 0 <= s <= N:
        raise ValueError(f"need k >= 1 and 0 <= s <= 4, got k={k}, s={s}")
    if method == "constraint":
        forms = _constraint_basis(k, s)
    elif method == "koszul":
        forms = _koszul_basis(k, s)
    elif method == "bmatrix" and s == 2:
        forms = _bmatrix_basis(k)
    else:
        raise ValueError(f"unknown construction {method!r} for s={s}")
    return PolySpace.from_spanning(s, forms, f"V^{k},{s}(T4)")


def b_matrices():
    """The four skew matrices B_r with linear entries and B_r x = 0."""
    x1, x2, x3, x4 = _x()
    z = _zero()
    vecs = [
        (z, z, z, x4, -x3, x2),
        (z, -x4, x3, z, z, -x1),
        (x4, z, -x2, z, x1, z),
        (-x3, x2, z, -x1, z, z),
    ]
    return [vtom(v) for v in vecs]


def c_matrix():
    """6 x 4 linear matrix C(x) whose columns span the skew matrices killing x."""
    x1, x2, x3, x4 = _x()
    z = _zero()
    return (
        (z, z, x4, -x3),
        (z, -x4, z, x2),
        (z, x3, -x2, z),
        (x4, z, z, -x1),
        (-x3, z, x1, z),
        (x2, -x1, z, z),
    )


# -- dimension formulas -------------------------------------------------------


def dim_formula(k, s):
    return {
        0: comb(k + 4, 4),
        1: k * (k + 2) * (k + 3) * (k + 4) // 6,
        2: k * (k ** 3 + 8 * k ** 2 + 19 * k + 12) // 4,
        3: k * (k + 1) * (k + 2) * (k + 4) // 6,
        4: comb(k + 3, 4),
    }[s]


def volume_dim_formula(k, s):
    return {0: comb(k - 1, 4), 1: 4 * comb(k, 4), 2: 6 * comb(k + 1, 4), 3: 4 * comb(k + 2, 4),
            4: comb(k + 3, 4)}[s]


def trace_formula(k, s):
    return trace_dim_formula(CELL, s, k)


# -- bubbles ------------------------------------------------------------------


def _lam():
    return make_refcell(CELL).barycentrics


def _grad(p):
    return tuple(p.diff(i) for i in range(N))


def _L(i, s, t):
    return scaled(integrated_legendre(i), s, t, degree=i)


def _LJ(i, alpha, s, t):
    return scaled(integrated_jacobi(i, alpha), s, t, degree=i)


def _P(i, s, t):
    return scaled(legendre(i), s, t, degree=i)


def _PJ(i, alpha, s, t):
    return scaled(jacobi(i, alpha), s, t, degree=i)


def _one():
    return Polynomial.constant(ONE, N)


def _indices(lows, total_range):
    """Index tuples with entry c >= lows[c] and sum in total_range."""
    lo, hi = total_range
    out = []
    for idx in product(*(range(low, hi + 1) for low in lows)):
        if lo <= sum(idx) <= hi:
            out.append(idx)
    return sorted(out, key=lambda t: (sum(t), t))


PHI_TUPLES = [(1, 2, 3, 4, 5), (2, 3, 4, 5, 1), (3, 4, 5, 1, 2), (4, 5, 1, 2, 3)]
THETA_TUPLES = PHI_TUPLES + [(5, 1, 2, 3, 4), (1, 2, 4, 3, 5)]
PSI_TUPLES = PHI_TUPLES


def _skew_pair(u, v):
    return tuple(tuple(u[i] * v[j] - u[j] * v[i] for j in range(N)) for i in range(N))


def _mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_scale(a, c):
    return tuple(tuple(x * c for x in row) for row in a)


def phi_generator(a, b):
    """lambda_a grad lambda_b - lambda_b grad lambda_a (1-based indices)."""
    lam = _lam()
    la, lb = lam[a - 1], lam[b - 1]
    ga, gb = _grad(la), _grad(lb)
    return tuple(la * y - lb * x for x, y in zip(ga, gb))


def theta_generator(a, b, c):
    """Skew matrix lambda_a(grad b (x) grad c - grad c (x) grad b) + cyclic."""
    lam = _lam()
    total = None
    for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
        term = _mat_scale(_skew_pair(_grad(lam[q - 1]), _grad(lam[r - 1])), lam[p - 1])
        total = term if total is None else _mat_add(total, term)
    return total


def psi_generator(a, b, c, d):
    """Alternating sum of lambda times triple cross products of gradients."""
    lam = _lam()
    g = {i: _grad(lam[i - 1]) for i in (a, b, c, d)}
    terms = [(a, (b, c, d), 1), (b, (c, d, a), -1), (c, (d, a, b), 1), (d, (a, b, c), -1)]
    total = tuple(_zero() for _ in range(N))
    for lead, (p, q, r), sign in terms:
        cross = triple_cross(g[p], g[q], g[r])
        total = tuple(t + lam[lead - 1] * cv * sign for t, cv in zip(total, cross))
    return total


def _bubble_forms(k, s):
    lam = _lam()
    out = []
    if s == 0:
        l1, l2, l3, l4, l5 = lam
        for i, j, l, m in _indices((2, 1, 1, 1), (5, k)):
            f = (_L(i, l2, l1 + l2) * _LJ(j, 2 * i, l3, l1 + l2 + l3)
                 * _LJ(l, 2 * (i + j), l4, l1 + l2 + l3 + l4) * _LJ(m, 2 * (i + j + l), l5, _one()))
            out.append(((i, j, l, m, 0), FormPoly(0, [f])))
    elif s == 1:
        for i, j, l, m in _indices((0, 1, 1, 1), (3, k - 1)):
            for r, (a, b, c, d, e) in enumerate(PHI_TUPLES, 1):
                la, lb, lc, ld, le = (lam[t - 1] for t in (a, b, c, d, e))
                f = (_P(i, lb, la + lb) * _LJ(j, 2 * i + 1, lc, la + lb + lc)
                     * _LJ(l, 2 * (i + j), ld, la + lb + lc + ld) * _LJ(m, 2 * (i + j + l), le, _one()))
                out.append(((i, j, l, m, r), FormPoly(1, [f * v for v in phi_generator(a, b)])))
    elif s == 2:
        for i, j, l, m in _indices((0, 0, 1, 1), (2, k - 1)):
            for r, (a, b, c, d, e) in enumerate(THETA_TUPLES, 1):
                la, lb, lc, ld, le = (lam[t - 1] for t in (a, b, c, d, e))
                f = (_P(i, lb, la + lb) * _PJ(j, 2 * i + 1, lc, la + lb + lc)
                     * _LJ(l, 2 * (i + j + 1), ld, la + lb + lc + ld) * _LJ(m, 2 * (i + j + l), le, _one()))
                out.append(((i, j, l, m, r), from_proxy(2, _mat_scale(theta_generator(a, b, c), f))))
    elif s == 3:
        for i, j, l, m in _indices((0, 0, 0, 1), (1, k - 1)):
            for r, (a, b, c, d, e) in enumerate(PSI_TUPLES, 1):
                la, lb, lc, ld, le = (lam[t - 1] for t in (a, b, c, d, e))
                f = (_P(i, lb, la + lb) * _PJ(j, 2 * i + 1, lc, la + lb + lc)
                     * _PJ(l, 2 * (i + j + 1), ld, la + lb + lc + ld)
                     * _LJ(m, 2 * (i + j + l) + 3, le, _one()))
                out.append(((i, j, l, m, r), from_proxy(3, tuple(f * v for v in psi_generator(a, b, c, d)))))
    elif s == 4:
        l1, l2, l3, l4, l5 = lam
        for i, j, l, m in _indices((0, 0, 0, 0), (0, k - 1)):
            f = (_P(i, l2, l1 + l2) * _PJ(j, 2 * i + 1, l3, l1 + l2 + l3)
                 * _PJ(l, 2 * (i + j + 1), l4, l1 + l2 + l3 + l4) * _PJ(m, 2 * (i + j + l) + 3, l5, _one()))
            out.append(((i, j, l, m, 0), FormPoly(4, [f])))
    return out


def bubble_labels(k, s):
    """Index tuples (i, j, l, m, r) of the bubble family, in basis order."""
    return [label for label, _ in _bubble_forms(k, s)]


@lru_cache(maxsize=None)
def bubble_basis_T4(k, s):
    """Interior functions of V^{k,s}; not reduced, so dependence shows up as a rank deficit."""
    return PolySpace(s, [f for _, f in _bubble_forms(k, s)], f"bubbles^{k},{s}(T4)", check=False)


# -- dofs ---------------------------------------------------------------------


def volume_tests(k, s):
    """Monomial test tuples for the interior dofs, component-major."""
    degree = {0: k - 5, 1: k - 4, 2: k - 3, 3: k - 2, 4: k - 1}[s]
    ncomp = {0: 1, 1: 4, 2: 6, 3: 4, 4: 1}[s]
    monos = monomials_P(degree, N)
    out = []
    for c in range(ncomp):
        for q in monos:
            test = [_zero()] * ncomp
            test[c] = q
            out.append(tuple(test))
    return out


@lru_cache(maxsize=None)
def dofs_T4(k, s):
    cell = make_refcell(CELL)
    dofs = trace_dofs(cell, s, k) if s < N else []
    dofs += [volume_dof(cell, s, t, "volume") for t in volume_tests(k, s)]
    return tuple(number(dofs))


def dof_matrix_T4(k, s, space=None):
    space = space or build_space_T4(k, s)
    return dof_matrix(dofs_T4(k, s), space.basis)


def unisolvency_T4(k, s, space=None):
    """Exact determinant of the dof-by-basis matrix; ValueError if it is not square."""
    matrix = dof_matrix_T4(k, s, space)
    if len(matrix) != len(matrix[0] if matrix else []):
        raise ValueError(f"dof matrix is {len(matrix)} x {len(matrix[0]) if matrix else 0}")
    return det(matrix)


def exactness_T4(k):
    return exactness_report([build_space_T4(k, s) for s in range(N + 1)])


@dataclass
class PentatopeElement:
    k: int
    s: int

    @property
    def space(self):
        return build_space_T4(self.k, self.s)

    @property
    def dofs(self):
        return dofs_T4(self.k, self.s)

    @property
    def bubbles(self):
        return bubble_basis_T4(self.k, self.s)
