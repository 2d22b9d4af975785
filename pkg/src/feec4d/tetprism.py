"""Spaces, bubbles and dofs on the reference tetrahedral prism (tetrahedron x segment).

Coordinates x1..x3 belong to the tetrahedron and x4 to the segment.  Two
constructions of V^{k,s} are provided: ``tensor_space_W4`` wedges trimmed
3D forms (built with the Koszul operator) with 1D forms in x4, and
``nrt_space_W4`` assembles proxies from the classical 3D blocks CG, DG,
N (first-kind edge elements) and RT.  Block superscripts follow the usual
shifted naming: N^m and RT^m are the spaces with complete degree m.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb

from .formcalc import FormPoly, from_proxy, koszul, vtom
from .linalg import det, kernel
from .orthopoly import integrated_jacobi, integrated_legendre, jacobi, legendre, scaled
from .polycore import ONE, Polynomial, exponents, monomials_P, variables
from .refgeom import make_refcell
from .space import PolySpace, exactness_report, vector_space
from .tracedof import dof_matrix, number, trace_dim_formula, trace_dofs, volume_dof

N = 4
CELL = "prism"
TET = (0, 1, 2)
SEG = (3,)


def _zero(n=N):
    return Polynomial.zero(n)


def _lift3(p):
    return p.embed(N, TET)


def _lift1(p):
    return p.embed(N, SEG)


# -- 3D and 1D building blocks ------------------------------------------------


def _nedelec_extra(m):
    """Homogeneous degree m+1 triples p on R^3 with p . x = 0."""
    x = variables(3)
    monos = exponents(m + 1, 3)
    unknowns = [(c, a) for c in range(3) for a in monos]
    columns = {}
    for c, a in unknowns:
        for b, coeff in (Polynomial.monomial(a) * x[c]).terms.items():
            columns.setdefault(b, {})[(c, a)] = coeff
    out = []
    for vec in kernel(columns.values(), unknowns):
        comps = [_zero(3) for _ in range(3)]
        for (c, a), coeff in vec.items():
            comps[c] = comps[c] + Polynomial.monomial(a, coeff)
        out.append(FormPoly(1, comps, 3))
    return out


@lru_cache(maxsize=None)
def block3d(name, k):
    """One of CG, DG, N, RT on the tetrahedron or CG_T1, DG_T1 on the segment.

    Scalar blocks hold 0-forms; N and RT hold their three components in a
    1-form container on R^3.  CG and DG coincide as polynomial spans.
    """
    if k < 0:
        raise ValueError(f"block order must be non-negative, got {k}")
    if name in ("CG", "DG"):
        return PolySpace(0, [FormPoly(0, [p], 3) for p in monomials_P(k, 3)], f"{name}^{k}(T3)", 3, check=False)
    if name in ("CG_T1", "DG_T1"):
        return PolySpace(0, [FormPoly(0, [p], 1) for p in monomials_P(k, 1)], f"{name}^{k}(T1)", 1, check=False)
    if name == "N":
        forms = vector_space(1, [monomials_P(k, 3)] * 3, 3) + _nedelec_extra(k)
        return PolySpace(1, forms, f"N^{k}(T3)", 3)
    if name == "RT":
        x = variables(3)
        radial = [FormPoly(1, [xi * q for xi in x], 3) for q in monomials_P(k, 3) if q.degree() == k]
        return PolySpace(1, vector_space(1, [monomials_P(k, 3)] * 3, 3) + radial, f"RT^{k}(T3)", 3)
    raise ValueError(f"unknown block {name!r}")


def _scalars(name, k):
    return [f.comps[0] for f in block3d(name, k).basis] if k >= 0 else []


def _vectors(name, k):
    return [f.comps for f in block3d(name, k).basis] if k >= 0 else []


# -- NRT assembly -------------------------------------------------------------


def _nrt_forms(k, s):
    seg_k = [_lift1(p) for p in _scalars("CG_T1", k)]
    seg_low = [_lift1(p) for p in _scalars("DG_T1", k - 1)]
    z = _zero()
    if s == 0:
        return [FormPoly(0, [a * _lift3(q)]) for a in seg_k for q in _scalars("CG", k)]
    if s == 1:
        out = [FormPoly(1, [a * _lift3(v[0]), a * _lift3(v[1]), a * _lift3(v[2]), z])
               for a in seg_k for v in _vectors("N", k - 1)]
        out += [FormPoly(1, [z, z, z, b * _lift3(q)]) for b in seg_low for q in _scalars("CG", k)]
        return out
    if s == 2:
        out = []
        for b in seg_low:
            for v in _vectors("N", k - 1):
                v1, v2, v3 = (b * _lift3(c) for c in v)
                out.append(from_proxy(2, vtom((z, z, v1, z, v2, v3))))
        for a in seg_k:
            for w in _vectors("RT", k - 1):
                w1, w2, w3 = (a * _lift3(c) for c in w)
                out.append(from_proxy(2, vtom((w3, -w2, z, w1, z, z))))
        return out
    if s == 3:
        out = [from_proxy(3, (z, z, z, a * _lift3(q))) for a in seg_k for q in _scalars("DG", k - 1)]
        for b in seg_low:
            for w in _vectors("RT", k - 1):
                out.append(from_proxy(3, tuple(b * _lift3(c) for c in w) + (z,)))
        return out
    return [FormPoly(4, [b * _lift3(q)]) for b in seg_low for q in _scalars("DG", k - 1)]


@lru_cache(maxsize=None)
def nrt_space_W4(k, s):
    if k < 1 or not 0 <= s <= N:
        raise ValueError(f"need k >= 1 and 0 <= s <= 4, got k={k}, s={s}")
    return PolySpace(s, _nrt_forms(k, s), f"NRT V^{k},{s}(W4)")


# -- tensor-product construction ------------------------------------------------


def trimmed_3d(k, s):
    """Trimmed s-forms on R^3: P^{k-1} forms plus the Koszul image of degree k-1 (s+1)-forms."""
    if s == 0:
        return [FormPoly(0, [p], 3) for p in monomials_P(k, 3)]
    low = monomials_P(k - 1, 3)
    out = vector_space(s, [low] * comb(3, s), 3)
    if s < 3:
        top = [q for q in low if q.degree() == k - 1]
        out += [koszul(f) for f in vector_space(s + 1, [top] * comb(3, s + 1), 3)]
    return PolySpace.from_spanning(s, out, f"U{s}", 3).basis


def _segment_forms(k, j):
    if j == 0:
        return [FormPoly(0, [p], 1) for p in monomials_P(k, 1)]
    return [FormPoly(1, [p], 1) for p in monomials_P(k - 1, 1)]


def cross_form(u, w):
    """Wedge of a form u on R^3 (x1..x3) with a form w on R^1 (x4), as a form on R^4."""
    terms = {}
    for I, a in zip(u.indices, u.comps):
        if not a:
            continue
        for J, b in zip(w.indices, w.comps):
            if b:
                key = I + tuple(3 + j for j in J)
                terms[key] = terms.get(key, _zero()) + _lift3(a) * _lift1(b)
    return FormPoly.from_terms(u.s + w.s, terms)


@lru_cache(maxsize=None)
def tensor_space_W4(k, s):
    if k < 1 or not 0 <= s <= N:
        raise ValueError(f"need k >= 1 and 0 <= s <= 4, got k={k}, s={s}")
    forms = []
    for j in (0, 1):
        i = s - j
        if 0 <= i <= 3:
            forms += [cross_form(u, w) for u in trimmed_3d(k, i) for w in _segment_forms(k, j)]
    return PolySpace(s, forms, f"tensor V^{k},{s}(W4)")


def build_space_W4(k, s, method="nrt"):
    return {"nrt": nrt_space_W4, "tensor": tensor_space_W4}[method](k, s)


# -- dimension formulas -------------------------------------------------------


def dim_formula(k, s):
    return {
        0: (k + 1) ** 2 * (k + 2) * (k + 3) // 6,
        1: 2 * k * (k + 1) * (k + 2) * (k + 3) // 3,
        2: (k * k * (k + 2) * (k + 3) + k * (k + 1) ** 2 * (k + 3)) // 2,
        3: k * (k + 1) ** 2 * (k + 2) // 6 + k * k * (k + 1) * (k + 3) // 2,
        4: k * k * (k + 1) * (k + 2) // 6,
    }[s]


def volume_dim_formula(k, s):
    return {
        0: (k - 3) * (k - 2) * (k - 1) ** 2 // 6,
        1: 3 * (k - 1) * comb(k, 3) + k * comb(k - 1, 3),
        2: 3 * k * comb(k, 3) + 3 * (k - 1) * comb(k + 1, 3),
        3: (k - 1) * k * k * (k + 1) // 2 + (k - 1) * k * (k + 1) * (k + 2) // 6,
        4: k * comb(k + 2, 3),
    }[s]


def trace_formula(k, s):
    return trace_dim_formula(CELL, s, k)


# -- bubble factors -------------------------------------------------------------

PRISM_TUPLES = [(1, 2, 3, 4), (2, 3, 4, 1), (3, 4, 1, 2)]


def _lam():
    return make_refcell(CELL).tet_barycentrics


def _nu():
    return make_refcell(CELL).segment_barycentrics


def _grad3(p):
    return tuple(p.diff(i) for i in TET)


def _cross3(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


@dataclass(frozen=True)
class BubbleFactors:
    """Shared factors of the factored prism bubbles and the interior test functions."""

    segment: Polynomial  # nu1 nu2
    tet: Polynomial  # lambda1 lambda2 lambda3 lambda4
    phi: tuple  # per r: (lambda_c lambda_d, N^r)
    psi: tuple  # per r: (lambda_d, curly N^r)


@lru_cache(maxsize=None)
def bubble_factors():
    lam, nu = _lam(), _nu()
    phi, psi = [], []
    for a, b, c, d in PRISM_TUPLES:
        phi.append((lam[c - 1] * lam[d - 1], edge_generator(a, b)))
        psi.append((lam[d - 1], face_generator(a, b, c)))
    return BubbleFactors(nu[0] * nu[1], lam[0] * lam[1] * lam[2] * lam[3], tuple(phi), tuple(psi))


def edge_generator(a, b):
    """lambda_a grad lambda_b - lambda_b grad lambda_a on the tetrahedron (3 components)."""
    lam = _lam()
    la, lb = lam[a - 1], lam[b - 1]
    return tuple(la * gb - lb * ga for ga, gb in zip(_grad3(la), _grad3(lb)))


def face_generator(a, b, c):
    """lambda_a grad b x grad c + lambda_b grad c x grad a + lambda_c grad a x grad b."""
    lam = _lam()
    g = {i: _grad3(lam[i - 1]) for i in (a, b, c)}
    total = (_zero(),) * 3
    for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
        total = tuple(t + lam[p - 1] * v for t, v in zip(total, _cross3(g[q], g[r])))
    return total


# -- explicit bubble families ---------------------------------------------------


def _indices(lows, hi, lo=0):
    out = [idx for idx in product(*(range(low, hi + 1) for low in lows)) if lo <= sum(idx) <= hi]
    return sorted(out, key=lambda t: (sum(t), t))


def _one():
    return Polynomial.constant(ONE, N)


def seg_h1(m):
    """L_m(nu2), m >= 2."""
    return integrated_legendre(m).compose([_nu()[1]])


def seg_l2(m):
    """P_m(nu2), m >= 0."""
    return legendre(m).compose([_nu()[1]])


def tet_h1(i, j, l, abcd=(1, 2, 3, 4)):
    lam = _lam()
    la, lb, lc, ld = (lam[t - 1] for t in abcd)
    return (scaled(integrated_legendre(i), lb, la + lb, degree=i)
            * scaled(integrated_jacobi(j, 2 * i), lc, la + lb + lc, degree=j)
            * scaled(integrated_jacobi(l, 2 * (i + j)), ld, _one(), degree=l))


def tet_l2(i, j, l):
    lam = _lam()
    l1, l2, l3, l4 = lam
    return (scaled(legendre(i), l2, l1 + l2, degree=i)
            * scaled(jacobi(j, 2 * i + 1), l3, l1 + l2 + l3, degree=j)
            * scaled(jacobi(l, 2 * (i + j + 1)), l4, _one(), degree=l))


def tet_hcurl(i, j, l, r):
    a, b, c, d = PRISM_TUPLES[r - 1]
    lam = _lam()
    la, lb, lc, ld = (lam[t - 1] for t in (a, b, c, d))
    f = (scaled(legendre(i), lb, la + lb, degree=i)
         * scaled(integrated_jacobi(j, 2 * i + 1), lc, la + lb + lc, degree=j)
         * scaled(integrated_jacobi(l, 2 * (i + j)), ld, _one(), degree=l))
    return tuple(f * v for v in edge_generator(a, b))


def tet_hdiv(i, j, l, r):
    a, b, c, d = PRISM_TUPLES[r - 1]
    lam = _lam()
    la, lb, lc, ld = (lam[t - 1] for t in (a, b, c, d))
    f = (scaled(legendre(i), lb, la + lb, degree=i)
         * scaled(jacobi(j, 2 * i + 1), lc, la + lb + lc, degree=j)
         * scaled(integrated_jacobi(l, 2 * (i + j + 1)), ld, _one(), degree=l))
    return tuple(f * v for v in face_generator(a, b, c))


def _edge_slots(v):
    """2-form with F14, F24, F34 taken from a 3-vector."""
    z = _zero()
    return from_proxy(2, vtom((z, z, v[0], z, v[1], v[2])))


def _face_slots(v):
    """2-form with F12 = v3, F13 = -v2, F23 = v1."""
    z = _zero()
    return from_proxy(2, vtom((v[2], -v[1], z, v[0], z, z)))


def _explicit_bubbles(k, s):
    z = _zero()
    h1_3d = _indices((2, 1, 1), k, lo=4)
    curl_3d = _indices((0, 1, 1), k - 1, lo=2)
    div_3d = _indices((0, 0, 1), k - 1, lo=1)
    l2_3d = _indices((0, 0, 0), k - 1)
    h1_1d = range(2, k + 1)
    l2_1d = range(0, k)
    out = []
    if s == 0:
        out = [FormPoly(0, [tet_h1(*t) * seg_h1(m)]) for t in h1_3d for m in h1_1d]
    elif s == 1:
        for t in curl_3d:
            for r in (1, 2, 3):
                v = tet_hcurl(*t, r)
                out += [FormPoly(1, [c * seg_h1(m) for c in v] + [z]) for m in h1_1d]
        out += [FormPoly(1, [z, z, z, tet_h1(*t) * seg_l2(m)]) for t in h1_3d for m in l2_1d]
    elif s == 2:
        for t in curl_3d:
            for r in (1, 2, 3):
                v = tet_hcurl(*t, r)
                out += [_edge_slots([c * seg_l2(m) for c in v]) for m in l2_1d]
        for t in div_3d:
            for r in (1, 2, 3):
                v = tet_hdiv(*t, r)
                out += [_face_slots([c * seg_h1(m) for c in v]) for m in h1_1d]
    elif s == 3:
        out = [from_proxy(3, (z, z, z, tet_l2(*t) * seg_h1(m))) for t in l2_3d for m in h1_1d]
        for t in div_3d:
            for r in (1, 2, 3):
                v = tet_hdiv(*t, r)
                out += [from_proxy(3, tuple(c * seg_l2(m) for c in v) + (z,)) for m in l2_1d]
    else:
        out = [FormPoly(4, [tet_l2(*t) * seg_l2(m)]) for t in l2_3d for m in l2_1d]
    return out


# -- factored bubbles and interior tests ---------------------------------------


def _products(tet_degree, seg_degree):
    """Monomials q(x4) p(x1, x2, x3) with the given degree caps, segment-major."""
    if tet_degree < 0 or seg_degree < 0:
        return []
    return [_lift1(a) * _lift3(b) for a in monomials_P(seg_degree, 1) for b in monomials_P(tet_degree, 3)]


def interior_fields(k, s):
    """Interior test/bubble fields as (group, proxy) pairs.

    The proxies are scalars (s = 0, 4), 4-vectors (s = 1, 3) or, for
    s = 2, six-vectors in (12, 13, 14, 23, 24, 34) order.  Each r and each
    member of the scalar multiplier basis gives one entry.
    """
    bf = bubble_factors()
    z = _zero()
    out = []
    if s == 0:
        out = [("volume", q * bf.tet * bf.segment) for q in _products(k - 4, k - 2)]
    elif s == 1:
        for r in range(3):
            w, vec = bf.phi[r]
            out += [("volume-1", tuple(q * w * bf.segment * c for c in vec) + (z,)) for q in _products(k - 3, k - 2)]
        out += [("volume-2", (z, z, z, q * bf.tet)) for q in _products(k - 4, k - 1)]
    elif s == 2:
        for r in range(3):
            w, vec = bf.phi[r]
            for q in _products(k - 3, k - 1):
                a = [q * w * c for c in vec]
                out.append(("volume-1", (z, z, a[0], z, a[1], a[2])))
        for r in range(3):
            w, vec = bf.psi[r]
            for q in _products(k - 2, k - 2):
                a = [q * w * bf.segment * c for c in vec]
                out.append(("volume-2", (a[2], -a[1], z, a[0], z, z)))
    elif s == 3:
        for r in range(3):
            w, vec = bf.psi[r]
            out += [("volume-1", tuple(q * w * c for c in vec) + (z,)) for q in _products(k - 2, k - 1)]
        out += [("volume-2", (z, z, z, q * bf.segment)) for q in _products(k - 1, k - 2)]
    else:
        out = [("volume", q) for q in _products(k - 1, k - 1)]
    return out


def _factored_bubbles(k, s):
    out = []
    for _, f in interior_fields(k, s):
        if s in (0, 4):
            out.append(FormPoly(s, [f]))
        elif s == 1:
            out.append(FormPoly(1, f))
        elif s == 2:
            out.append(from_proxy(2, vtom(f)))
        else:
            out.append(from_proxy(3, f))
    return out


@lru_cache(maxsize=None)
def bubble_basis_W4(k, s, form="factored"):
    """Interior functions of V^{k,s}(W4).

    ``form`` selects the factored restatement (shared bubble factors times
    monomial multipliers) or the explicit orthogonal-polynomial families.
    Members are not reduced, so any dependence shows as a rank deficit.
    """
    forms = {"factored": _factored_bubbles, "explicit": _explicit_bubbles}[form](k, s)
    return PolySpace(s, forms, f"bubbles^{k},{s}(W4)", check=False)


# -- dofs ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def dofs_W4(k, s):
    cell = make_refcell(CELL)
    dofs = trace_dofs(cell, s, k) if s < N else []
    dofs += [volume_dof(cell, s, f if isinstance(f, tuple) else (f,), group) for group, f in interior_fields(k, s)]
    return tuple(number(dofs))


def dof_matrix_W4(k, s, space=None):
    space = space or nrt_space_W4(k, s)
    return dof_matrix(dofs_W4(k, s), space.basis)


def unisolvency_W4(k, s, space=None):
    matrix = dof_matrix_W4(k, s, space)
    if len(matrix) != len(matrix[0] if matrix else []):
        raise ValueError(f"dof matrix is {len(matrix)} x {len(matrix[0]) if matrix else 0}")
    return det(matrix)


def exactness_W4(k):
    return exactness_report([nrt_space_W4(k, s) for s in range(N + 1)])


@dataclass
class PrismElement:
    k: int
    s: int

    @property
    def space(self):
        return nrt_space_W4(self.k, self.s)

    @property
    def dofs(self):
        return dofs_W4(self.k, self.s)

    @property
    def bubbles(self):
        return bubble_basis_W4(self.k, self.s)
