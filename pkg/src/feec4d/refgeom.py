"""Reference cells, entity lattices with affine charts, cell maps and pullbacks.

All cells use [-1, 1]-style coordinates.  A d-simplex has vertices
-1 + 2 e_i (i = 1..d) followed by (-1, ..., -1); the tetrahedral prism is the
reference tetrahedron times the segment [-1, 1] in x4, bottom vertices first.

Every entity carries an affine chart x = origin + sum_j t_j axes_j over a
product of unit simplices.  Simplicial entities use their sorted vertex list
(origin at the lowest index, axes towards the others); quadrilaterals and
prism facets put the x4 direction last.  Edge directions, face orientations
and facet charts all follow from this single rule.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations, permutations
from math import comb

from .formcalc import FormPoly, form_indices, levi_civita
from .linalg import det
from .polycore import ONE, ZERO, Polynomial, as_rational, integrate_unit, monomial_integral_product


class CellKind(str, Enum):
    SEGMENT = "segment"
    TRIANGLE = "triangle"
    TETRAHEDRON = "tetrahedron"
    PENTATOPE = "pentatope"
    TET_PRISM = "prism"


SIMPLEX_DIM = {CellKind.SEGMENT: 1, CellKind.TRIANGLE: 2, CellKind.TETRAHEDRON: 3, CellKind.PENTATOPE: 4}
SIMPLEX_NAMES = {0: "vertex", 1: "edge", 2: "triangle", 3: "tet", 4: "pentatope"}


def _vec(values):
    return tuple(as_rational(v) for v in values)


def _minor(matrix, rows, cols):
    if not rows:
        return ONE
    total = ZERO
    for perm in permutations(range(len(cols))):
        term = as_rational(levi_civita(*perm))
        for r, p in zip(rows, perm):
            term *= matrix[r][cols[p]]
        total += term
    return total


@dataclass(eq=False)
class Entity:
    """A sub-entity of a reference cell with its affine chart."""

    kind: str
    vertices: tuple
    origin: tuple
    axes: tuple
    factors: tuple
    owner: str = ""
    _restricted: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self):
        return len(self.axes)

    @property
    def ambient(self):
        return len(self.origin)

    def __hash__(self):
        return hash((self.kind, self.vertices))

    def __eq__(self, other):
        return isinstance(other, Entity) and (self.kind, self.vertices) == (other.kind, other.vertices)

    def label(self):
        return f"{self.kind}{'-'.join(str(v + 1) for v in self.vertices)}"

    def jacobian(self):
        """Ambient-by-local matrix whose columns are the chart axes."""
        return [[ax[i] for ax in self.axes] for i in range(self.ambient)]

    def chart(self):
        d = self.dim
        return [Polynomial.affine(self.origin[i], [ax[i] for ax in self.axes]) if d else
                Polynomial.constant(self.origin[i], 0) for i in range(self.ambient)]

    def point(self, t):
        return tuple(o + sum((tj * ax[i] for tj, ax in zip(t, self.axes)), ZERO) for i, o in enumerate(self.origin))

    def restrict(self, p):
        """p composed with the chart, a polynomial in the chart parameters."""
        if self.dim == 0:
            return Polynomial.constant(p.evaluate(self.origin), 0)
        out = Polynomial.zero(self.dim)
        for a, c in p.terms.items():
            out = out + self.restricted_monomial(a) * c
        return out

    def restricted_monomial(self, alpha):
        cached = self._restricted.get(alpha)
        if cached is not None:
            return cached
        if not any(alpha):
            value = Polynomial.constant(1, self.dim)
        else:
            i = max(k for k, e in enumerate(alpha) if e)
            lower = list(alpha)
            lower[i] -= 1
            value = self.restricted_monomial(tuple(lower)) * self.chart()[i]
        self._restricted[alpha] = value
        return value

    def integrate_local(self, p):
        """Integral over the chart parameter domain (no metric factor)."""
        return integrate_unit(p, self.factors)

    def pullback_matrix(self, s):
        """Rows: ambient s-index sets; columns: local s-index sets; entries: minors."""
        jac = self.jacobian()
        amb = form_indices(self.ambient, s)
        loc = form_indices(self.dim, s)
        return [[_minor(jac, J, I) for I in loc] for J in amb]

    def weighted_normal(self):
        """Normal of a facet scaled by the chart's 3-volume factor (generalized cross product)."""
        if self.dim != self.ambient - 1 or self.ambient != 4:
            raise ValueError("normals are defined for facets of 4D cells")
        a, b, c = self.axes
        return tuple(
            sum((as_rational(levi_civita(i, j, k, l)) * a[j] * b[k] * c[l]
                 for j, k, l in permutations(range(4), 3) if i not in (j, k, l)), ZERO)
            for i in range(4)
        )


def _simplex_vertices(n):
    verts = []
    for i in range(n):
        v = [-1] * n
        v[i] = 1
        verts.append(_vec(v))
    verts.append(_vec([-1] * n))
    return verts


def _simplex_entity(vertices, idx, kind=None):
    idx = tuple(sorted(idx))
    origin = vertices[idx[0]]
    axes = tuple(tuple(vertices[j][i] - origin[i] for i in range(len(origin))) for j in idx[1:])
    d = len(axes)
    return Entity(kind or SIMPLEX_NAMES[d], idx, origin, axes, (d,) if d else ())


class RefCell:
    """A reference cell with its vertex list, entity lattice and barycentric data."""

    def __init__(self, kind):
        self.kind = CellKind(kind)
        if self.kind is CellKind.TET_PRISM:
            self._build_prism()
        elif self.kind is CellKind.SEGMENT:
            self._build_segment()
        else:
            self._build_simplex(SIMPLEX_DIM[self.kind])
        for ents in self.entities.values():
            for e in ents:
                e.owner = self.kind.value
        self.volume_chart.owner = self.kind.value
        self._moments = {}

    # -- construction -----------------------------------------------------

    def _build_segment(self):
        self.dim = 1
        self.vertices = [_vec([-1]), _vec([1])]
        x = Polynomial.variable(0, 1)
        self.barycentrics = [(1 - x) / 2, (1 + x) / 2]
        self.entities = {0: [_simplex_entity(self.vertices, (i,)) for i in range(2)],
                         1: [_simplex_entity(self.vertices, (0, 1))]}
        self.volume_chart = self.entities[1][0]

    def _build_simplex(self, n):
        self.dim = n
        self.vertices = _simplex_vertices(n)
        x = [Polynomial.variable(i, n) for i in range(n)]
        lam = [(xi + 1) / 2 for xi in x]
        lam.append(1 - sum(lam, Polynomial.zero(n)))
        self.barycentrics = lam
        self.entities = {
            d: [_simplex_entity(self.vertices, idx) for idx in combinations(range(n + 1), d + 1)]
            for d in range(n + 1)
        }
        # cell chart with origin at (-1, ..., -1): diagonal axes 2 e_i
        self.volume_chart = Entity("cell", tuple(range(n + 1)), self.vertices[n],
                                   tuple(tuple(self.vertices[j][i] - self.vertices[n][i] for i in range(n))
                                         for j in range(n)), (n,))

    def _build_prism(self):
        self.dim = 4
        tet = _simplex_vertices(3)
        self.vertices = [v + (as_rational(-1),) for v in tet] + [v + (as_rational(1),) for v in tet]
        x = [Polynomial.variable(i, 4) for i in range(4)]
        lam = [(xi + 1) / 2 for xi in x[:3]]
        lam.append(1 - sum(lam, Polynomial.zero(4)))
        self.tet_barycentrics = lam
        self.segment_barycentrics = [(1 - x[3]) / 2, (1 + x[3]) / 2]
        self.barycentrics = lam + self.segment_barycentrics
        verts = self.vertices
        up = tuple(verts[4][i] - verts[0][i] for i in range(4))

        def product_entity(kind, base):
            simplex = _simplex_entity(verts, base)
            idx = tuple(base) + tuple(b + 4 for b in base)
            return Entity(kind, idx, simplex.origin, simplex.axes + (up,), simplex.factors + (1,))

        ents = {d: [] for d in range(5)}
        for d in range(4):
            layers = [_simplex_entity(verts, base) for base in combinations(range(4), d + 1)]
            layers += [_simplex_entity(verts, tuple(b + 4 for b in base)) for base in combinations(range(4), d + 1)]
            ents[d].extend(layers)
        for d, kind in ((1, "edge"), (2, "quad"), (3, "triprism")):
            for base in combinations(range(4), d):
                if d == 1:
                    ents[1].append(_simplex_entity(verts, (base[0], base[0] + 4)))
                else:
                    ents[d].append(product_entity(kind, base))
        # the tetrahedral facets were added as d == 3 layers above
        ents[4] = [product_entity("cell", (0, 1, 2, 3))]
        self.entities = ents
        # cell chart with origin at (-1, -1, -1, -1): diagonal axes 2 e_i
        low = verts[3]
        axes = tuple(tuple(verts[j][i] - low[i] for i in range(4)) for j in range(3)) + (up,)
        self.volume_chart = Entity("cell", tuple(range(8)), low, axes, (3, 1))

    # -- queries ------------------------------------------------------------

    @property
    def nvars(self):
        return self.dim

    def entity_list(self, dim=None):
        if dim is not None:
            return list(self.entities[dim])
        return [e for d in sorted(self.entities) for e in self.entities[d]]

    def facets(self):
        return list(self.entities[self.dim - 1])

    def counts(self):
        out = {}
        for ents in self.entities.values():
            for e in ents:
                out[e.kind] = out.get(e.kind, 0) + 1
        return out

    def centroid(self):
        n = len(self.vertices)
        return tuple(sum((v[i] for v in self.vertices), ZERO) / n for i in range(self.dim))

    def volume(self):
        return self.integrate(Polynomial.constant(1, self.dim))

    def contains(self, point):
        point = _vec(point)
        return all(lam.evaluate(point) >= 0 for lam in self.barycentrics)

    def outward_normal(self, facet, unit=False):
        """Outward facet normal; weighted by the chart 3-volume unless ``unit``."""
        n = facet.weighted_normal()
        centre = self.centroid()
        fc = tuple(sum((self.vertices[v][i] for v in facet.vertices), ZERO) / len(facet.vertices)
                   for i in range(self.dim))
        if sum((a * (f - c) for a, f, c in zip(n, fc, centre)), ZERO) < 0:
            n = tuple(-a for a in n)
        if not unit:
            return n
        norm2 = sum((a * a for a in n), ZERO)
        num, den = int(norm2.numerator), int(norm2.denominator)
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            raise ValueError(f"unit normal of {facet.label()} is irrational; use the weighted normal")
        return tuple(a * rd / rn for a in n)

    def moment(self, alpha):
        """Integral of the monomial x^alpha over the cell."""
        alpha = tuple(alpha)
        value = self._moments.get(alpha)
        if value is None:
            chart = self.volume_chart
            jac = abs(det(chart.jacobian()))
            value = jac * _diagonal_moment(alpha, chart.origin, tuple(chart.axes[i][i] for i in range(self.dim)),
                                           chart.factors)
            self._moments[alpha] = value
        return value

    def integrate(self, p):
        if p.nvars != self.dim:
            raise ValueError(f"polynomial in {p.nvars} variables on a {self.dim}-dimensional cell")
        return sum((c * self.moment(a) for a, c in p.terms.items()), ZERO)


def _isqrt_exact(n):
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


@lru_cache(maxsize=None)
def _diagonal_moment(alpha, origin, scales, factors):
    # x_i = o_i + a_i t_i; expand each factor binomially and integrate term by term
    partial = {(): ONE}
    for e, o, a in zip(alpha, origin, scales):
        nxt = {}
        for beta, c in partial.items():
            for b in range(e + 1):
                coef = c * comb(e, b) * o ** (e - b) * a ** b
                if coef:
                    key = beta + (b,)
                    nxt[key] = nxt.get(key, ZERO) + coef
        partial = nxt
    return sum((c * monomial_integral_product(beta, factors) for beta, c in partial.items()), ZERO)


@lru_cache(maxsize=None)
def make_refcell(kind):
    return RefCell(kind)


def shape_functions(kind):
    """Vertex shape functions: barycentrics for simplices, tet x segment products for the prism."""
    cell = make_refcell(kind)
    if cell.kind is CellKind.TET_PRISM:
        lam, nu = cell.tet_barycentrics, cell.segment_barycentrics
        return [l * nu[0] for l in lam] + [l * nu[1] for l in lam]
    return list(cell.barycentrics)


# -- cell maps and pullbacks ---------------------------------------------------


class MapKind(str, Enum):
    AFFINE = "affine"
    PRISMATIC = "prismatic"


@dataclass(frozen=True)
class CellMap:
    """x -> matrix x + offset, with its Jacobian determinant."""

    kind: MapKind
    matrix: tuple
    offset: tuple

    @property
    def jacobian(self):
        return self.matrix

    @property
    def determinant(self):
        return det([list(r) for r in self.matrix])

    def __call__(self, point):
        point = _vec(point)
        return tuple(sum((a * x for a, x in zip(row, point)), ZERO) + b for row, b in zip(self.matrix, self.offset))

    def components(self):
        n = len(self.offset)
        return [Polynomial.affine(b, list(row)) for row, b in zip(self.matrix, self.offset)] if n else []

    def compose(self, inner):
        """The map x -> self(inner(x))."""
        n = len(self.offset)
        mat = tuple(tuple(sum((self.matrix[i][k] * inner.matrix[k][j] for k in range(n)), ZERO) for j in range(n))
                    for i in range(n))
        off = tuple(sum((self.matrix[i][k] * inner.offset[k] for k in range(n)), ZERO) + self.offset[i]
                    for i in range(n))
        kind = MapKind.PRISMATIC if MapKind.PRISMATIC in (self.kind, inner.kind) else MapKind.AFFINE
        return CellMap(kind, mat, off)


def affine_map(matrix, offset, kind=MapKind.AFFINE):
    return CellMap(MapKind(kind), tuple(_vec(r) for r in matrix), _vec(offset))


def make_map(kind, vertices):
    """Map sum_i v_i' N_i from the reference cell onto the given physical vertices."""
    kind = MapKind(kind)
    verts = [_vec(v) for v in vertices]
    if kind is MapKind.AFFINE:
        if len(verts) != 5:
            raise ValueError("an affine pentatope map needs 5 vertices")
        shapes = shape_functions(CellKind.PENTATOPE)
    else:
        if len(verts) != 8:
            raise ValueError("a prismatic map needs 8 vertices")
        lift = [tuple(t - b for t, b in zip(verts[i + 4], verts[i])) for i in range(4)]
        if len(set(lift)) != 1 or any(lift[0][:3]) or not lift[0][3]:
            raise ValueError("top tetrahedron must be a pure x4-translate of the bottom one")
        if len({v[3] for v in verts[:4]}) != 1:
            raise ValueError("bottom tetrahedron must lie in one time slab (no space-time shear)")
        shapes = shape_functions(CellKind.TET_PRISM)
    comps = [sum((N * v[i] for N, v in zip(shapes, verts)), Polynomial.zero(4)) for i in range(4)]
    if any(c.degree() > 1 for c in comps):
        raise ValueError("cell map is not affine")
    zero = (0, 0, 0, 0)
    matrix = [[c.coeff(tuple(int(j == i) for j in range(4))) for i in range(4)] for c in comps]
    offset = [c.coeff(zero) for c in comps]
    result = affine_map(matrix, offset, kind)
    if not result.determinant:
        raise ValueError("degenerate cell map")
    return result


def pullback_affine(omega, matrix, offset):
    """Pull a form on R^n back along x = matrix t + offset (matrix is n x d)."""
    n = omega.n
    d = len(matrix[0]) if matrix else 0
    subs = [Polynomial.affine(offset[i], list(matrix[i])) for i in range(n)]
    amb = form_indices(n, omega.s)
    loc = form_indices(d, omega.s)
    if omega.s > d:
        raise ValueError(f"a {omega.s}-form has no pullback to a {d}-dimensional chart")
    comps = [Polynomial.zero(d) for _ in loc]
    for J, coeff in zip(amb, omega.comps):
        if not coeff:
            continue
        moved = coeff.compose(subs)
        for k, I in enumerate(loc):
            m = _minor(matrix, J, I)
            if m:
                comps[k] = comps[k] + moved * m
    return FormPoly(omega.s, comps, d)


def pullback(omega, cellmap):
    if not isinstance(cellmap, CellMap):
        raise TypeError("unsupported map kind")
    return pullback_affine(omega, cellmap.matrix, cellmap.offset)
