"""Facet traces, entity-local trace proxies and degrees of freedom.

A trace has two faces.  ``raw`` is the ambient object (u, the bivector
(E n - n E)/2, n x F or G.n on a facet); ``local`` is the entity proxy used
by the dofs: the pullback of the form through the entity chart, written as
a scalar or a 2- or 3-vector.  For 3-forms on facets the pullback is signed
by the chart orientation relative to the outward normal, so ``local`` equals
(G.n) times the chart volume factor.

Each ``Dof`` stores weight polynomials for the raw ambient components of the
form, so applying it is a sum of integrals of products; ``dof_matrix`` turns
those into functional vectors over (component, monomial) pairs once per dof.
"""

from dataclasses import dataclass
from math import comb

from .formcalc import (FormPoly, contract, cross_vm, curl_skew, curl_vec, div_skew, div_vec, dot, form_indices, grad,
                       outer_skew, skw_grad, upsilon)
from .linalg import det
from .polycore import ZERO, Polynomial, monomial_integral_product, monomials_P, monomials_product, monomials_Q
from .refgeom import Entity, make_refcell

FACET_DIM = 3


@dataclass(frozen=True)
class TraceResult:
    raw: object
    local: tuple
    entity: Entity
    normal: tuple = None


def _orientation(entity):
    """+1 when (outward normal, chart axes) is a positive frame of R^4, else -1."""
    n = make_refcell(entity.owner).outward_normal(entity)
    return 1 if det([list(n)] + [list(a) for a in entity.axes]) > 0 else -1


def local_form(omega, entity):
    """Pullback of ``omega`` through the entity chart (a form on R^dim)."""
    if omega.s > entity.dim:
        raise ValueError(f"a {omega.s}-form has no trace on a {entity.dim}-dimensional entity")
    pb = entity.pullback_matrix(omega.s)
    comps = [Polynomial.zero(entity.dim) for _ in form_indices(entity.dim, omega.s)]
    for J, coeff in enumerate(omega.comps):
        if not coeff:
            continue
        moved = entity.restrict(coeff)
        for I, m in enumerate(pb[J]):
            if m:
                comps[I] = comps[I] + moved * m
    return FormPoly(omega.s, comps, entity.dim)


def local_proxy(form):
    """Scalar or vector proxy of a form on R^d for d <= 3."""
    d, s, c = form.n, form.s, form.comps
    if s in (0, d) or s == 1:
        return tuple(c)
    if d == 3 and s == 2:
        return (c[2], -c[1], c[0])  # (w23, -w13, w12)
    raise ValueError(f"no proxy for {s}-forms on R^{d}")


def proxy_to_raw_local(d, s, test):
    """Raw local weights r_I with sum_I w_I r_I equal to proxy(w) . test."""
    if d == 3 and s == 2:
        q1, q2, q3 = test
        return (q3, -q2, q1)
    return tuple(test)


def trace(omega, entity, normal=None):
    """Trace of a form on a cell entity; see the module docstring for conventions."""
    if omega.s == 4:
        raise ValueError("traces of 4-forms are not defined")
    local_fm = local_form(omega, entity)
    sign = _orientation(entity) if entity.dim == FACET_DIM and omega.s == FACET_DIM else 1
    local = tuple(c * sign for c in local_proxy(local_fm))
    proxy = upsilon(omega)
    if entity.dim == 0:
        restrict = lambda p: Polynomial.constant(p.evaluate(entity.origin), 0)  # noqa: E731
    else:
        restrict = entity.restrict
    if entity.dim != FACET_DIM:
        raw = _map_proxy(proxy, omega.s, restrict)
        return TraceResult(raw, local, entity)
    if normal is None:
        cell = make_refcell(entity.owner)
        try:
            normal = cell.outward_normal(entity, unit=True)
        except ValueError:
            normal = cell.outward_normal(entity)
    n = tuple(Polynomial.constant(v, 4) for v in normal)
    if omega.s == 0:
        raw = proxy
    elif omega.s == 1:
        raw = outer_skew(proxy, n)
    elif omega.s == 2:
        raw = cross_vm(n, proxy)
    else:
        raw = dot(proxy, n)
    return TraceResult(_map_proxy(raw, omega.s, restrict), local, entity, tuple(normal))


def _map_proxy(obj, s, fn):
    if isinstance(obj, Polynomial):
        return fn(obj)
    return tuple(_map_proxy(o, s, fn) for o in obj)


# -- entity test spaces -------------------------------------------------------


def _components(dim, spaces):
    """One test tuple per (component, basis member) from per-component spaces."""
    out = []
    for c, space in enumerate(spaces):
        for q in space:
            test = [Polynomial.zero(dim)] * len(spaces)
            test[c] = q
            out.append(tuple(test))
    return out


def entity_tests(entity, s, k):
    """Test functions in the entity's local proxy layout, grouped: [(group, [tests])]."""
    kind, d = entity.kind, entity.dim
    if s > d or s > FACET_DIM:
        raise ValueError(f"no {s}-form dofs on a {kind}")
    P = lambda m: monomials_P(m, d)  # noqa: E731
    if kind == "vertex":
        return [("vertex", [()])]
    if kind == "edge":
        return [("edge", [(q,) for q in P(k - 2 + s)])]
    if kind == "triangle":
        if s == 1:
            return [("triangle", _components(2, [P(k - 2)] * 2))]
        return [("triangle", [(q,) for q in P(k - 3 + s)])]
    if kind == "quad":
        if s == 0:
            return [("quad", [(q,) for q in monomials_Q((k - 2, k - 2))])]
        if s == 2:
            return [("quad", [(q,) for q in monomials_Q((k - 1, k - 1))])]
        # (Tr x nu) . (q1, q2) = U_s q1 - U_t q2 in the (t, s) chart
        zero = Polynomial.zero(2)
        tests = [(zero, q) for q in monomials_Q((k - 2, k - 1))]
        tests += [(-q, zero) for q in monomials_Q((k - 1, k - 2))]
        return [("quad", tests)]
    if kind == "tet":
        if s in (0, 3):
            return [("tet", [(q,) for q in P(k - 4 + s)])]
        return [("tet", _components(3, [P(k - 4 + s)] * 3))]
    if kind == "triprism":
        def prod(a, b):  # Q^a on the segment times P^b on the triangle
            return monomials_product([(b, (0, 1)), (a, (2,))])
        if s == 0:
            return [("triprism", [(q,) for q in prod(k - 2, k - 3)])]
        if s == 3:
            return [("triprism", [(q,) for q in prod(k - 1, k - 1)])]
        if s == 1:
            first, second = prod(k - 2, k - 2), prod(k - 1, k - 3)
        else:
            first, second = prod(k - 1, k - 2), prod(k - 2, k - 1)
        return [("triprism-1", _components(3, [first, first, []])),
                ("triprism-2", _components(3, [[], [], second]))]
    raise ValueError(f"unsupported entity kind {kind!r}")


# -- dofs -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Dof:
    """One linear functional.

    ``kind`` is "point", "entity" or "volume".  ``weights`` holds one
    polynomial per raw ambient component: chart-parameter polynomials for
    entity dofs, cell polynomials for volume dofs.
    """

    kind: str
    entity: Entity
    s: int
    group: str
    test: tuple
    weights: tuple
    id: int = -1

    def label(self):
        return f"{self.group}@{self.entity.label()}#{self.id}"


def entity_dofs(cell, entity, s, k):
    if k < 1:
        raise ValueError("order k must be at least 1")
    out = []
    if entity.kind == "vertex":
        if s != 0:
            raise ValueError("vertex dofs exist only for 0-forms")
        return [Dof("point", entity, 0, "vertex", (), (Polynomial.constant(1, 0),))]
    sign = _orientation(entity) if entity.dim == FACET_DIM and s == FACET_DIM else 1
    pb = entity.pullback_matrix(s)
    for group, tests in entity_tests(entity, s, k):
        for test in tests:
            local = proxy_to_raw_local(entity.dim, s, test)
            weights = []
            for row in pb:
                w = Polynomial.zero(entity.dim)
                for m, r in zip(row, local):
                    if m and r:
                        w = w + r * (m * sign)
                weights.append(w)
            out.append(Dof("entity", entity, s, group, tuple(test), tuple(weights)))
    return out


def trace_dofs(cell, s, k):
    out = []
    for d in range(max(s, 0), cell.dim):
        for ent in cell.entity_list(d):
            out.extend(entity_dofs(cell, ent, s, k))
    return out


def proxy_weights(s, test):
    """Raw-component weights for the pairing of a proxy with ``test``.

    s = 2 takes the six-vector (12, 13, 14, 23, 24, 34) of L(q): F : L(q)
    equals sum_{i<j} w_ij q_ij because F = L(w)/2.
    """
    test = tuple(test)
    if s == 3:
        q1, q2, q3, q4 = test
        return (-q4, q3, -q2, q1)  # raw order (123, 124, 134, 234)
    return test


def volume_dof(cell, s, test, group):
    return Dof("volume", cell.volume_chart, s, group, tuple(test), proxy_weights(s, test))


def number(dofs):
    return [Dof(d.kind, d.entity, d.s, d.group, d.test, d.weights, i) for i, d in enumerate(dofs)]


def apply(dof, omega):
    """Evaluate the functional on a form."""
    if omega.s != dof.s:
        raise ValueError(f"{dof.s}-form dof applied to a {omega.s}-form")
    if dof.kind == "point":
        return omega.comps[0].evaluate(dof.entity.origin)
    if dof.kind == "entity":
        total = ZERO
        ent = dof.entity
        for coeff, w in zip(omega.comps, dof.weights):
            if coeff and w:
                total += ent.integrate_local(ent.restrict(coeff) * w)
        return total
    cell = make_refcell(dof.entity.owner)
    integrand = Polynomial.zero(omega.n)
    for coeff, w in zip(omega.comps, dof.weights):
        if coeff and w:
            integrand = integrand + coeff * w
    return cell.integrate(integrand)


def functional(dof, needed):
    """Values of ``dof`` on the monomial forms x^alpha e_J for (J, alpha) in ``needed``."""
    out = {}
    if dof.kind == "point":
        pt = dof.entity.origin
        for J, alphas in needed.items():
            for a in alphas:
                v = dof.weights[0].coeff(())
                for x, e in zip(pt, a):
                    if e:
                        v *= x ** e
                out[(J, a)] = v
        return out
    if dof.kind == "entity":
        ent = dof.entity
        for J, alphas in needed.items():
            w = dof.weights[J]
            if not w:
                continue
            memo = {}
            wt = list(w.terms.items())
            for a in alphas:
                total = ZERO
                for beta, c in ent.restricted_monomial(a).terms.items():
                    m = memo.get(beta)
                    if m is None:
                        m = sum((cw * monomial_integral_product(tuple(x + y for x, y in zip(beta, g)), ent.factors)
                                 for g, cw in wt), ZERO)
                        memo[beta] = m
                    total += c * m
                if total:
                    out[(J, a)] = total
        return out
    cell = make_refcell(dof.entity.owner)
    for J, alphas in needed.items():
        w = dof.weights[J]
        if not w:
            continue
        wt = list(w.terms.items())
        for a in alphas:
            total = sum((cw * cell.moment(tuple(x + y for x, y in zip(a, g))) for g, cw in wt), ZERO)
            if total:
                out[(J, a)] = total
    return out


def dof_matrix(dofs, basis):
    """Matrix with entries dof_i(basis_j), via functional vectors."""
    needed = {}
    vectors = [b.to_vector() for b in basis]
    for vec in vectors:
        for J, a in vec:
            needed.setdefault(J, set()).add(a)
    rows = []
    for dof in dofs:
        f = functional(dof, needed)
        rows.append([sum((c * f.get(key, ZERO) for key, c in vec.items()), ZERO) for vec in vectors])
    return rows


def trace_dim_formula(cell_kind, s, k):
    """Closed-form number of trace dofs."""
    if cell_kind == "pentatope":
        return {0: 5 * k * (k * k + 5) // 6, 1: 5 * k * (k * k + k + 2) // 2,
                2: 5 * k * (k * k + 2 * k + 1) // 2, 3: 5 * comb(k + 2, 3), 4: 0}[s]
    return {0: k * (7 * k * k + 17) // 3, 1: k * (7 * k * k + 3 * k + 6),
            2: k * (7 * k * k + 6 * k + 1), 3: k * (7 * k * k + 9 * k + 2) // 3, 4: 0}[s]


# -- integration by parts -------------------------------------------------------


def _boundary(cell, omega, pair):
    """Sum over facets of the chart integral of pair(raw trace, facet).

    The trace is taken with the weighted outward normal, whose length is the
    chart's 3-volume factor, so chart integrals give surface integrals.
    """
    total = ZERO
    for facet in cell.facets():
        tr = trace(omega, facet, normal=cell.outward_normal(facet))
        total += facet.integrate_local(pair(tr.raw, facet))
    return total


def _restricted(obj, facet):
    return _map_proxy(obj, 0, facet.restrict)


def ibp_one(e_form, f_form, cell_kind="pentatope"):
    """(boundary, volume) sides of: trace pairing of a 1-form E with F = Div F . E - F : skwGrad E."""
    cell = make_refcell(cell_kind)
    e, f = upsilon(e_form), upsilon(f_form)
    boundary = _boundary(cell, e_form, lambda raw, fc: contract(raw, _restricted(f, fc)))
    volume = cell.integrate(dot(div_skew(f), e)) - cell.integrate(contract(f, skw_grad(e)))
    return boundary, volume


def ibp_two(f_form, e_form, cell_kind="pentatope"):
    """(boundary, volume) sides of: (n x F) . E on the boundary = curl F . E - Curl E : F."""
    cell = make_refcell(cell_kind)
    e, f = upsilon(e_form), upsilon(f_form)
    boundary = _boundary(cell, f_form, lambda raw, fc: dot(raw, _restricted(e, fc)))
    volume = cell.integrate(dot(curl_skew(f), e)) - cell.integrate(contract(curl_vec(e), f))
    return boundary, volume


def ibp_three(g_form, u_form, cell_kind="pentatope"):
    """(boundary, volume) sides of: (G . n) u on the boundary = div G u + G . grad u."""
    cell = make_refcell(cell_kind)
    g, u = upsilon(g_form), upsilon(u_form)
    boundary = _boundary(cell, g_form, lambda raw, fc: raw * fc.restrict(u))
    volume = cell.integrate(div_vec(g) * u) + cell.integrate(dot(g, grad(u)))
    return boundary, volume

