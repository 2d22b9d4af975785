import pytest

from feec4d.formcalc import FormPoly, from_proxy, vtom
from feec4d.linalg import rank
from feec4d.polycore import Polynomial, Rational
from feec4d.refgeom import make_refcell, shape_functions
from feec4d.tetprism import (PrismElement, block3d, bubble_basis_W4, bubble_factors, cross_form, dim_formula, dofs_W4,
                             edge_generator, exactness_W4, face_generator, nrt_space_W4, tensor_space_W4,
                             trimmed_3d, unisolvency_W4, volume_dim_formula)
from feec4d.tracedof import dof_matrix, trace_dim_formula, trace_dofs

# closed forms evaluated by hand for k = 1, 2, 3
DIMS = {1: (8, 16, 14, 6, 1), 2: (30, 80, 85, 42, 8), 3: (80, 240, 279, 148, 30)}
VOLUME = {1: (0, 0, 0, 0, 1), 2: (0, 0, 3, 10, 8), 3: (0, 6, 33, 56, 30)}


@pytest.mark.parametrize("name, k, expected", [
    ("N", 0, 6), ("RT", 0, 4), ("CG_T1", 1, 2), ("DG_T1", 0, 1), ("CG", 2, 10), ("N", 1, 20), ("RT", 1, 15),
])
def test_block_dims(name, k, expected):
    assert block3d(name, k).dim == expected


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_block_dim_closed_forms(k):
    assert block3d("N", k - 1).dim == k * (k + 2) * (k + 3) // 2
    assert block3d("RT", k - 1).dim == k * (k + 1) * (k + 3) // 2


def test_block_rejects_unknown_name():
    with pytest.raises(ValueError):
        block3d("BDM", 1)


def test_nedelec_fields_kill_position_in_top_degree():
    x = [Polynomial.variable(i, 3) for i in range(3)]
    for f in block3d("N", 1).basis:
        top = [c.homogeneous_part(2) for c in f.comps]
        assert sum((t * xi for t, xi in zip(top, x)), Polynomial.zero(3)).is_zero()


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("s", range(5))
def test_space_dims(k, s):
    space = nrt_space_W4(k, s)
    assert space.dim == DIMS[k][s] == dim_formula(k, s)
    assert trace_dim_formula("prism", s, k) + volume_dim_formula(k, s) == space.dim


def test_lowest_order_matches_entity_counts():
    counts = make_refcell("prism").counts()
    per_degree = (counts["vertex"], counts["edge"], counts["triangle"] + counts["quad"],
                  counts["tet"] + counts["triprism"], 1)
    assert per_degree == DIMS[1]


def test_one_forms_at_k1_split():
    assert nrt_space_W4(1, 1).dim == 2 * block3d("N", 0).dim + 1 * block3d("CG", 1).dim


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("s", range(5))
def test_tensor_and_nrt_agree(k, s):
    assert nrt_space_W4(k, s).span_equal(tensor_space_W4(k, s))


def test_trimmed_3d_dims():
    assert [len(trimmed_3d(1, s)) for s in range(4)] == [4, 6, 4, 1]


def test_cross_form_of_scalars_and_line_element():
    u = FormPoly(0, [Polynomial.variable(0, 3)], 3)
    w = FormPoly(1, [Polynomial.constant(1, 1)], 1)
    assert cross_form(u, w).comps[3] == Polynomial.variable(0, 4)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("s", range(5))
@pytest.mark.parametrize("form", ["factored", "explicit"])
def test_bubbles_are_interior_members(k, s, form):
    bubbles = bubble_basis_W4(k, s, form)
    assert bubbles.dim == VOLUME[k][s] == volume_dim_formula(k, s)
    assert rank([b.to_vector() for b in bubbles.basis]) == bubbles.dim
    space = nrt_space_W4(k, s)
    assert all(space.contains(b) for b in bubbles.basis)
    if s < 4 and bubbles.dim:
        matrix = dof_matrix(trace_dofs(make_refcell("prism"), s, k), bubbles.basis)
        assert all(v == 0 for row in matrix for v in row)


@pytest.mark.parametrize("form", ["factored", "explicit"])
def test_first_zero_form_bubbles(form):
    assert bubble_basis_W4(3, 0, form).dim == 0
    assert bubble_basis_W4(4, 0, form).dim == 3 == volume_dim_formula(4, 0)


def test_constant_is_the_top_form_bubble_at_k1():
    (only,) = bubble_basis_W4(1, 4).basis
    assert only.comps[0].degree() == 0


def test_bubble_factors():
    bf = bubble_factors()
    cell = make_refcell("prism")
    nu, lam = cell.segment_barycentrics, cell.tet_barycentrics
    assert bf.segment == nu[0] * nu[1]
    assert bf.tet == lam[0] * lam[1] * lam[2] * lam[3]
    assert len(bf.phi) == len(bf.psi) == 3


def _grad3(p):
    return tuple(p.diff(i) for i in range(3))


@pytest.mark.parametrize("abc", [(1, 2, 3), (2, 3, 4), (3, 4, 1)])
def test_face_generator_has_constant_divergence(abc):
    lam = make_refcell("prism").tet_barycentrics
    ga, gb, gc = (_grad3(lam[i - 1]) for i in abc)
    cross = (ga[1] * gb[2] - ga[2] * gb[1], ga[2] * gb[0] - ga[0] * gb[2], ga[0] * gb[1] - ga[1] * gb[0])
    triple = sum((u * v for u, v in zip(cross, gc)), Polynomial.zero(4))
    field = face_generator(*abc)
    div = sum((field[i].diff(i) for i in range(3)), Polynomial.zero(4))
    assert div == 3 * triple
    assert div.degree() == 0 and not div.is_zero()


@pytest.mark.parametrize("t", [Rational(0), Rational(1, 3), Rational(-3, 4)])
def test_edge_generator_has_unit_tangential_component(t):
    """Along the edge from vertex 1 to vertex 2 the tangential part is lambda_1 + lambda_2 = 1."""
    cell = make_refcell("prism")
    v1, v2 = cell.vertices[0][:3], cell.vertices[1][:3]
    tangent = tuple(b - a for a, b in zip(v1, v2))
    point = tuple((a + b) / 2 + t * (b - a) / 4 for a, b in zip(v1, v2)) + (t,)
    field = edge_generator(1, 2)
    assert sum((c.evaluate(point) * d for c, d in zip(field, tangent)), Rational(0)) == 1


def test_face_slot_sign():
    """The (13) slot takes minus the second component; the plus variant leaves the space."""
    bf = bubble_factors()
    z = Polynomial.zero(4)
    w, vec = bf.psi[0]
    a = [w * bf.segment * c for c in vec]
    space = nrt_space_W4(2, 2)
    assert space.contains(from_proxy(2, vtom((a[2], -a[1], z, a[0], z, z))))
    assert not space.contains(from_proxy(2, vtom((a[2], a[1], z, a[0], z, z))))


@pytest.mark.parametrize("k, s, total, trace_count", [
    (1, 0, 8, 8), (1, 2, 14, 14), (2, 1, 80, 80), (2, 3, 42, 32), (1, 4, 1, 0),
])
def test_dof_counts(k, s, total, trace_count):
    dofs = dofs_W4(k, s)
    assert len(dofs) == total
    assert sum(1 for d in dofs if d.kind != "volume") == trace_count


def test_unisolvency_in_shape_basis():
    shapes = [FormPoly(0, [n]) for n in shape_functions("prism")]
    assert dof_matrix(dofs_W4(1, 0), shapes) == [[int(i == j) for j in range(8)] for i in range(8)]


def test_top_form_determinant_is_volume():
    assert unisolvency_W4(1, 4) == Rational(8, 3)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("s", range(5))
def test_unisolvent(k, s):
    assert unisolvency_W4(k, s) != 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_exact_sequence(k):
    report = exactness_W4(k)
    assert report["exact"] and report["kernel0"] == 1
    assert all(report["dd_zero"]) and all(report["inclusion"]) and all(report["chain"])


def test_element_bundle():
    element = PrismElement(2, 2)
    assert element.space.dim == len(element.dofs) == 85
    assert element.bubbles.dim == 3
