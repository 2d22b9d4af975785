import random
from math import comb

import pytest

from feec4d.formcalc import (FormPoly, cross_vm, cross_vv, curl_skew, curl_vec, dform, div_skew, div_vec, from_proxy,
                             grad, koszul, levi_civita, mtov, skw_grad, upsilon, vtom)
from feec4d.polycore import Polynomial, Rational, exponents, exponents_upto, variables

X = variables(4)
ZERO = Polynomial.zero(4)
ONE = Polynomial.constant(1, 4)


def random_poly(rng, degree, homogeneous=False):
    alphas = exponents(degree, 4) if homogeneous else exponents_upto(degree, 4)
    return Polynomial(4, {a: rng.randint(-4, 4) for a in alphas})


def random_form(rng, s, degree=2, homogeneous=False):
    return FormPoly(s, [random_poly(rng, degree, homogeneous) for _ in range(comb(4, s))])


def unit(s, position):
    comps = [ZERO] * comb(4, s)
    comps[position] = ONE
    return FormPoly(s, comps)


def test_component_count_checked():
    with pytest.raises(ValueError):
        FormPoly(2, [ONE] * 4)


def test_upsilon_examples():
    assert upsilon(unit(1, 0)) == (ONE, ZERO, ZERO, ZERO)
    half = upsilon(unit(2, 0))
    assert half[0][1] == ONE / 2 and half[1][0] == -ONE / 2
    assert sum(1 for row in half for v in row if v) == 2
    assert upsilon(unit(3, 0)) == (ZERO, ZERO, ZERO, -ONE)


@pytest.mark.parametrize("s", range(5))
def test_from_proxy_inverts_upsilon(s):
    rng = random.Random(s)
    omega = random_form(rng, s)
    assert from_proxy(s, upsilon(omega)) == omega


def test_vtom_layout():
    m = vtom([1, 0, 0, 0, 0, 0])
    assert m[0][1] == 1 and m[1][0] == -1
    assert sum(1 for row in m for v in row if v) == 2
    assert all(v == 0 for row in vtom([0] * 6) for v in row)


def test_vtom_mtov_round_trip():
    rng = random.Random(11)
    for _ in range(20):
        w = tuple(Rational(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(6))
        assert mtov(vtom(w)) == w


def test_mtov_rejects_non_skew():
    m = [list(r) for r in vtom([1, 2, 3, 4, 5, 6])]
    m[0][0] = 1
    with pytest.raises(ValueError):
        mtov(m)


def test_dform_examples():
    assert dform(FormPoly(0, [X[0]])).comps == (ONE, ZERO, ZERO, ZERO)
    omega = FormPoly(2, [X[2], ZERO, ZERO, ZERO, ZERO, ZERO])
    assert dform(omega).comps == (ONE, ZERO, ZERO, ZERO)
    with pytest.raises(ValueError):
        dform(FormPoly(4, [ONE]))


@pytest.mark.parametrize("s", range(3))
def test_d_squared_vanishes(s):
    rng = random.Random(100 + s)
    for _ in range(3):
        assert dform(dform(random_form(rng, s, 3))).is_zero()


@pytest.mark.parametrize("seed", range(4))
def test_proxy_diagram(seed):
    rng = random.Random(seed)
    u, e, f, g = (random_form(rng, s, 3) for s in range(4))
    assert upsilon(dform(u)) == grad(upsilon(u))
    assert upsilon(dform(e)) == skw_grad(upsilon(e))
    assert upsilon(dform(f)) == curl_skew(upsilon(f))
    assert upsilon(dform(g)) == div_vec(upsilon(g))


def test_operator_examples():
    assert grad(X[0] * X[1]) == (X[1], X[0], ZERO, ZERO)
    assert all(v.is_zero() for row in skw_grad(grad(X[0] * X[1] * X[2])) for v in row)
    assert div_vec(tuple(X)) == 4 * ONE


def test_sequence_property_through_proxies():
    rng = random.Random(7)
    e = upsilon(random_form(rng, 1, 3))
    f = upsilon(random_form(rng, 2, 3))
    assert all(v.is_zero() for v in curl_skew(skw_grad(e)))
    assert div_vec(curl_skew(f)).is_zero()


def test_curl_vec_is_skew_and_div_skew_of_curl_vanishes():
    rng = random.Random(8)
    e = upsilon(random_form(rng, 1, 3))
    c = curl_vec(e)
    assert all(c[i][j] == -c[j][i] for i in range(4) for j in range(4))
    assert all(v.is_zero() for v in div_skew(c))


def test_curl_sums_over_all_repeated_indices():
    f = vtom([ZERO, ZERO, ZERO, X[0], ZERO, ZERO])  # F_23 = x1
    expected = [sum((f[k][l].diff(j) * levi_civita(i, j, k, l) for j in range(4) for k in range(4)
                     for l in range(4)), ZERO) for i in range(4)]
    assert list(curl_skew(f)) == expected
    assert curl_skew(f)[3] == -2 * ONE


def test_cross_examples():
    e = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    m = cross_vv(e[0], e[1])
    assert m[2][3] == 1 and m[3][2] == -1
    assert sum(1 for row in m for v in row if v) == 2
    vec = (3, -1, 2, 5)
    assert all(v == 0 for row in cross_vv(vec, vec) for v in row)
    c = Rational(5, 3)
    assert cross_vm((0, 0, 0, 1), vtom([0, 0, 0, c, 0, 0]))[0] == 2 * c


def test_koszul_examples():
    assert koszul(unit(1, 0)).comps == (X[0],)
    assert koszul(unit(2, 0)) == FormPoly(1, [-X[1], X[0], ZERO, ZERO])
    with pytest.raises(ValueError):
        koszul(FormPoly(0, [ONE]))


def test_koszul_top_form_is_radial():
    q = X[0] + 2
    assert upsilon(koszul(FormPoly(4, [q]))) == tuple(q * xi for xi in X)


@pytest.mark.parametrize("s", [2, 3, 4])
def test_koszul_squared_vanishes(s):
    rng = random.Random(20 + s)
    assert koszul(koszul(random_form(rng, s))).is_zero()


def test_koszul_of_homogeneous_three_forms_kills_position():
    rng = random.Random(5)
    for _ in range(3):
        b = upsilon(koszul(random_form(rng, 3, 2, homogeneous=True)))
        assert all(sum((b[i][j] * X[j] for j in range(4)), ZERO).is_zero() for i in range(4))
