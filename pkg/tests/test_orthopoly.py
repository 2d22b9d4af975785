import pytest

from feec4d.orthopoly import homogenize, integrated_jacobi, integrated_legendre, jacobi, legendre, scaled
from feec4d.polycore import Polynomial, Rational

X = Polynomial.variable(0, 1)
S, T = Polynomial.variable(0, 2), Polynomial.variable(1, 2)


def integral01(p):
    """Exact integral over [0, 1] by antiderivative evaluation."""
    anti = p.antiderivative(0)
    return anti.evaluate((1,)) - anti.evaluate((0,))


def test_legendre_low_members():
    assert legendre(0) == Polynomial.constant(1, 1)
    assert legendre(1) == 2 * X - 1
    assert integral01(legendre(0) * legendre(1)) == 0


@pytest.mark.parametrize("i", range(6))
def test_legendre_orthogonal(i):
    for j in range(i):
        assert integral01(legendre(i) * legendre(j)) == 0
    assert integral01(legendre(i) * legendre(i)) == Rational(1, 2 * i + 1)


@pytest.mark.parametrize("alpha", [0, 1, 2, 5])
def test_jacobi_zero_is_one(alpha):
    assert jacobi(0, alpha) == Polynomial.constant(1, 1)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_jacobi_orthogonal_under_weight(alpha):
    weight = (1 - X) ** alpha
    for i in range(5):
        for j in range(i):
            assert integral01(jacobi(i, alpha) * jacobi(j, alpha) * weight) == 0


def test_jacobi_three_one_alpha_two():
    assert integral01(jacobi(3, 2) * jacobi(1, 2) * (1 - X) ** 2) == 0


@pytest.mark.parametrize("i", range(7))
def test_jacobi_alpha_zero_is_legendre(i):
    assert jacobi(i, 0) == legendre(i)


def test_integrated_legendre_low_members():
    assert integrated_legendre(1) == X
    assert integrated_legendre(2) == X * X - X


@pytest.mark.parametrize("i", range(2, 7))
def test_integrated_legendre_vanishes_at_both_ends(i):
    assert integrated_legendre(i).evaluate((0,)) == 0
    assert integrated_legendre(i).evaluate((1,)) == 0


@pytest.mark.parametrize("alpha", [0, 1, 4])
def test_integrated_jacobi_vanishes_at_zero(alpha):
    for i in range(1, 6):
        assert integrated_jacobi(i, alpha).evaluate((0,)) == 0
        assert integrated_jacobi(i, alpha).diff(0) == jacobi(i - 1, alpha)


@pytest.mark.parametrize("family", [integrated_legendre, lambda i: integrated_jacobi(i, 2)])
def test_index_zero_rejected(family):
    with pytest.raises(ValueError):
        family(0)


@pytest.mark.parametrize("i", range(6))
def test_degrees(i):
    assert legendre(i).degree() == i
    assert jacobi(i, 3).degree() == i
    if i:
        assert integrated_legendre(i).degree() == i
        assert integrated_jacobi(i, 3).degree() == i


def test_scaled_examples():
    assert scaled(legendre(1), S, T) == 2 * S - T
    assert scaled(integrated_legendre(2), S, T) == S * S - S * T
    one = Polynomial.constant(1, 1)
    assert scaled(legendre(3), X, one) == legendre(3)


@pytest.mark.parametrize("f", [legendre(4), jacobi(3, 2), integrated_legendre(5), integrated_jacobi(3, 4)])
def test_scaled_is_homogeneous(f):
    form = homogenize(f, f.degree())
    assert form.is_homogeneous(f.degree())
    c = Rational(3, 7)
    assert scaled(f, S * c, T * c) == scaled(f, S, T) * c ** f.degree()


def test_homogenize_rejects_low_degree():
    with pytest.raises(ValueError):
        homogenize(legendre(3), 2)
