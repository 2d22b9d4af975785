"""Shifted Legendre and Jacobi polynomials on [0, 1] and their integrated forms.

Conventions: the Jacobi family is P_i^(alpha, 0) shifted to [0, 1], so it is
orthogonal for the weight (1 - x)^alpha; integrated members are
L_i(x) = integral from 0 to x of the index i-1 member.  Every bubble formula
uses these through ``scaled``, the homogenized two-argument form
t^i f(s / t), which stays polynomial.
"""

from functools import lru_cache
from math import comb

from .polycore import Polynomial

_X = Polynomial.variable(0, 1)
_ONE = Polynomial.constant(1, 1)


@lru_cache(maxsize=None)
def legendre(i):
    """Shifted Legendre P_i on [0, 1] via the three-term recurrence."""
    if i < 0:
        raise ValueError("index must be non-negative")
    prev, cur = _ONE, 2 * _X - 1
    if i == 0:
        return prev
    for n in range(1, i):
        prev, cur = cur, ((2 * n + 1) * (2 * _X - 1) * cur - n * prev) / (n + 1)
    return cur


@lru_cache(maxsize=None)
def jacobi(i, alpha):
    """Shifted Jacobi P_i^(alpha, 0) on [0, 1]."""
    if i < 0 or alpha < 0:
        raise ValueError("index and alpha must be non-negative")
    # Rodrigues-free closed form: sum_s C(i+alpha, i-s) C(i, s) (x-1)^s x^(i-s)
    out = Polynomial.zero(1)
    for s in range(i + 1):
        out = out + comb(i + alpha, i - s) * comb(i, s) * (_X - 1) ** s * _X ** (i - s)
    return out


@lru_cache(maxsize=None)
def integrated_legendre(i):
    if i < 1:
        raise ValueError("integrated family starts at index 1")
    return legendre(i - 1).antiderivative(0)


@lru_cache(maxsize=None)
def integrated_jacobi(i, alpha):
    if i < 1:
        raise ValueError("integrated family starts at index 1")
    return jacobi(i - 1, alpha).antiderivative(0)


def homogenize(f, degree):
    """Bivariate form t^degree f(s / t) in variables (s, t)."""
    if f.degree() > degree:
        raise ValueError(f"polynomial of degree {f.degree()} cannot be homogenized to {degree}")
    return Polynomial(2, {(a[0], degree - a[0]): c for a, c in f.terms.items()})


def scaled(f, s, t, degree=None):
    """Evaluate t^i f(s / t) with polynomial arguments s and t.

    ``degree`` defaults to deg f; pass the family index when the leading
    coefficient could vanish.
    """
    degree = f.degree() if degree is None else degree
    form = homogenize(f, max(degree, 0))
    return form.compose([s, t])
