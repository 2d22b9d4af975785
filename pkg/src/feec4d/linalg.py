"""Exact linear algebra over the rationals.

Vectors are sparse mappings ``key -> Rational``; keys only need to be
hashable and mutually orderable.  ``Echelon`` keeps a reduced row echelon
basis that grows one vector at a time, which is what rank, membership and
span comparisons need.  Determinants use fraction-free (Bareiss)
elimination on an integer matrix obtained by clearing row denominators.
"""

from math import lcm

from gmpy2 import mpq, mpz

from .polycore import ONE, ZERO, as_rational


class Echelon:
    """Reduced row echelon basis of a growing set of sparse vectors."""

    def __init__(self, vectors=()):
        self.rows = {}  # pivot key -> row (pivot entry is 1)
        for v in vectors:
            self.add(v)

    @property
    def rank(self):
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def reduce(self, vector):
        """Residual of ``vector`` after eliminating every pivot it touches."""
        v = {k: as_rational(c) for k, c in vector.items() if c}
        for p in [k for k in v if k in self.rows]:
            c = v.get(p)
            if not c:
                continue
            for key, rc in self.rows[p].items():
                nv = v.get(key, ZERO) - c * rc
                if nv:
                    v[key] = nv
                else:
                    v.pop(key, None)
        return v

    def contains(self, vector):
        return not self.reduce(vector)

    def add(self, vector):
        """Insert ``vector``; return True when it was independent of the basis."""
        r = self.reduce(vector)
        if not r:
            return False
        pivot = min(r)
        inv = ONE / r[pivot]
        r = {k: c * inv for k, c in r.items()}
        for row in self.rows.values():
            c = row.get(pivot)
            if c:
                for key, rc in r.items():
                    nv = row.get(key, ZERO) - c * rc
                    if nv:
                        row[key] = nv
                    else:
                        del row[key]
        self.rows[pivot] = r
        return True


def as_sparse(vector):
    """Accept a dense sequence or a mapping and return a sparse dict."""
    if isinstance(vector, dict):
        return vector
    return {i: c for i, c in enumerate(vector) if c}


def rank(vectors):
    return Echelon(as_sparse(v) for v in vectors).rank


def is_member(vector, basis):
    ech = basis if isinstance(basis, Echelon) else Echelon(as_sparse(v) for v in basis)
    return ech.contains(as_sparse(vector))


def span_equal(first, second):
    """True when two finite vector families span the same space."""
    a = Echelon(as_sparse(v) for v in first)
    b = Echelon(as_sparse(v) for v in second)
    if a.rank != b.rank:
        return False
    return all(a.contains(row) for row in b.rows.values())


def kernel(rows, unknowns):
    """Basis of {x : row . x = 0 for every row}.

    ``rows`` are sparse (or dense) equations over the keys in ``unknowns``;
    each kernel vector is returned as a sparse dict over those keys.
    """
    unknowns = list(unknowns)
    known = set(unknowns)
    ech = Echelon()
    for row in rows:
        row = as_sparse(row)
        stray = set(row) - known
        if stray:
            raise ValueError(f"equation refers to unknown keys {sorted(stray)[:3]}")
        ech.add(row)
    basis = []
    for free in unknowns:
        if free in ech.rows:
            continue
        x = {free: ONE}
        for p, row in ech.rows.items():
            c = row.get(free)
            if c:
                x[p] = -c
        basis.append(x)
    return basis


def det(matrix):
    """Exact determinant of a square matrix (list of rows) via Bareiss elimination."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return ONE
    scale = ONE
    a = []
    for row in matrix:
        row = [as_rational(c) for c in row]
        m = lcm(*(int(c.denominator) for c in row))
        scale *= m
        a.append([mpz(c.numerator) * (m // int(c.denominator)) for c in row])
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot_row = a[k]
        akk = pivot_row[k]
        for i in range(k + 1, n):
            row = a[i]
            aik = row[k]
            if aik:
                for j in range(k + 1, n):
                    row[j] = (row[j] * akk - aik * pivot_row[j]) // prev
            else:
                for j in range(k + 1, n):
                    row[j] = (row[j] * akk) // prev
            row[k] = mpz(0)
        prev = akk
    return mpq(sign * a[n - 1][n - 1]) / scale
