"""Finite-dimensional spaces of polynomial forms with an exact independent basis."""

from .formcalc import FormPoly, dform
from .linalg import Echelon
from .polycore import Polynomial, monomials_P, monomials_Ptilde, monomials_Q


class PolySpace:
    """Ordered, linearly independent basis of s-forms on R^n.

    ``check`` verifies independence by exact rank; ``from_spanning`` instead
    keeps the independent members of a spanning family in order.
    """

    def __init__(self, s, basis, domain="", n=4, check=True):
        self.s = s
        self.n = n
        self.domain = domain
        self.basis = list(basis)
        self._echelon = None
        if check and self.echelon().rank != len(self.basis):
            raise ValueError(f"basis of {domain or 'space'} (s={s}) is linearly dependent")

    @classmethod
    def from_spanning(cls, s, forms, domain="", n=4):
        ech = Echelon()
        kept = [f for f in forms if ech.add(f.to_vector())]
        space = cls(s, kept, domain, n, check=False)
        space._echelon = ech
        return space

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def echelon(self):
        if self._echelon is None:
            self._echelon = Echelon(f.to_vector() for f in self.basis)
        return self._echelon

    def contains(self, form):
        return self.echelon().contains(form.to_vector())

    def span_equal(self, other):
        a, b = self.echelon(), other.echelon()
        return a.rank == b.rank and all(a.contains(row) for row in b.rows.values())

    def __repr__(self):
        return f"PolySpace({self.domain or '?'}, s={self.s}, dim={self.dim})"


def _scalar_space(polys, n, domain):
    return PolySpace(0, [FormPoly(0, [p], n) for p in polys], domain, n, check=False)


def space_P(k, nvars):
    return _scalar_space(monomials_P(k, nvars), nvars, f"P^{k}")


def space_Ptilde(k, nvars):
    return _scalar_space(monomials_Ptilde(k, nvars), nvars, f"P~^{k}")


def space_Q(degrees):
    return _scalar_space(monomials_Q(degrees), len(degrees), f"Q^{tuple(degrees)}")


def vector_space(s, comps_spaces, n=4):
    """Forms whose component c ranges over ``comps_spaces[c]`` independently."""
    out = []
    ncomp = len(comps_spaces)
    for c, polys in enumerate(comps_spaces):
        for p in polys:
            comps = [Polynomial.zero(n)] * ncomp
            comps[c] = p
            out.append(FormPoly(s, comps, n))
    return out


def exactness_report(spaces):
    """Rank data for the sequence spaces[0] -d-> spaces[1] -d-> ... .

    Returns a dict with per-degree inclusion, d(d) = 0, rank and kernel
    dimension, plus the overall verdict ``exact``.
    """
    top = len(spaces) - 1
    report = {"inclusion": [], "dd_zero": [], "rank": [], "kernel": []}
    for s, space in enumerate(spaces):
        if s == top:
            report["rank"].append(0)
            report["kernel"].append(space.dim)
            continue
        images = [dform(f) for f in space.basis]
        target = spaces[s + 1]
        report["inclusion"].append(all(target.contains(g) for g in images))
        report["dd_zero"].append(all(dform(g).is_zero() for g in images) if s + 1 < space.n else True)
        rank = Echelon(g.to_vector() for g in images).rank
        report["rank"].append(rank)
        report["kernel"].append(space.dim - rank)
    report["kernel0"] = report["kernel"][0]
    report["chain"] = [report["rank"][s - 1] == report["kernel"][s] for s in range(1, top + 1)]
    report["exact"] = (all(report["inclusion"]) and all(report["dd_zero"]) and report["kernel0"] == 1
                       and all(report["chain"]))
    return report
