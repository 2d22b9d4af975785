"""Verification suites behind ``feec4d verify``.

Each suite takes (cell, k) and returns records; a record is PASS only when
every exact comparison in it holds.  Suites are pure functions of their
arguments plus the optional corruption hook, so they can run in worker
processes and be merged in any order.
"""

import os
import random
from dataclasses import asdict, dataclass
from math import comb

from . import pentatope, tetprism
from .formcalc import FormPoly, dform
from .linalg import Echelon, det
from .polycore import Polynomial, Rational, exponents_upto, rational_str
from .refgeom import make_map, make_refcell, pullback
from .space import PolySpace, exactness_report
from .tracedof import dof_matrix, ibp_one, ibp_three, ibp_two, trace_dofs, trace_dim_formula

CHECKS = ("dims", "exactness", "unisolvency", "bubbles", "traces", "tensor-vs-nrt", "pullback")
CELLS = ("pentatope", "prism")
CORRUPT_ENV = "FEEC4D_CORRUPT"


@dataclass(frozen=True)
class Record:
    cell: str
    s: str
    k: int
    check: str
    status: str
    witness: str

    def as_dict(self):
        return asdict(self)


def _record(cell, s, k, check, ok, witness):
    return Record(cell, "-" if s is None else str(s), k, check, "PASS" if ok else "FAIL", witness)


# -- spaces with the corruption hook -------------------------------------------


def _corruption():
    """Parse FEEC4D_CORRUPT=cell:s:k:index, or None; ValueError when malformed."""
    raw = os.environ.get(CORRUPT_ENV, "").strip()
    if not raw:
        return None
    try:
        cell, s, k, index = raw.split(":")
        hook = cell, int(s), int(k), int(index)
    except ValueError:
        raise ValueError(f"{CORRUPT_ENV} must look like cell:s:k:index, got {raw!r}") from None
    if cell not in CELLS or not 0 <= hook[1] <= 4 or hook[2] < 1 or hook[3] < 0:
        raise ValueError(f"{CORRUPT_ENV}={raw!r} names no basis member")
    return hook


def check_corruption():
    """Validate the hook against the space it targets; returns the parsed hook or None."""
    hook = _corruption()
    if hook:
        cell, s, k, index = hook
        dim = (pentatope.build_space_T4(k, s) if cell == "pentatope" else tetprism.nrt_space_W4(k, s)).dim
        if index >= dim:
            raise ValueError(f"{CORRUPT_ENV}: V^{k},{s}({cell}) has {dim} members, index {index} is out of range")
    return hook


def corrupt(space, index, k):
    """Copy of ``space`` with one coefficient of member ``index`` perturbed.

    The perturbed coefficient belongs to x1^(k+1) in the first component,
    which no member of V^{k,s} can carry, so the result leaves the space.
    """
    basis = list(space.basis)
    member = basis[index]
    bump = Polynomial.monomial((k + 1, 0, 0, 0))
    comps = list(member.comps)
    comps[0] = comps[0] + bump
    basis[index] = FormPoly(member.s, comps, member.n)
    return PolySpace(space.s, basis, space.domain + " (corrupted)", space.n, check=False)


def space(cell, k, s):
    """The element space used by every suite; honours the corruption hook."""
    built = pentatope.build_space_T4(k, s) if cell == "pentatope" else tetprism.nrt_space_W4(k, s)
    hook = _corruption()
    if hook and hook[:3] == (cell, s, k):
        return corrupt(built, hook[3], k)
    return built


def _alternative(cell, k, s):
    return pentatope.build_space_T4(k, s, "koszul") if cell == "pentatope" else tetprism.tensor_space_W4(k, s)


def _module(cell):
    return pentatope if cell == "pentatope" else tetprism


def _dofs(cell, k, s):
    return pentatope.dofs_T4(k, s) if cell == "pentatope" else tetprism.dofs_W4(k, s)


def _bubbles(cell, k, s):
    return pentatope.bubble_basis_T4(k, s) if cell == "pentatope" else tetprism.bubble_basis_W4(k, s)


# -- suites -----------------------------------------------------------------------


def check_dims(cell, k):
    mod = _module(cell)
    out = []
    for s in range(5):
        sp = space(cell, k, s)
        rank = Echelon(f.to_vector() for f in sp.basis).rank
        formula = mod.dim_formula(k, s)
        dofs = _dofs(cell, k, s)
        n_trace = sum(1 for d in dofs if d.kind != "volume")
        n_vol = len(dofs) - n_trace
        same = sp.span_equal(_alternative(cell, k, s))
        ok = (rank == sp.dim == formula == len(dofs) and n_trace == trace_dim_formula(cell, s, k)
              and n_vol == mod.volume_dim_formula(k, s) and same)
        witness = (f"rank={rank} formula={formula} dofs={len(dofs)} trace={n_trace} volume={n_vol} "
                   f"alternative={'equal' if same else 'different'}")
        out.append(_record(cell, s, k, "dims", ok, witness))
    return out


def check_exactness(cell, k):
    report = exactness_report([space(cell, k, s) for s in range(5)])
    witness = f"ranks={report['rank']} kernels={report['kernel']} inclusion={report['inclusion']}"
    return [_record(cell, None, k, "exactness", report["exact"], witness)]


def check_unisolvency(cell, k):
    out = []
    for s in range(5):
        sp = space(cell, k, s)
        matrix = dof_matrix(_dofs(cell, k, s), sp.basis)
        if len(matrix) != sp.dim:
            out.append(_record(cell, s, k, "unisolvency", False, f"shape={len(matrix)}x{sp.dim}"))
            continue
        value = det(matrix)
        out.append(_record(cell, s, k, "unisolvency", value != 0, f"det={rational_str(value)}"))
    return out


def check_bubbles(cell, k):
    mod = _module(cell)
    ref = make_refcell(cell)
    out = []
    for s in range(5):
        bubbles = _bubbles(cell, k, s)
        sp = space(cell, k, s)
        rank = Echelon(b.to_vector() for b in bubbles.basis).rank
        expected = mod.volume_dim_formula(k, s)
        outside = [i for i, b in enumerate(bubbles.basis) if not sp.contains(b)]
        nonzero = 0
        if s < 4 and bubbles.basis:
            matrix = dof_matrix(trace_dofs(ref, s, k), bubbles.basis)
            nonzero = sum(1 for row in matrix for v in row if v)
        ok = bubbles.dim == rank == expected and not outside and not nonzero
        witness = f"count={bubbles.dim} rank={rank} expected={expected} outside={outside[:3]} nonzero_traces={nonzero}"
        out.append(_record(cell, s, k, "bubbles", ok, witness))
    return out


def _random_poly(rng, degree, nvars=4):
    return Polynomial(nvars, {a: rng.randint(-3, 3) for a in exponents_upto(degree, nvars)})


def _random_form(rng, s, degree):
    return FormPoly(s, [_random_poly(rng, degree) for _ in range(comb(4, s))])


def check_traces(cell, k):
    out = []
    for s in range(4):
        n_trace = len(trace_dofs(make_refcell(cell), s, k))
        expected = trace_dim_formula(cell, s, k)
        out.append(_record(cell, s, k, "traces", n_trace == expected, f"trace_dofs={n_trace} formula={expected}"))
    rng = random.Random(f"ibp-{cell}-{k}")
    pairs = [
        ("ibp-1", ibp_one(_random_form(rng, 1, k), _random_form(rng, 2, k), cell)),
        ("ibp-2", ibp_two(_random_form(rng, 2, k), _random_form(rng, 1, k), cell)),
        ("ibp-3", ibp_three(_random_form(rng, 3, k), _random_form(rng, 0, k), cell)),
    ]
    for name, (boundary, volume) in pairs:
        out.append(_record(cell, None, k, "traces", boundary == volume,
                           f"{name} boundary={rational_str(boundary)} volume={rational_str(volume)}"))
    return out


def check_tensor_vs_nrt(cell, k):
    if cell != "prism":
        return []
    out = []
    for s in range(5):
        same = space(cell, k, s).span_equal(tetprism.tensor_space_W4(k, s))
        out.append(_record(cell, s, k, "tensor-vs-nrt", same, "equal" if same else "different"))
    return out


def random_map(cell, rng):
    """A random non-degenerate affine (pentatope) or prismatic (prism) map."""
    def rnd():
        return Rational(rng.randint(-16, 16), 4)

    while True:
        try:
            if cell == "pentatope":
                return make_map("affine", [[rnd() for _ in range(4)] for _ in range(5)])
            base = [[rnd() for _ in range(3)] for _ in range(4)]
            t0, h = rnd(), rng.randint(1, 4)
            verts = [b + [t0] for b in base] + [b + [t0 + h] for b in base]
            return make_map("prismatic", verts)
        except ValueError:
            continue


def check_pullback(cell, k, maps=10):
    rng = random.Random(f"pullback-{cell}-{k}")
    bad = 0
    for _ in range(maps):
        phi = random_map(cell, rng)
        for s in range(4):
            omega = _random_form(rng, s, k)
            if dform(pullback(omega, phi)) != pullback(dform(omega), phi):
                bad += 1
    return [_record(cell, None, k, "pullback", bad == 0, f"maps={maps} failures={bad}")]


SUITES = {
    "dims": check_dims,
    "exactness": check_exactness,
    "unisolvency": check_unisolvency,
    "bubbles": check_bubbles,
    "traces": check_traces,
    "tensor-vs-nrt": check_tensor_vs_nrt,
    "pullback": check_pullback,
}


def run_case(args):
    """Worker entry point: (check, cell, k) -> list of record dicts."""
    check, cell, k = args
    return [r.as_dict() for r in SUITES[check](cell, k)]


def sort_records(records):
    return sorted(records, key=lambda r: (CELLS.index(r.cell), r.s, r.k, CHECKS.index(r.check), r.witness))
