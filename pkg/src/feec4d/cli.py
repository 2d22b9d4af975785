"""Command-line front end: dims, verify, tabulate, dof-matrix.

Exit codes: 0 when everything passes, 1 for a verification failure or a
bad data point, 2 for usage errors.
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product

from . import checks, pentatope, tetprism
from .formcalc import FormPoly, form_indices
from .linalg import det
from .polycore import Rational, as_rational, rational_str
from .refgeom import make_refcell, shape_functions
from .space import PolySpace
from .tracedof import dof_matrix, trace_dim_formula

DEFAULT_MAX_K = 3
LARGE_K = 4
THREADS_ENV = "FEEC4D_THREADS"


class UsageError(Exception):
    pass


# -- helpers ------------------------------------------------------------------


def _cells(name):
    return list(checks.CELLS) if name == "all" else [name]


def _check_k(k, allow_large):
    if k < 1:
        raise UsageError("--max-k / -k must be at least 1")
    if k > DEFAULT_MAX_K:
        if not allow_large or k > LARGE_K:
            raise UsageError(f"k={k} needs --allow-large (supported up to {LARGE_K})")
        print(f"warning: k={k} runs large exact eliminations and may take minutes", file=sys.stderr)


def _workers():
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    return os.cpu_count() or 1


def _write(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _component_names(s):
    return ["".join(str(i + 1) for i in idx) or "0" for idx in form_indices(4, s)]


def element_space(cell, s, k, basis="space"):
    """The element basis used by tabulate and dof-matrix."""
    if basis == "shape":
        if s != 0 or k != 1:
            raise UsageError("--basis shape is available for s=0, k=1 only")
        return PolySpace(0, [FormPoly(0, [p]) for p in shape_functions(cell)], f"shape({cell})")
    return checks.space(cell, k, s)


# -- dims ---------------------------------------------------------------------


def cmd_dims(args):
    _check_k(args.max_k, args.allow_large)
    rows = []
    failed = False
    for cell in _cells(args.cell):
        mod = pentatope if cell == "pentatope" else tetprism
        for k in range(1, args.max_k + 1):
            for s in range(5):
                built = checks.space(cell, k, s).dim
                formula = mod.dim_formula(k, s)
                trace = trace_dim_formula(cell, s, k)
                vol = max(mod.volume_dim_formula(k, s), 0)
                match = built == formula == trace + vol
                failed |= not match
                rows.append([cell, k, s, built, formula, trace, vol, "MATCH" if match else "MISMATCH"])
    header = ["cell", "k", "s", "constructed", "formula", "trace", "volume", "status"]
    if args.format == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    elif args.format == "csv":
        text = _csv_text(header, rows)
    else:
        widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
        text = "".join("  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip() + "\n"
                       for r in [header] + rows)
    _write(text, args.out)
    return 1 if failed else 0


# -- verify -------------------------------------------------------------------


def parse_checks(raw):
    if not raw:
        return list(checks.CHECKS)
    names = [c.strip() for c in raw.split(",") if c.strip()]
    unknown = [c for c in names if c not in checks.CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)}; choose from {', '.join(checks.CHECKS)}")
    return names


def run_verify(cells, max_k, names, workers=1):
    cases = [(c, cell, k) for cell in cells for k in range(1, max_k + 1) for c in names]
    if workers > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(cases))) as pool:
            results = list(pool.map(checks.run_case, cases))
    else:
        results = [checks.run_case(case) for case in cases]
    records = [checks.Record(**r) for batch in results for r in batch]
    return checks.sort_records(records)


def render_report(records, fmt):
    header = ["cell", "s", "k", "check", "status", "witness"]
    if fmt == "json":
        summary = {"passed": sum(r.status == "PASS" for r in records),
                   "failed": sum(r.status == "FAIL" for r in records)}
        return json.dumps({"summary": summary, "records": [r.as_dict() for r in records]}, indent=2) + "\n"
    if fmt == "csv":
        return _csv_text(header, [[getattr(r, h) for h in header] for r in records])
    lines = [f"{r.status}  {r.cell:<9} s={r.s} k={r.k} {r.check:<13} {r.witness}" for r in records]
    failed = sum(r.status == "FAIL" for r in records)
    lines.append(f"{len(records) - failed} passed, {failed} failed")
    return "\n".join(lines) + "\n"


def cmd_verify(args):
    names = parse_checks(args.checks)
    _check_k(args.max_k, args.allow_large)
    try:
        checks.check_corruption()
    except ValueError as exc:
        raise UsageError(str(exc))
    cell = "all" if args.all else args.cell
    records = run_verify(_cells(cell), args.max_k, names, _workers())
    _write(render_report(records, args.format), args.out)
    return 1 if any(r.status == "FAIL" for r in records) else 0


# -- tabulate -----------------------------------------------------------------


def lattice_points(cell, m):
    """Barycentric lattice of order m (simplex) or the product lattice (prism)."""
    if m < 1:
        raise UsageError("--lattice must be at least 1")
    ref = make_refcell(cell)

    def simplex(vertices, order):
        n = len(vertices)
        pts = []
        for c in product(range(order + 1), repeat=n):
            if sum(c) == order:
                pts.append(tuple(sum((Rational(ci, order) * v[i] for ci, v in zip(c, vertices)), Rational(0))
                                 for i in range(len(vertices[0]))))
        return pts

    if cell == "pentatope":
        pts = simplex(ref.vertices, m)
    else:
        tet = [v[:3] for v in ref.vertices[:4]]
        seg = [(Rational(-1),), (Rational(1),)]
        pts = [a + b for a in simplex(tet, m) for b in simplex(seg, m)]
    return sorted(set(pts))


def read_points(path):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("points", [])
    return [tuple(as_rational(str(x)) for x in p) for p in data]


def tabulate(cell, s, k, points, basis="space"):
    """Header and rows of a tabulation; rows for bad points carry an error field."""
    sp = element_space(cell, s, k, basis)
    ref = make_refcell(cell)
    header = {
        "cell": cell, "s": s, "k": k,
        "basis_ordering": f"{basis}: member order of the constructed basis ({sp.dim} members)",
        "component_ordering": _component_names(s),
        "dof_ordering": "trace dofs by entity dimension then entity order, then volume dofs",
    }
    rows = []
    for p in points:
        if len(p) != 4 or not ref.contains(p):
            rows.append({"point": [rational_str(x) for x in p], "error": "point outside the reference cell"})
            continue
        for i, f in enumerate(sp.basis):
            rows.append({"basis": i, "point": [rational_str(x) for x in p],
                         "values": [rational_str(v) for v in f.evaluate(p)]})
    return header, rows


def cmd_tabulate(args):
    _check_k(args.k, args.allow_large)
    if (args.points is None) == (args.lattice is None):
        raise UsageError("give exactly one of --points or --lattice")
    points = read_points(args.points) if args.points else lattice_points(args.cell, args.lattice)
    header, rows = tabulate(args.cell, args.s, args.k, points, args.basis)
    if args.format == "csv":
        names = header["component_ordering"]
        body = [[r.get("basis", ""), " ".join(r["point"]), *(r.get("values") or [""] * len(names)), r.get("error", "")]
                for r in rows]
        text = _csv_text(["basis", "point", *names, "error"], body)
    else:
        text = json.dumps({"header": header, "rows": rows}, indent=2) + "\n"
    _write(text, args.out)
    return 1 if any("error" in r for r in rows) else 0


def read_tabulation(path):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return data["header"], data["rows"]


# -- dof-matrix ---------------------------------------------------------------


def build_dof_matrix(cell, s, k, basis="space"):
    sp = element_space(cell, s, k, basis)
    dofs = pentatope.dofs_T4(k, s) if cell == "pentatope" else tetprism.dofs_W4(k, s)
    matrix = dof_matrix(dofs, sp.basis)
    value = det(matrix) if len(matrix) == sp.dim else None
    return dofs, matrix, value


def cmd_dof_matrix(args):
    _check_k(args.k, args.allow_large)
    dofs, matrix, value = build_dof_matrix(args.cell, args.s, args.k, args.basis)
    cells = [[rational_str(v) for v in row] for row in matrix]
    if args.format == "csv":
        text = _csv_text(["dof", *range(len(matrix[0]) if matrix else 0)],
                         [[d.label(), *row] for d, row in zip(dofs, cells)])
        text += f"# det,{rational_str(value) if value is not None else 'non-square'}\n"
    elif args.format == "text":
        shown = rational_str(value) if value is not None else "non-square"
        text = "\n".join(" ".join(row) for row in cells) + f"\ndet = {shown}\n"
    else:
        text = json.dumps({"cell": args.cell, "s": args.s, "k": args.k, "rows": len(matrix),
                           "cols": len(matrix[0]) if matrix else 0, "dofs": [d.label() for d in dofs],
                           "matrix": cells, "det": rational_str(value) if value is not None else None},
                          indent=2) + "\n"
    _write(text, args.out)
    return 0 if value else 1


# -- parser -------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="feec4d", description="Exact finite element forms on the pentatope and tetrahedral prism.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, cells=("pentatope", "prism", "all"), default="all"):
        p.add_argument("--cell", choices=cells, default=default)
        p.add_argument("--out", help="write to this path instead of stdout")
        p.add_argument("--allow-large", action="store_true", help=f"permit k={LARGE_K} (slow)")

    p = sub.add_parser("dims", help="dimension table against the closed forms")
    common(p)
    p.add_argument("--max-k", type=int, default=DEFAULT_MAX_K)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--all", action="store_true", help="both cells (same as --cell all)")
    p.add_argument("--max-k", type=int, default=DEFAULT_MAX_K)
    p.add_argument("--checks", help=f"comma list from: {','.join(checks.CHECKS)}")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_verify)

    for name, func, fmts, default, summary in (
            ("tabulate", cmd_tabulate, ("json", "csv"), "json", "evaluate basis forms at points"),
            ("dof-matrix", cmd_dof_matrix, ("json", "csv", "text"), "json", "dof matrix and its determinant")):
        p = sub.add_parser(name, help=summary)
        common(p, cells=("pentatope", "prism"), default="pentatope")
        p.add_argument("-s", type=int, required=True, choices=range(5))
        p.add_argument("-k", type=int, required=True)
        p.add_argument("--basis", choices=("space", "shape"), default="space")
        p.add_argument("--format", choices=fmts, default=default)
        if name == "tabulate":
            p.add_argument("--points", help="JSON file with a list of 4-tuples (numbers or 'p/q' strings)")
            p.add_argument("--lattice", type=int, help="lattice order m")
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"feec4d: error: {exc}", file=sys.stderr)
        return 2
