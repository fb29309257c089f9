"""Command-line front end.

Five pipelines over JSON input specs:

  dims       complex dimensions of a string / Dirichlet polynomial
  zeta       geometric zeta function on a grid
  autocorr   empirical vs closed-form pair-correlation frequencies
  diffract   diffraction comb (and values on supplied Gaussian atoms)
  psf-check  randomized Poisson-summation identity checks

Each pipeline writes CSV/JSON tables plus a deterministic SVG figure and a
matplotlib PNG rendering into the output directory.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import dirichlet, figures, strings, svg
from .correlation import (averaging_constant, closed_form_frequency,
                          count_displacements, empirical_frequency)
from .diffraction import (GaussianAtom, TestFunction, diffraction_apply,
                          diffraction_comb, psf_check)
from .dirichlet import DirichletPolynomial
from .errors import FracdiffError, NearPole, SchemaError
from .lattice import IdealCrystal, LatticeBasis, determinant
from .strings import StringSpec, dimension_crystal

COMMANDS = ("dims", "zeta", "autocorr", "diffract", "psf-check")
AUTOCORR_MAX_ROWS = 200


@dataclass(frozen=True)
class JobSpec:
    command: str
    input_path: str
    output_dir: str
    t_max: float = 10.0
    L: float = 1000.0
    b_max: float = 3.0
    eps: float = 1e-12
    depth: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SchemaError("command", f"must be one of {COMMANDS}")
        if self.t_max < 0 or self.L <= 0 or self.b_max < 0 or self.eps <= 0 \
                or self.depth < 0:
            raise SchemaError("options", "numeric options out of range")


# ---------------------------------------------------------------- parsing

def _number(value, field, approx=False):
    """Parse a JSON numeric: 'p/q' strings exactly, floats as given (or
    rationalized under approx=True)."""
    if isinstance(value, bool):
        raise SchemaError(field, "expected a number or 'p/q' string")
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(field, f"cannot parse rational {value!r}") from None
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if approx:
            return Fraction(value).limit_denominator(10**6)
        return value
    raise SchemaError(field, "expected a number or 'p/q' string")


def _atom_from_json(obj, field):
    try:
        amp = obj.get("amplitude", 1.0)
        if isinstance(amp, list):
            amp = complex(amp[0], amp[1])
        return GaussianAtom(amp, tuple(obj["centers"]),
                            tuple(obj["inverse_scales"]),
                            tuple(obj["modulation"]))
    except (KeyError, TypeError, IndexError) as exc:
        raise SchemaError(field, f"malformed Gaussian atom: {exc}") from None


def parse_spec(text: str):
    """Parse a JSON spec document into a StringSpec, IdealCrystal, or
    DirichletPolynomial (plus an optional atom list under 'atoms')."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("document", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("document", "top level must be an object")
    kinds = [k for k in ("string", "dirichlet", "crystal") if k in doc]
    if len(kinds) != 1:
        raise SchemaError("document",
                          "exactly one of 'string', 'dirichlet', 'crystal' required")
    approx = bool(doc.get("approx", False))
    kind = kinds[0]
    body = doc[kind]
    if not isinstance(body, dict):
        raise SchemaError(kind, "must be an object")

    if kind == "string":
        for key in ("L", "ratios", "gaps"):
            if key not in body:
                raise SchemaError(f"string.{key}", "missing field")
        L = _number(body["L"], "string.L", approx)
        ratios = [_number(v, f"string.ratios[{i}]", approx)
                  for i, v in enumerate(body["ratios"])]
        gaps = [_number(v, f"string.gaps[{i}]", approx)
                for i, v in enumerate(body["gaps"])]
        return strings.validate(L, ratios, gaps)

    if kind == "dirichlet":
        for key in ("r", "terms"):
            if key not in body:
                raise SchemaError(f"dirichlet.{key}", "missing field")
        r = _number(body["r"], "dirichlet.r", approx)
        terms = body["terms"]
        if not terms or any(len(t) != 2 for t in terms):
            raise SchemaError("dirichlet.terms", "expected [[k, m], ...]")
        ks = [int(t[0]) for t in terms]
        ms = [int(t[1]) for t in terms]
        g = math.gcd(*ks)
        if g > 1:
            r = r ** g if isinstance(r, Fraction) else float(r) ** g
            ks = [k // g for k in ks]
        return DirichletPolynomial(r, tuple(ks), tuple(ms))

    for key in ("basis", "d", "translates"):
        if key not in body:
            raise SchemaError(f"crystal.{key}", "missing field")
    basis = LatticeBasis(tuple(
        tuple(float(_number(x, "crystal.basis", approx)) for x in col)
        for col in body["basis"]))
    translates = tuple(
        tuple(float(_number(x, "crystal.translates", approx)) for x in t)
        for t in body["translates"])
    return IdealCrystal(basis, int(body["d"]), translates)


def _num_json(x):
    return str(x) if isinstance(x, Fraction) else float(x)


def emit(obj) -> str:
    """Canonical JSON emitter; parse_spec(emit(x)) == x for valid specs."""
    if isinstance(obj, StringSpec):
        doc = {"string": {"L": _num_json(obj.total_length),
                          "ratios": [_num_json(r) for r in obj.scaling_ratios],
                          "gaps": [_num_json(g) for g in obj.gaps]}}
    elif isinstance(obj, DirichletPolynomial):
        doc = {"dirichlet": {"r": _num_json(obj.generator_r),
                             "terms": [[k, m] for k, m in
                                       zip(obj.exponents, obj.multiplicities)]}}
    elif isinstance(obj, IdealCrystal):
        doc = {"crystal": {"basis": [list(c) for c in obj.basis.columns],
                           "d": obj.d,
                           "translates": [list(t) for t in obj.translates]}}
    else:
        raise SchemaError("object", f"cannot emit {type(obj).__name__}")
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- output

def _fmt12(x) -> str:
    return f"{float(x):.12g}"


def _write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt12(cell)
                              for cell in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8", newline="\n")


def _as_poly(obj) -> DirichletPolynomial:
    if isinstance(obj, DirichletPolynomial):
        return obj
    if isinstance(obj, StringSpec):
        return obj.lattice_form
    raise SchemaError("input", "command needs a 'string' or 'dirichlet' spec")


def _as_crystal(obj, t_max):
    if isinstance(obj, IdealCrystal):
        return obj
    if isinstance(obj, StringSpec):
        return dimension_crystal(obj, t_max)[0]
    # Dirichlet polynomial: its root set is directly a rank-1 crystal.
    rootset = dirichlet.solve(obj)
    translates = tuple((w.imag, w.real) for w, _ in rootset.lines())
    return IdealCrystal(LatticeBasis(((rootset.period_p,),)), 1, translates)


def _run_dims(obj, job, out: Path):
    poly = _as_poly(obj)
    rootset = dirichlet.solve(poly)
    tiled = dirichlet.tile_roots(rootset, job.t_max)
    rows = [(cd.value.real, cd.value.imag, str(cd.line_index), str(cd.n),
             str(cd.multiplicity)) for cd in tiled]
    _write_csv(out / "roots.csv", ["re", "im", "line_index", "n", "multiplicity"],
               rows)
    points = [(cd.value.real, cd.value.imag) for cd in tiled]
    style = svg.PlotStyle(title="complex dimensions", x_label="Re s",
                          y_label="Im s")
    (out / "dims.svg").write_text(svg.scatter_svg(points, style),
                                  encoding="utf-8", newline="\n")
    figures.save_scatter(out / "dims.png", points, "complex dimensions",
                         "Re s", "Im s")


def _run_zeta(obj, job, out: Path):
    if not isinstance(obj, StringSpec):
        raise SchemaError("input", "zeta needs a 'string' spec")
    bounds = dirichlet.strip_bounds(obj.lattice_form)
    res = np.linspace(bounds.D_lower - 0.5, bounds.D + 0.5, 41)
    ims = np.linspace(-job.t_max, job.t_max, 201)
    rows = []
    grid = np.empty((len(ims), len(res)))
    for i, t in enumerate(ims):
        for j, sig in enumerate(res):
            s = complex(sig, t)
            den = 1.0 - sum(float(r) ** s for r in obj.scaling_ratios)
            try:
                z = strings.geometric_zeta(obj, s)
                rows.append((sig, t, abs(den), z.real, z.imag))
                grid[i, j] = math.log10(max(abs(z), 1e-300))
            except NearPole:
                rows.append((sig, t, abs(den), "nan", "nan"))
                grid[i, j] = np.nan
    _write_csv(out / "zeta.csv", ["s_re", "s_im", "denom_abs", "zeta_re",
                                  "zeta_im"], rows)
    figures.save_heatmap(out / "zeta.png", res, ims, grid,
                         "geometric zeta (log10 |zeta|)")


def _run_autocorr(obj, job, out: Path):
    crystal = _as_crystal(obj, job.t_max)
    table = count_displacements(crystal, job.L)
    nhat = empirical_frequency(table)
    # Closed-form limits for the displacements actually reported.
    max_norm = 0.0
    ordered = sorted(table.entries, key=lambda a: (np.linalg.norm(a), a))
    ordered = ordered[:AUTOCORR_MAX_ROWS]
    for a in ordered:
        max_norm = max(max_norm, float(np.linalg.norm(a)))
    closed = closed_form_frequency(crystal, max_norm + 1.0)
    ckeys = np.array(sorted(closed)) if closed else np.empty((0, crystal.ambient_dim))
    rows = []
    for a in ordered:
        diffs = np.max(np.abs(ckeys - np.array(a)), axis=1)
        idx = int(np.argmin(diffs))
        cf = closed[tuple(ckeys[idx])] if diffs[idx] <= 1e-9 else 0.0
        rows.append(tuple(a) + (str(table.entries[a]), nhat[a], cf,
                                abs(nhat[a] - cf)))
    coord_cols = [f"a{i+1}" for i in range(crystal.ambient_dim)]
    _write_csv(out / "autocorr.csv",
               coord_cols + ["N_L", "n_hat", "closed_form", "abs_err"], rows)
    points = [(float(a[0]), nhat[a]) for a in ordered]
    style = svg.PlotStyle(title=f"pair frequencies at L={job.L:g}",
                          x_label="displacement (first coordinate)",
                          y_label="n_hat")
    (out / "autocorr.svg").write_text(svg.stem_svg(points, style),
                                      encoding="utf-8", newline="\n")
    figures.save_stems(out / "autocorr.png", points,
                       f"pair frequencies at L={job.L:g}",
                       "displacement (first coordinate)", "n_hat")


def _run_diffract(obj, job, out: Path, atoms):
    crystal = _as_crystal(obj, job.t_max)
    comb = diffraction_comb(crystal, job.b_max)
    rows = [tuple(cp.b) + (cp.intensity, cp.weight) for cp in comb.points]
    coord_cols = [f"b{i+1}" for i in range(crystal.m)]
    _write_csv(out / "comb.csv", coord_cols + ["intensity", "weight"], rows)
    stems = [(cp.b[0], cp.weight) for cp in comb.points]
    style = svg.PlotStyle(title="diffraction comb", x_label="b", y_label="weight")
    (out / "comb.svg").write_text(svg.stem_svg(stems, style),
                                  encoding="utf-8", newline="\n")
    figures.save_stems(out / "comb.png", stems, "diffraction comb", "b", "weight")
    values = []
    for atom in atoms:
        res = diffraction_apply(crystal, atom, job.eps)
        values.append({"value_re": res.value.real, "value_im": res.value.imag,
                       "truncation_bound": res.truncation_bound})
    _write_json(out / "values.json", {"prefactor": comb.prefactor,
                                      "values": values})


def _run_psf_check(obj, job, out: Path, trials: int = 50):
    if not isinstance(obj, IdealCrystal):
        raise SchemaError("input", "psf-check needs a 'crystal' spec")
    rng = np.random.default_rng(job.seed)
    m, d = obj.m, obj.d
    report = []
    max_diff = 0.0
    for _ in range(trials):
        atom = GaussianAtom(complex(*rng.uniform(-1, 1, 2)),
                            tuple(rng.uniform(-1, 1, m + d)),
                            tuple(rng.uniform(0.5, 2.0, m + d)),
                            tuple(rng.uniform(-1, 1, m + d)))
        alpha = rng.uniform(0, 1, m)
        x = rng.uniform(-1, 1, d)
        res = psf_check(obj.basis, d, atom, alpha, x, eps=job.eps)
        max_diff = max(max_diff, res.diff)
        report.append({"lhs_re": res.lhs.real, "lhs_im": res.lhs.imag,
                       "rhs_re": res.rhs.real, "rhs_im": res.rhs.imag,
                       "diff": res.diff})
    _write_json(out / "report.json", {"trials": report, "max_diff": max_diff})


def run(job: JobSpec) -> int:
    """Execute a job; artifacts land in job.output_dir.  Returns 0 on success."""
    text = Path(job.input_path).read_text(encoding="utf-8")
    obj = parse_spec(text)
    atoms = []
    doc = json.loads(text)
    for i, a in enumerate(doc.get("atoms", [])):
        atoms.append(_atom_from_json(a, f"atoms[{i}]"))
    out = Path(job.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if job.command == "dims":
        _run_dims(obj, job, out)
    elif job.command == "zeta":
        _run_zeta(obj, job, out)
    elif job.command == "autocorr":
        _run_autocorr(obj, job, out)
    elif job.command == "diffract":
        _run_diffract(obj, job, out, atoms)
    else:
        _run_psf_check(obj, job, out)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fracdiff",
        description="complex dimensions and diffraction of lattice strings")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="input_path", required=True)
        p.add_argument("--out", dest="output_dir", required=True)
        p.add_argument("--t-max", dest="t_max", type=float, default=10.0)
        p.add_argument("--L", dest="L", type=float, default=1000.0)
        p.add_argument("--b-max", dest="b_max", type=float, default=3.0)
        p.add_argument("--eps", dest="eps", type=float, default=1e-12)
        p.add_argument("--depth", dest="depth", type=int, default=10)
        p.add_argument("--seed", dest="seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        job = JobSpec(command=args.command, input_path=args.input_path,
                      output_dir=args.output_dir, t_max=args.t_max, L=args.L,
                      b_max=args.b_max, eps=args.eps, depth=args.depth,
                      seed=args.seed)
        return run(job)
    except FracdiffError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
