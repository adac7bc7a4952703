"""Command-line front end.

Subcommands: spectrum, measure (compute / --invert), weyl, transform, krein,
reconstruct, bm-check, hl-probe, db-check, verify-all.  Outputs are CSV or
JSON with a metadata header; all numbers are printed with 17 significant
digits, randomness flows through a single --seed flag, and --no-timestamp
makes reruns byte-identical.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys

import numpy as np

from . import __version__
from .coeffs import CoefficientModel
from .errors import ConfigError, JacobiWeylError
from .inverse import borg_marchenko_rate, hochstadt_liebermann_probe, \
    reconstruct_from_measure
from .krein import InterlacedSpectra, krein_fit
from .lattice import LatticeWindow
from .spectra import SpectralMeasure, eigen_tridiagonal, spectral_measure
from .transform import forward_transform, inverse_transform
from .weyl import m_half_line, pole_residue_form, stieltjes_inversion, \
    weyl_m_sampler


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _meta_lines(args, task: str, extra: dict | None = None) -> list[str]:
    lines = [f"# jacobiweyl {__version__}", f"# task: {task}",
             f"# seed: {getattr(args, 'seed', 0)}"]
    if extra:
        for key, val in extra.items():
            lines.append(f"# {key}: {val}")
    if not args.no_timestamp:
        lines.append(f"# generated: {_dt.datetime.now().isoformat()}")
    return lines


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_operator(args):
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
        unknown = set(doc) - {"operator", "window"}
        if unknown:
            raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
        if "operator" not in doc or "window" not in doc:
            raise ConfigError("config requires 'operator' and 'window'")
        coeffs = CoefficientModel.from_config(doc["operator"])
        win = doc["window"]
        if (not isinstance(win, list)) or len(win) != 2:
            raise ConfigError("'window' must be [n_left, n_right]")
        return coeffs, LatticeWindow(int(win[0]), int(win[1]))
    if args.family is None or args.window is None:
        raise ConfigError("provide --config FILE or --family/--window")
    if args.family == "free":
        coeffs = CoefficientModel.free()
    elif args.family == "linear-potential":
        coeffs = CoefficientModel.linear_potential(args.slope)
    elif args.family == "geometric-a":
        coeffs = CoefficientModel.geometric_a(args.ratio)
    else:
        raise ConfigError(f"inline family {args.family!r} not supported; "
                          "use --config for table/shifted operators")
    return coeffs, LatticeWindow(args.window[0], args.window[1])


def _add_operator_args(p):
    p.add_argument("--config", help="JSON file with operator and window")
    p.add_argument("--family", choices=["free", "linear-potential", "geometric-a"])
    p.add_argument("--window", type=int, nargs=2, metavar=("NL", "NR"))
    p.add_argument("--slope", type=float, default=1.0)
    p.add_argument("--ratio", type=float, default=0.5)


def _add_common(p):
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-timestamp", action="store_true")


# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    coeffs, window = _load_operator(args)
    result = eigen_tridiagonal(coeffs, window, vectors=False)
    lines = _meta_lines(args, "spectrum",
                        {"window": f"[{window.n_left}, {window.n_right}]"})
    lines.append("lambda")
    lines.extend(_fmt(x) for x in result.eigenvalues)
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_measure(args) -> int:
    coeffs, window = _load_operator(args)
    rho = spectral_measure(coeffs, window)
    if args.invert:
        with open(args.tasks) as fh:
            tasks = json.load(fh)
        unknown = set(tasks) - {"intervals", "eps_sequence"}
        if unknown:
            raise ConfigError(f"unknown task keys: {sorted(unknown)}")
        intervals = tasks.get("intervals")
        if not intervals:
            raise ConfigError("task list needs 'intervals'")
        eps = tasks.get("eps_sequence", [10.0 ** (-k) for k in range(1, 7)])
        m = pole_residue_form(coeffs, window)
        results = []
        for x0, x1 in intervals:
            mass = stieltjes_inversion(m, float(x0), float(x1), eps_sequence=eps)
            results.append({"interval": [x0, x1], "mass": mass})
        doc = {"meta": {"task": "measure-invert", "seed": args.seed},
               "results": results}
        _emit(args, json.dumps(doc, indent=2) + "\n")
        return 0
    if args.format == "json":
        _emit(args, rho.to_json() + "\n")
    else:
        header = "\n".join(_meta_lines(args, "measure")) + "\n"
        _emit(args, header + rho.to_csv())
    return 0


def cmd_weyl(args) -> int:
    coeffs, window = _load_operator(args)
    m = weyl_m_sampler(coeffs, window)
    if args.ray is not None:
        ts = np.geomspace(args.t_range[0], args.t_range[1], args.samples)
        zs = ts * np.exp(1j * args.ray)
    else:
        re = np.linspace(args.re_range[0], args.re_range[1], args.samples)
        im = np.linspace(args.im_range[0], args.im_range[1], args.samples)
        rr, ii = np.meshgrid(re, im)
        zs = (rr + 1j * ii).ravel()
    vals = m(zs)
    lines = _meta_lines(args, "weyl",
                        {"grid": "ray" if args.ray is not None else "rectangle"})
    lines.append("re_z,im_z,re_m,im_m")
    for z, v in zip(np.atleast_1d(zs), np.atleast_1d(vals)):
        lines.append(",".join([_fmt(z.real), _fmt(z.imag),
                               _fmt(v.real), _fmt(v.imag)]))
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_transform(args) -> int:
    coeffs, window = _load_operator(args)
    rho = spectral_measure(coeffs, window)
    with open(args.vector) as fh:
        rows = [line.strip() for line in fh if line.strip()
                and not line.startswith("#")]
    body = rows[1:] if not _is_number(rows[0].split(",")[-1]) else rows
    data = np.array([float(r.split(",")[-1]) for r in body])
    if args.direction == "forward":
        out = forward_transform(coeffs, window, data, rho)
        index_name, value_rows = "atom_index", out
    else:
        out = inverse_transform(coeffs, window, data, rho)
        index_name, value_rows = "site", out
    lines = _meta_lines(args, f"transform-{args.direction}")
    lines.append(f"{index_name},value")
    if args.direction == "forward":
        for k, v in enumerate(value_rows):
            lines.append(f"{k},{_fmt(v)}")
    else:
        for n, v in zip(window.interior(), value_rows):
            lines.append(f"{n},{_fmt(v)}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False


def cmd_krein(args) -> int:
    if args.spectra_csv:
        mu, nu = _read_spectra_csv(args.spectra_csv)
        spectra = InterlacedSpectra(mu=mu, nu=nu)
        if not args.samples_csv:
            raise ConfigError("--spectra-csv requires --samples-csv with m samples")
        samples = _read_samples_csv(args.samples_csv)
    else:
        coeffs, window = _load_operator(args)
        anchor = args.site if args.site is not None else window.n_right - 1
        spectra = InterlacedSpectra.from_window(coeffs, window, anchor)
        rng = np.random.default_rng(args.seed)
        zs = rng.uniform(-2, 2, size=12) + 1j * rng.uniform(1.0, 2.0, size=12)
        samples = [(z, m_half_line(coeffs, window, z, "left", anchor)) for z in zs]
    rep = krein_fit(spectra, samples, p=args.genus)
    lines = _meta_lines(args, "krein", {"constant": _fmt(rep.constant),
                                        "genus": rep.genus_p,
                                        "tail_estimate": _fmt(rep.tail_estimate)})
    lines.append("re_z,im_z,re_value,im_value")
    for z in [complex(args.eval_re, args.eval_im)]:
        v = rep(z)
        lines.append(",".join([_fmt(z.real), _fmt(z.imag), _fmt(v.real), _fmt(v.imag)]))
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _read_spectra_csv(path):
    mu, nu = [], []
    with open(path) as fh:
        rows = [line.strip() for line in fh if line.strip()]
    for row in rows[1:]:
        parts = row.split(",")
        if parts[0]:
            mu.append(float(parts[0]))
        if len(parts) > 1 and parts[1]:
            nu.append(float(parts[1]))
    return np.array(mu), np.array(nu)


def _read_samples_csv(path):
    samples = []
    with open(path) as fh:
        rows = [line.strip() for line in fh if line.strip()]
    for row in rows[1:]:
        re_z, im_z, re_m, im_m = (float(x) for x in row.split(","))
        samples.append((complex(re_z, im_z), complex(re_m, im_m)))
    return samples


def cmd_reconstruct(args) -> int:
    with open(args.measure) as fh:
        rho = SpectralMeasure.from_json(fh.read())
    rec = reconstruct_from_measure(rho, n_sites=args.sites)
    lines = _meta_lines(args, "reconstruct",
                        {"orthogonality_defect": _fmt(rec.orthogonality_defect),
                         "renormalized": rec.renormalized})
    lines.append("n,a,b")
    for i, bv in enumerate(rec.b, start=1):
        av = rec.a[i - 1] if i - 1 < rec.a.size else math.nan
        lines.append(f"{i},{_fmt(av) if not math.isnan(av) else ''},{_fmt(bv)}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_bm_check(args) -> int:
    coeffs0, window = _load_operator(args)
    with open(args.other) as fh:
        doc = json.load(fh)
    coeffs1 = CoefficientModel.from_config(doc["operator"] if "operator" in doc
                                           else doc)
    report = borg_marchenko_rate(coeffs0, coeffs1, window, ntilde=args.ntilde)
    doc = {"meta": {"task": "bm-check", "seed": args.seed},
           "ntilde": report.ntilde,
           "predicted_bound": report.predicted_bound,
           "slopes": list(report.slopes),
           "verdict": report.verdict}
    _emit(args, json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_hl_probe(args) -> int:
    coeffs, window = _load_operator(args)
    report = hochstadt_liebermann_probe(coeffs, window, ntilde=args.ntilde,
                                        trials=args.trials,
                                        magnitude=args.magnitude,
                                        seed=args.seed)
    doc = {"meta": {"task": "hl-probe", "seed": args.seed},
           "ratio_vanishes": report.ratio_vanishes,
           "min_displacement": report.min_displacement,
           "trials": report.n_trials,
           "failures": report.failures}
    _emit(args, json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_db_check(args) -> int:
    from .debranges import (DeBrangesDescriptor, chain_inclusion_check,
                            db_inner_product, embedding_check,
                            kernel_identity_defect)
    from .lattice import phi_polynomials

    coeffs, window = _load_operator(args)
    rho = spectral_measure(coeffs, window)
    rng = np.random.default_rng(args.seed)
    n = args.site if args.site is not None else (window.n_left + window.n_right) // 2
    n = min(max(n, window.n_left + 1), window.n_right - 2)
    desc = DeBrangesDescriptor(coeffs, window, n)
    rows = []
    worst_kernel = 0.0
    for _ in range(8):
        zeta = complex(rng.uniform(-2, 2), rng.uniform(-1.5, 1.5))
        z = complex(rng.uniform(-2, 2), rng.uniform(-1.5, 1.5))
        worst_kernel = max(worst_kernel,
                           kernel_identity_defect(coeffs, window, n, zeta, z))
    rows.append(("kernel-identity", worst_kernel, 1e-10))
    polys = phi_polynomials(coeffs, window)
    basis = [np.asarray(polys[m], dtype=float)
             for m in range(1, window.index(n) + 1)]
    unit = 0.0
    for i, pi in enumerate(basis):
        for j, pj in enumerate(basis):
            val = db_inner_product(desc, pi, pj).real
            unit = max(unit, abs(val - (1.0 if i == j else 0.0)))
    rows.append(("unitarity", unit, 1e-7))
    embed = 0.0
    for pm in basis:
        _, _, resid = embedding_check(desc, pm, rho)
        embed = max(embed, resid)
    rows.append(("embedding", embed, 1e-7))
    chain = chain_inclusion_check(coeffs, window, n)
    rows.append(("chain-inclusion", max(chain.kernel_membership_defect,
                                        chain.shared_inner_product_defect,
                                        chain.complement_orthogonality_defect), 1e-7))
    lines = _meta_lines(args, "db-check", {"site": n})
    lines.append("check,residual,tolerance,status")
    ok = True
    for name, resid, tol in rows:
        status = "pass" if resid <= tol else "fail"
        ok = ok and resid <= tol
        lines.append(f"{name},{_fmt(resid)},{_fmt(tol)},{status}")
    _emit(args, "\n".join(lines) + "\n")
    return 0 if ok else 4


def cmd_verify_all(args) -> int:
    from .acceptance import run_all

    results = run_all(verbose=False)
    lines = _meta_lines(args, "verify-all")
    for res in results:
        lines.append(res.line())
    n_fail = sum(1 for r in results if not r.passed)
    lines.append(f"# {len(results) - n_fail}/{len(results)} criteria passed")
    _emit(args, "\n".join(lines) + "\n")
    return 0 if n_fail == 0 else 4


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacobiweyl",
        description="Weyl functions and inverse spectral checks for Jacobi "
                    "operators on truncated lattices")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues of the window operator")
    _add_operator_args(p)
    _add_common(p)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("measure", help="spectral measure (or --invert tasks)")
    _add_operator_args(p)
    _add_common(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--invert", action="store_true")
    p.add_argument("--tasks", help="JSON task list with 'intervals'")
    p.set_defaults(fn=cmd_measure)

    p = sub.add_parser("weyl", help="sample M(z) on a grid or ray")
    _add_operator_args(p)
    _add_common(p)
    p.add_argument("--ray", type=float, help="ray argument in radians")
    p.add_argument("--t-range", type=float, nargs=2, default=(1.0, 100.0))
    p.add_argument("--re-range", type=float, nargs=2, default=(-2.0, 2.0))
    p.add_argument("--im-range", type=float, nargs=2, default=(0.1, 2.0))
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(fn=cmd_weyl)

    p = sub.add_parser("transform", help="forward/inverse spectral transform")
    _add_operator_args(p)
    _add_common(p)
    p.add_argument("--direction", choices=["forward", "inverse"],
                   default="forward")
    p.add_argument("--vector", required=True,
                   help="CSV whose last column is the vector (site- or atom-indexed)")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("krein", help="fit and evaluate the product representation")
    _add_operator_args(p)
    _add_common(p)
    p.add_argument("--site", type=int)
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--spectra-csv", help="CSV with columns mu,nu")
    p.add_argument("--samples-csv", help="CSV with re_z,im_z,re_m,im_m")
    p.add_argument("--eval-re", type=float, default=0.0)
    p.add_argument("--eval-im", type=float, default=1.0)
    p.set_defaults(fn=cmd_krein)

    p = sub.add_parser("reconstruct", help="coefficients from a measure JSON")
    _add_common(p)
    p.add_argument("--measure", required=True)
    p.add_argument("--sites", type=int)
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("bm-check", help="Weyl-difference decay rate report")
    _add_operator_args(p)
    _add_common(p)
    p.add_argument("--other", required=True, help="JSON config of the comparison operator")
    p.add_argument("--ntilde", type=int, required=True)
    p.set_defaults(fn=cmd_bm_check)

    p = sub.add_parser("hl-probe", help="half-data rigidity probe")
    _add_operator_args(p)
    _add_common(p)
    p.add_argument("--ntilde", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--magnitude", type=float, default=0.05)
    p.set_defaults(fn=cmd_hl_probe)

    p = sub.add_parser("db-check", help="de Branges invariant table")
    _add_operator_args(p)
    _add_common(p)
    p.add_argument("--site", type=int)
    p.set_defaults(fn=cmd_db_check)

    p = sub.add_parser("verify-all", help="run the acceptance criteria")
    _add_common(p)
    p.set_defaults(fn=cmd_verify_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except JacobiWeylError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
