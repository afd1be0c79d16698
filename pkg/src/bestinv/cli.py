"""``bestinv`` command line.

Exit codes: 0 ok, 1 validation failure, 2 bound/lemma violation (a defect
signal), 3 I/O error, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import FORMAT_VERSION, __version__
from .certificate import build_certificate, lemma_diagnostics
from .constants import ALPHA, M_NONPOS_TOL
from .errors import BestInvError, NoNonpositiveEntry, ValidationError
from .extremal import extremal_matrix, random_rotation, tetrahedron_config
from .formats import (
    Manifest,
    config_from_json,
    config_to_json,
    dumps,
    matrix_from_json,
    matrix_to_json,
    polygon_from_json,
    read_json,
    write_json,
)
from .hopf import config_from_matrix, make_config, matrix_from_config, random_config, transfer_identity_check
from .linalg import all_pair_lambda2, validate_ortho
from .optimize import estimate_a_n, tightness_sweep, write_sweep_csv
from .oracle import brute_force_best_pair
from .polygon import check_corollary, gap_consistency
from .selection import BaseCaseStep, CaseAStep, CaseBStep, Selection, select_certified, verify_bound

EXIT_OK, EXIT_INVALID, EXIT_VIOLATION, EXIT_IO, EXIT_USAGE = 0, 1, 2, 3, 64
THREADS_ENV = "BESTINV_THREADS"


class Violation(Exception):
    """A checked bound or lemma failed: exit code 2."""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- lemma scan ----------------------------------------------------------------

@dataclass
class ScanReport:
    trials: int
    seed: int
    n_values: list
    violations: int = 0
    chain_failures: int = 0
    min_entry_min: float = math.inf
    min_entry_max: float = -math.inf
    histogram: dict = field(default_factory=dict)
    worst: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "n_range": [min(self.n_values), max(self.n_values)],
            "violations": self.violations,
            "chain_failures": self.chain_failures,
            "minEntry_min": self.min_entry_min,
            "minEntry_max": self.min_entry_max,
            "histogram": self.histogram,
            "worst": self.worst,
        }


def lemma_scan(n, trials: int, seed: int, bins: int = 10) -> ScanReport:
    """Build certificates for ``trials`` random valid configs and count lemma violations.

    ``n`` is an int or an inclusive (lo, hi) range sampled uniformly per trial.
    A violation is a certificate whose minimum entry exceeds 1e-12. The
    unconditional bounds F >= 8 R2/n - 32/(3n^2) and R2 >= 4/n are checked
    on every trial as well (``chain_failures``).
    """
    lo, hi = (n, n) if isinstance(n, int) else n
    if lo < 3 or trials < 1:
        raise ValidationError("lemma-scan needs n >= 3 and trials >= 1")
    rng = np.random.default_rng(seed)
    mins = np.empty(trials)
    ns = []
    rep = ScanReport(trials, seed, ns)
    worst_val = -math.inf
    for k in range(trials):
        nk = int(rng.integers(lo, hi + 1))
        ns.append(nk)
        cert = build_certificate(random_config(nk, rng))
        v = cert.min_entry.value
        mins[k] = v
        if v > M_NONPOS_TOL:
            rep.violations += 1
        if not (cert.F >= cert.lower_raw - 1e-10 and cert.R2 >= 4.0 / nk - 1e-12):
            rep.chain_failures += 1
        if v > worst_val:
            worst_val = v
            rep.worst = {"trial": k, "n": nk, **cert.to_json()}
    rep.min_entry_min = float(mins.min())
    rep.min_entry_max = float(mins.max())
    counts, edges = np.histogram(mins, bins=bins)
    rep.histogram = {"counts": counts.tolist(), "edges": edges.tolist()}
    return rep


# --- subcommands -----------------------------------------------------------------

def _load_matrix(path, man: Manifest):
    doc, digest = read_json(path)
    man.input(path, digest)
    return validate_ortho(matrix_from_json(doc))


def _emit(args, summary: str, doc: dict) -> None:
    if args.json:
        print(dumps(doc))
    else:
        print(summary)


def _save(path, doc, man: Manifest) -> None:
    doc = dict(doc)
    doc["manifest"] = man.finish()
    write_json(path, doc)


def cmd_select(args, man):
    U = _load_matrix(args.input, man)
    sel = select_certified(U)
    doc = sel.to_json(trace=args.trace)
    rep = verify_bound(U, sel)
    if args.out:
        man.output(args.out)
        _save(args.out, doc, man)
    kinds = ",".join(s.kind for s in sel.path)
    _emit(args, f"pair ({sel.i}, {sel.j})  sigma2={sel.sigma2:.12g}  invNorm={sel.inv_norm:.12g}  "
                f"bound={sel.bound:.12g}  ratio={sel.inv_norm / sel.bound:.12g}  path=[{kinds}]", doc)
    if not rep.passed:
        raise Violation("; ".join(rep.failures))


def cmd_oracle(args, man):
    U = _load_matrix(args.input, man)
    res = brute_force_best_pair(U, keep_table=bool(args.table), threads=args.threads)
    doc = {
        "bestPair": list(res.best_pair),
        "lambda2Max": res.lambda2_max,
        "invNormMin": res.inv_norm_min,
        "alpha_over_n": ALPHA / U.n,
    }
    if args.table:
        import csv

        with open(args.table, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["i", "j", "lambda2"])
            for i, j, lam in res.table_rows():
                wr.writerow([i, j, repr(lam)])
        man.output(args.table)
    _emit(args, f"best pair {res.best_pair}  lambda2Max={res.lambda2_max:.12g}  "
                f"invNormMin={res.inv_norm_min:.12g}  alpha/n={ALPHA / U.n:.12g}", doc)
    if res.lambda2_max < ALPHA / U.n - 1e-12:
        raise Violation(f"oracle max {res.lambda2_max!r} below alpha/n")


def cmd_lemma_scan(args, man):
    if args.input:
        doc_in, digest = read_json(args.input)
        man.input(args.input, digest)
        rep = lemma_diagnostics(make_config(config_from_json(doc_in)))
        doc = rep.to_json()
        _emit(args, json.dumps(rep.certificate.to_json()), doc)
        if not rep.flags["M_has_nonpositive"]:
            raise Violation("certificate matrix is entrywise positive")
        return
    n = (args.n_min, args.n_max) if args.n_min is not None else args.n
    if n is None:
        raise UsageError("lemma-scan needs --n, --n-min/--n-max, or --in")
    man.seed("seed", args.seed)
    rep = lemma_scan(n, args.trials, args.seed)
    doc = rep.to_json()
    if args.out:
        man.output(args.out)
        _save(args.out, doc, man)
    _emit(args, f"trials={rep.trials} violations={rep.violations} chain_failures={rep.chain_failures} "
                f"minEntry in [{rep.min_entry_min:.3e}, {rep.min_entry_max:.3e}]", doc)
    if rep.violations or rep.chain_failures:
        raise Violation(f"{rep.violations} lemma violations, {rep.chain_failures} chain failures")


def cmd_extremal(args, man):
    rot = None if args.rotate_seed is None else random_rotation(args.rotate_seed)
    if args.rotate_seed is not None:
        man.seed("rotate_seed", args.rotate_seed)
    cfg = tetrahedron_config(args.n, rot)
    U = matrix_from_config(cfg)
    res = brute_force_best_pair(U)
    man.output(args.out)
    if args.config_out:
        man.output(args.config_out)
        _save(args.config_out, config_to_json(cfg), man)
    _save(args.out, matrix_to_json(U.data), man)
    doc = {"n": args.n, "lambda2Max": res.lambda2_max, "alpha_over_n": ALPHA / args.n,
           "invNormMin": res.inv_norm_min}
    _emit(args, f"wrote {args.out}: n={args.n} lambda2Max={res.lambda2_max:.15g} alpha/n={ALPHA / args.n:.15g}", doc)


def cmd_estimate(args, man):
    man.seed("seed", args.seed)
    if args.sweep is not None:
        rows = tightness_sweep(args.sweep, args.restarts, args.iters, args.seed, args.hops,
                               args.warm_extremal, args.threads)
        if args.out:
            write_sweep_csv(rows, args.out)
            man.output(args.out)
            write_json(str(args.out) + ".manifest.json", man.finish())
        doc = {"rows": [r.__dict__ for r in rows]}
        lines = [f"{'n':>4} {'a_est':>14} {'b_est':>12} {'bound':>12} {'ratio':>10} mono"]
        lines += [f"{r.n:4d} {r.a_est:14.10f} {r.b_est:12.8f} {r.bound:12.8f} {r.ratio:10.7f} "
                  f"{'' if r.nondecreasing is None else r.nondecreasing}" for r in rows]
        _emit(args, "\n".join(lines), doc)
        bad = [r.n for r in rows if r.a_est < ALPHA / r.n - 1e-9]
    else:
        if args.n is None:
            raise UsageError("estimate needs --n or --sweep")
        est = estimate_a_n(args.n, args.restarts, args.iters, args.seed, args.warm_extremal,
                           args.hops, args.threads)
        doc = est.to_json()
        doc["bestMatrix"] = matrix_to_json(est.best_matrix.data)
        if args.out:
            man.output(args.out)
            _save(args.out, doc, man)
        short = {k: v for k, v in doc.items() if k not in ("log", "bestMatrix")}
        _emit(args, " ".join(f"{k}={v}" for k, v in short.items()), short)
        bad = [est.n] if est.a_estimate < ALPHA / est.n - 1e-9 else []
    if bad:
        raise Violation(f"estimate below alpha/n for n={bad}")


def cmd_polygon_check(args, man):
    doc_in, digest = read_json(args.input)
    man.input(args.input, digest)
    rep = check_corollary(polygon_from_json(doc_in, normalize=args.normalize))
    doc = rep.to_json()
    _emit(args, f"n={rep.n} maxGap={rep.max_gap:.15g} at {rep.pair}  bound 2alpha/n={rep.bound:.15g}  "
                f"ratio={rep.ratio:.12g}  {rep.verdict.label}", doc)
    if not rep.holds:
        raise Violation(f"max gap {rep.max_gap!r} below 2 alpha/n")


def _selection_from_json(doc) -> Selection:
    steps = []
    for s in doc.get("path", []):
        if isinstance(s, dict):
            kind = s.get("kind")
            if kind == "CaseA":
                steps.append(CaseAStep(s["removed_row"], s["v"], s["t"]))
            elif kind == "CaseB":
                steps.append(CaseBStep(s["i"], s["j"], s["m_value"]))
            else:
                steps.append(BaseCaseStep())
    n = int(doc["n"]) if "n" in doc else int(round(doc["bound"] ** 2 * ALPHA))
    return Selection(int(doc["i"]), int(doc["j"]), n, float(doc["sigma2"]), float(doc["invNorm"]),
                     float(doc["bound"]), steps)


def cmd_verify(args, man):
    U = _load_matrix(args.input, man)
    sel_doc, digest = read_json(args.selection)
    man.input(args.selection, digest)
    try:
        sel = _selection_from_json(sel_doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad selection JSON: {exc}") from exc
    rep = verify_bound(U, sel)
    _emit(args, ("PASS" if rep.passed else "FAIL: " + "; ".join(rep.failures))
          + f"  invNorm/bound={rep.inv_norm_over_bound:.12g}", rep.to_json())
    if not rep.passed:
        raise Violation("selection failed verification")


def cmd_roundtrip(args, man):
    doc_in, digest = read_json(args.input)
    man.input(args.input, digest)
    if "rows" in doc_in:
        U = validate_ortho(matrix_from_json(doc_in))
        cfg = config_from_matrix(U)
    else:
        cfg = make_config(config_from_json(doc_in))
        U = matrix_from_config(cfg)
    V = matrix_from_config(cfg)
    cfg2 = config_from_matrix(V)
    doc = {
        "n": U.n,
        "lambda2_maxdiff": float(np.max(np.abs(all_pair_lambda2(U.data) - all_pair_lambda2(V.data)))),
        "config_maxdiff": float(np.max(np.abs(np.asarray(cfg.w) - np.asarray(cfg2.w)))),
        "transfer_residual": transfer_identity_check(U),
        "gap_residual": gap_consistency(U),
    }
    _emit(args, " ".join(f"{k}={v:.3e}" if isinstance(v, float) else f"{k}={v}" for k, v in doc.items()), doc)
    if doc["lambda2_maxdiff"] > 1e-10 or doc["config_maxdiff"] > 1e-10 or doc["transfer_residual"] > 1e-11:
        raise Violation("round trip residual above tolerance")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bestinv", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version",
                   version=f"bestinv {__version__} (format {FORMAT_VERSION})")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON on stdout")
    common.add_argument("--threads", type=int, default=int(os.environ.get(THREADS_ENV, "1")),
                        help=f"parallel pair scans / restarts (env {THREADS_ENV})")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("select", parents=[common], help="certified pair with invNorm <= sqrt(n/alpha)")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--trace", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_select)

    s = sub.add_parser("oracle", parents=[common], help="exhaustive best pair")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--table", help="CSV with columns i,j,lambda2")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("lemma-scan", parents=[common], help="random certificate scan")
    s.add_argument("--n", type=int)
    s.add_argument("--n-min", type=int)
    s.add_argument("--n-max", type=int)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--in", dest="input", help="config JSON: dump its certificate instead of scanning")
    s.add_argument("--out")
    s.set_defaults(func=cmd_lemma_scan)

    s = sub.add_parser("extremal", parents=[common], help="equality matrix for 4 | n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--rotate-seed", type=int)
    s.add_argument("--out", required=True)
    s.add_argument("--config-out")
    s.set_defaults(func=cmd_extremal)

    s = sub.add_parser("estimate", parents=[common], help="estimate a_n / b_n")
    s.add_argument("--n", type=int)
    s.add_argument("--sweep", type=int, metavar="NMAX")
    s.add_argument("--restarts", type=int, default=8)
    s.add_argument("--iters", type=int, default=5000)
    s.add_argument("--hops", type=int, default=40)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--warm-extremal", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("polygon-check", parents=[common], help="max pairwise gap vs 2 alpha/n")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--normalize", action="store_true", help="rescale perimeter to 2")
    s.set_defaults(func=cmd_polygon_check)

    s = sub.add_parser("verify", parents=[common], help="recheck a selection against its matrix")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--selection", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("roundtrip", parents=[common], help="matrix <-> Hopf config round trip")
    s.add_argument("--in", dest="input", required=True)
    s.set_defaults(func=cmd_roundtrip)
    return p


def dispatch(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        man = Manifest(args.command, argv, __version__, FORMAT_VERSION)
        args.func(args, man)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except (Violation, NoNonpositiveEntry, AssertionError) as exc:
        print(f"VIOLATION: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ValidationError, BestInvError) as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, json.JSONDecodeError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
