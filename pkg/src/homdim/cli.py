"""Command-line front end.

Exit codes: 0 success (including labeled indeterminate verdicts), 1 usage,
2 parse error, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .complexes import NEG_INF, POS_INF, ChainComplex, ComplexError, complex_from_json, homology
from .dimensions import (DeformationError, ci_dim_best, default_registry, gdim, hierarchy_check,
                         load_registry, pci_dim, pd_verdict)
from .invariants import complexity_estimate, depth, poincare_series, ring_depth
from .modules import GradedModule
from .resolution import minimal_free_resolution
from .ring import ParseError, is_complete_intersection, load_algebra, load_json, locate_fragment

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_VIOLATION = 0, 1, 2, 3

COMMANDS = ("ring-info", "homology", "resolve", "betti", "poincare", "depth", "pd", "gdim",
            "pcidim", "cidim-bound", "hierarchy", "verify")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class JobConfig:
    command: str
    ring: str | None = None
    objects: list = field(default_factory=list)
    cutoff: int = 10
    degree_cap: int = 20
    window: int = 8
    format: str = "table"
    seed: int = 0
    degree: int | None = None
    deformations: str | None = None
    suite: str = "paper"

    def validate(self):
        for name in ("cutoff", "degree_cap", "window"):
            if getattr(self, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.command != "verify" and not self.ring:
            raise UsageError(f"{self.command} needs --ring")


def build_parser():
    p = _Parser(prog="homdim", description="Homological dimensions over graded monomial quotients.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--ring", help="ring definition (JSON)")
    p.add_argument("--object", action="append", default=[], dest="objects",
                   help="module or complex file (JSON); defaults to the residue field")
    p.add_argument("--cutoff", type=int, default=10, help="homological cutoff N")
    p.add_argument("--degree-cap", type=int, default=20, help="internal degree cap D")
    p.add_argument("--window", type=int, default=8, help="reflexivity window W")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree", type=int, help="homological degree for 'homology'")
    p.add_argument("--deformations", help="deformation registry (JSON)")
    p.add_argument("--suite", default="paper", help="suite for 'verify' (paper)")
    return p


def parse_config(argv):
    ns = build_parser().parse_args(argv)
    cfg = JobConfig(ns.command, ns.ring, ns.objects, ns.cutoff, ns.degree_cap, ns.window,
                    ns.format, ns.seed, ns.degree, ns.deformations, ns.suite)
    cfg.validate()
    return cfg


def load_object(R, path):
    with open(path) as fh:
        text = fh.read()
    data = load_json(text, source=path)
    if not isinstance(data, dict):
        raise ParseError("object file must hold a JSON object", source=path)
    try:
        return complex_from_json(R, data, source=path)
    except ParseError as exc:
        raise locate_fragment(exc, text) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed object: {exc}", source=path) from None


def _fmt(v):
    if v == NEG_INF:
        return "-inf"
    if v == POS_INF:
        return "inf"
    return v


def _table(report):
    lines = []
    for key, val in report.items():
        if isinstance(val, dict):
            lines.append(f"{key}:")
            for k2, v2 in val.items():
                lines.append(f"  {k2}: {v2}")
        elif isinstance(val, str) and "\n" in val:
            lines.append(f"{key}:")
            lines.extend("  " + ln for ln in val.splitlines())
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines)


def _run(cfg):
    """Returns ``(report, status)``."""
    if cfg.command == "verify":
        from .verification import run_suite
        if cfg.suite != "paper":
            raise UsageError(f"unknown suite {cfg.suite!r}")
        results = run_suite(seed=None)
        report = {"suite": cfg.suite,
                  "results": {r.name: "PASS" if r.passed else "FAIL" for r in results}}
        return report, EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION
    R = load_algebra(cfg.ring)
    objs = [load_object(R, p) for p in cfg.objects] or \
        [ChainComplex.from_module(GradedModule.residue_field(R))]
    X = objs[0]
    N, D, W = cfg.cutoff, cfg.degree_cap, cfg.window
    report = {"ring": R.to_json()["variables"], "relations": R.to_json()["relations"],
              "characteristic": R.p}
    status = EXIT_OK
    cmd = cfg.command
    if cmd == "ring-info":
        report.update(artinian=R.is_artinian, top_degree=R.top_degree,
                      complete_intersection=is_complete_intersection(R),
                      hilbert={str(d): R.hilbert(d) for d in range(0, (R.top_degree or 5) + 1)},
                      depth=_fmt(ring_depth(R, D)))
    elif cmd == "homology":
        degs = [cfg.degree] if cfg.degree is not None else X.indices
        rec = {}
        for i in degs:
            H = homology(X, i, D)
            rec[str(i)] = {str(e): d for e, d in H.hilbert_table(D).items()}
        report["homology"] = rec
        report["certified"] = R.is_artinian
    elif cmd in ("resolve", "betti"):
        res = minimal_free_resolution(X, N, D)
        report["betti"] = {str(n): b for n, b in res.betti.items()}
        report["complete"] = res.complete
        report["minimal"] = res.minimal
        report["certified"] = res.exact
        if cmd == "resolve":
            report["graded_betti"] = {str(n): {str(d): c for d, c in row.items()}
                                      for n, row in res.graded_betti.items()}
            if cfg.format == "table":
                report["table"] = res.betti_table()
        if not res.minimal:
            status = EXIT_VIOLATION
    elif cmd == "poincare":
        P = poincare_series(X, N, D)
        report["series"] = str(P)
        report["coefficients"] = {str(n): c for n, c in P.as_dict().items()}
        if len(P.coefficients) >= 8 or P.complete:
            report["complexity"] = str(complexity_estimate(P))
        else:
            report["complexity"] = "window too small"
    elif cmd == "depth":
        report["depth"] = _fmt(depth(X, D))
    elif cmd == "pd":
        v = pd_verdict(X, N, D)
        report["pd"] = str(v)
    elif cmd == "gdim":
        report["gdim"] = str(gdim(X, W, N, D))
    elif cmd == "pcidim":
        report["pcidim"] = str(pci_dim(X, W, N, D))
    elif cmd in ("cidim-bound", "hierarchy"):
        extra = load_registry(cfg.deformations) if cfg.deformations else []
        registry = default_registry(R, extra)
        if cmd == "cidim-bound":
            v = ci_dim_best(X, registry, N, D)
            report["cidim_bound"] = str(v)
            report["witness"] = str(v.certificate.get("deformation"))
        else:
            h = hierarchy_check(X, registry, W, N, D)
            report["chain"] = h.chain()
            report["violations"] = h.violations
            if not h.ok:
                status = EXIT_VIOLATION
    return report, status


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report, status = _run(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DeformationError, ComplexError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if cfg.format == "json":
        report.pop("table", None)
        print(json.dumps(report, sort_keys=True, indent=2), file=out)
    else:
        print(_table(report), file=out)
    return status


if __name__ == "__main__":
    sys.exit(main())
