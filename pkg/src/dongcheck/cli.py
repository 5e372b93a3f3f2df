"""Command line: run the scenario catalog, reduce elements, test locality."""

from __future__ import annotations

import argparse
import json
import sys

import yaml

from .algebra import FreeAlgebra
from .distributions import Distribution, WindowError, formal_derivative, locality_scan
from .models import (
    NOVIKOV_MODELS,
    WEYL,
    LaurentLie,
    ModelError,
    load_model,
    weyl_distribution,
)
from .presentations import (
    QuotientAlgebra,
    generator_distribution,
    load_presentation,
    oracle_membership,
    quotient_normal_form,
)
from .scenarios import CATALOG, LOCALITY_SEARCH, Params, run_all
from .syntax import ParseError, parse_lincomb
from .varieties import get_variety


class SpecError(ValueError):
    pass


class AlgebraRegistry:
    """Shares one algebra handle per name so distributions can be paired."""

    def __init__(self):
        self._handles: dict = {}

    def get(self, key: str):
        if key not in self._handles:
            self._handles[key] = self._build(key)
        return self._handles[key]

    def _build(self, key: str):
        if key == "weyl":
            return WEYL
        if key.startswith("free:"):
            return FreeAlgebra(get_variety(key[5:]))
        if key.startswith("laurent:"):
            return LaurentLie(self._model(key[8:]))
        return QuotientAlgebra(load_presentation(key))

    @staticmethod
    def _model(name: str):
        if name in NOVIKOV_MODELS:
            return NOVIKOV_MODELS[name]()
        return load_model(name)


def parse_distribution(text: str, registry: AlgebraRegistry, default_window: int) -> Distribution:
    """Build a distribution from a YAML mapping.

    ``{family: weyl:2}``, ``{family: gen:prelie}``, ``{family: laurent:trunc:u}``
    or ``{finite: {0: "a(1)"}, algebra: prelie}``; optional ``window`` and
    ``derivative`` (number of formal derivatives).
    """
    try:
        spec = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SpecError(f"cannot read distribution spec {text!r}: {exc}") from None
    if not isinstance(spec, dict):
        raise SpecError(f"distribution spec must be a mapping, got {text!r}")
    window = int(spec.get("window", default_window))
    if "family" in spec:
        fam = str(spec["family"])
        kind, _, rest = fam.partition(":")
        if kind == "weyl":
            d = weyl_distribution(int(rest or 0), window)
        elif kind == "gen":
            d = generator_distribution(registry.get(rest), window)
        elif kind == "laurent":
            model, _, basis = rest.rpartition(":")
            L = registry.get(f"laurent:{model}")
            d = L.distribution(basis, window)
        else:
            raise SpecError(f"unknown family {fam!r}")
    elif "finite" in spec:
        alg = registry.get(str(spec.get("algebra", "prelie")))
        coeffs = {int(n): parse_lincomb(str(e)) for n, e in (spec["finite"] or {}).items()}
        d = Distribution.from_finite(alg, {n: alg.normal_form(x) for n, x in coeffs.items()},
                                     name=spec.get("name", "f"))
    else:
        raise SpecError("distribution spec needs 'family' or 'finite'")
    for _ in range(int(spec.get("derivative", 0))):
        d = formal_derivative(d)
    return d


def _load_config(path):
    if not path:
        return {}
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise SpecError("config file must hold a mapping")
    return data


def cmd_list(args) -> int:
    width = max(map(len, CATALOG))
    for name, (_, desc) in CATALOG.items():
        print(f"{name:<{width}}  {desc}")
    return 0


def cmd_run(args, parser) -> int:
    cfg = _load_config(args.config)
    window = args.window if args.window is not None else int(cfg.get("window", 8))
    nmax = args.nmax if args.nmax is not None else int(cfg.get("nmax", 6))
    model = args.model or cfg.get("model")
    if args.scenario == "all":
        names = cfg.get("scenarios") or list(CATALOG)
    else:
        names = [args.scenario]
    unknown = [n for n in names if n not in CATALOG]
    if unknown:
        parser.error(f"unknown scenario {unknown[0]!r} (see 'dongcheck list')")
    if window < 1 or nmax < 0:
        parser.error("window must be positive and nmax non-negative")
    params = Params(window=window, nmax=nmax, model=model)
    reports = run_all(params, names, jobs=args.jobs)
    # keep stdout machine-readable when the JSON report goes there
    text_out = sys.stderr if args.json == "-" else sys.stdout
    for r in reports:
        print(r.to_text(timing=args.timing), file=text_out)
    failed = [r.name for r in reports if not r.passed]
    print(f"\n{len(reports) - len(failed)}/{len(reports)} scenarios passed"
          + (f"; failed: {', '.join(failed)}" if failed else ""), file=text_out)
    if args.json:
        payload = json.dumps([r.to_dict(timing=args.timing) for r in reports], indent=2)
        if args.json == "-":
            print(payload)
        else:
            with open(args.json, "w") as fh:
                fh.write(payload + "\n")
    return 0 if not failed else 1


def cmd_reduce(args) -> int:
    pres = load_presentation(args.presentation)
    x = parse_lincomb(args.expr)
    print(f"presentation: {pres.name} ({pres.label})")
    print(f"normal form: {quotient_normal_form(pres, x)}")
    if args.window is not None:
        v = oracle_membership(pres, x, args.window)
        print(f"oracle (window {args.window}): {v.status}; "
              f"{'agrees' if v.oracle_agrees else 'DISAGREES'} with rewriting")
        return 0 if v.oracle_agrees else 1
    return 0


def cmd_locality(args) -> int:
    reg = AlgebraRegistry()
    base = 3 * args.window + 4 * max(args.nmax, LOCALITY_SEARCH) + 8
    a = parse_distribution(args.dist_a, reg, base)
    b = parse_distribution(args.dist_b, reg, base)
    verdicts = locality_scan(a, b, args.op, args.window, args.nmax)
    for v in verdicts:
        print(v.describe(a.algebra))
    last = verdicts[-1]
    if last.holds:
        print(f"locality value on window {args.window}: {last.N}")
    else:
        print(f"not local on window {args.window} for N <= {args.nmax}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dongcheck",
        description="Exact locality checks for formal distributions over nonassociative algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list the scenario catalog")

    run = sub.add_parser("run", help="run one scenario or 'all'")
    run.add_argument("scenario")
    run.add_argument("--window", type=int, default=None, help="locality window (default 8)")
    run.add_argument("--nmax", type=int, default=None, help="largest n and N tested (default 6)")
    run.add_argument("--model", default=None, help="extra Novikov model file (JSON or YAML)")
    run.add_argument("--json", default=None, metavar="OUT", help="write the JSON report ('-' for stdout; text then goes to stderr)")
    run.add_argument("--config", default=None, help="YAML/JSON config: window, nmax, model, scenarios")
    run.add_argument("--jobs", type=int, default=1, help="worker processes")
    run.add_argument("--timing", action="store_true", help="include wall time in reports")

    red = sub.add_parser("reduce", help="normal form in a presented quotient")
    red.add_argument("presentation", help="'preassoc', 'prelie' or a presentation file")
    red.add_argument("expr", help="element, e.g. 'a(2) * a(3)'")
    red.add_argument("--window", type=int, default=None, help="also ask the elimination oracle")

    loc = sub.add_parser("locality", help="locality scan of a pair of distributions")
    loc.add_argument("dist_a")
    loc.add_argument("dist_b")
    loc.add_argument("--op", required=True, choices=["star", "succ", "circ", "bracket"])
    loc.add_argument("--window", type=int, default=8)
    loc.add_argument("--nmax", type=int, default=LOCALITY_SEARCH)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            return cmd_list(args)
        if args.command == "run":
            return cmd_run(args, parser)
        if args.command == "reduce":
            return cmd_reduce(args)
        return cmd_locality(args)
    except (ParseError, SpecError, ModelError, WindowError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
