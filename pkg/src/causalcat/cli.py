"""Command line: run law suites, check teleportation scenarios, compute supports.

Exit codes: 0 all checks pass, 1 a law or verdict fails, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import causal, laws
from .hilbfield import TAU, BaseSpace, field_from_json, morphism_from_json
from .lattice import DomainError, check_closure, semilattice_from_json
from .protocol import scenario_from_json, verify_teleportation
from .subunits import has_support_in, subunit_from_json, support

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    seed: int = 0
    samples: int | None = None
    tol: float = TAU
    format: str = "text"


class InputError(Exception):
    pass


def _load_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_laws(cfg: RunConfig, out=sys.stdout) -> int:
    names = list(cfg.inputs) or ["all"]
    unknown = [n for n in names if n != "all" and n not in laws.SUITES]
    if unknown:
        raise InputError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(laws.SUITES)}, all")
    selected = laws.SUITES if "all" in names else [s for s in laws.SUITES if s in names]
    reports = [laws.run_suite(s, cfg.seed, cfg.samples, cfg.tol) for s in selected]
    ok = all(r.passed for r in reports)
    if cfg.format == "json":
        out.write(_dump({"seed": cfg.seed, "passed": ok, "suites": [r.to_dict() for r in reports]}) + "\n")
    else:
        for r in reports:
            out.write(r.format_text() + "\n")
        out.write(f"{'PASS' if ok else 'FAIL'}: {sum(r.passed for r in reports)}/{len(reports)} suites\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_teleport(cfg: RunConfig, out=sys.stdout) -> int:
    (path,) = cfg.inputs
    doc = _load_json(path)
    site_doc = doc.get("site")
    if isinstance(site_doc, str):
        site_doc = _load_json(Path(path).parent / site_doc)
    try:
        site = causal.site_from_json(site_doc)
        v = causal.validate_site(site)
        if not v.passed:
            bad = next(k for k, ok in v.laws.items() if not ok)
            raise InputError(f"invalid site: {bad} violated, witness {v.witness(bad)!r}")
        rep = verify_teleportation(scenario_from_json(doc, site), cfg.tol)
    except (DomainError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"invalid scenario: {e}") from None
    out.write((_dump(rep.to_dict()) if cfg.format == "json" else rep.format_text()) + "\n")
    return EXIT_OK if rep.verdict == "PASS" else EXIT_FAIL


def load_category(doc: dict):
    base = BaseSpace(tuple(str(p) for p in doc["base"]))
    objects = {name: field_from_json(base, dims) for name, dims in doc.get("objects", {}).items()}
    morphisms = {}
    for name, m in doc.get("morphisms", {}).items():
        morphisms[name] = morphism_from_json(objects[m["dom"]], objects[m["cod"]], m.get("mats", {}))
    subunits = {name: subunit_from_json(base, s) for name, s in doc.get("subunits", {}).items()}
    return base, objects, morphisms, subunits


def cmd_support(cfg: RunConfig, out=sys.stdout) -> int:
    path, name = cfg.inputs
    try:
        base, _, morphisms, subunits = load_category(_load_json(path))
    except (DomainError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"invalid category file: {e}") from None
    if name not in morphisms:
        raise InputError(f"unknown morphism {name!r}; file defines {', '.join(sorted(morphisms)) or 'none'}")
    f = morphisms[name]
    supp = support(f, cfg.tol).sorted_carrier()
    verdicts = {s: has_support_in(f, u, "both", cfg.tol) for s, u in sorted(subunits.items())}
    if cfg.format == "json":
        out.write(_dump({"morphism": name, "support": supp, "supported_in": verdicts}) + "\n")
    else:
        out.write(f"morphism: {name}\n")
        out.write(f"support carrier: {{{', '.join(supp)}}}\n")
        for s, ok in verdicts.items():
            carrier = ", ".join(subunits[s].sorted_carrier())
            out.write(f"supported in {s} {{{carrier}}}: {'yes' if ok else 'no'}\n")
    return EXIT_OK


def cmd_closure(cfg: RunConfig, out=sys.stdout) -> int:
    (path,) = cfg.inputs
    try:
        L, C = semilattice_from_json(_load_json(path))
    except (DomainError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"invalid semilattice file: {e}") from None
    if C is None:
        raise InputError("file has no \"closure\" map")
    rep = check_closure(C)
    out.write((_dump(rep.to_dict()) if cfg.format == "json" else rep.format_text()) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_site(cfg: RunConfig, strict: bool = False, out=sys.stdout) -> int:
    (path,) = cfg.inputs
    try:
        site = causal.site_from_json(_load_json(path))
    except (DomainError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"invalid site file: {e}") from None
    rep = causal.validate_site(site, strict)
    out.write((_dump(rep.to_dict()) if cfg.format == "json" else rep.format_text()) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None, help="cases per sampled suite")
    common.add_argument("--tol", type=float, default=TAU)
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="causalcat", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("laws", parents=[common], help="run law suites")
    s.add_argument("suites", nargs="*", metavar="SUITE", help=f"one of {', '.join(laws.SUITES)}, all")
    s = sub.add_parser("teleport", parents=[common], help="verify a teleportation scenario file")
    s.add_argument("scenario")
    s = sub.add_parser("support", parents=[common], help="support of a morphism in a category file")
    s.add_argument("category")
    s.add_argument("morphism")
    s = sub.add_parser("closure", parents=[common], help="check a closure operator file")
    s.add_argument("file")
    s = sub.add_parser("site", parents=[common], help="validate a causal site file")
    s.add_argument("file")
    s.add_argument("--strict", action="store_true", help="also check push-up and push-down")
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    inputs = {
        "laws": lambda: args.suites,
        "teleport": lambda: [args.scenario],
        "support": lambda: [args.category, args.morphism],
        "closure": lambda: [args.file],
        "site": lambda: [args.file],
    }[args.command]()
    cfg = RunConfig(args.command, inputs, args.seed, args.samples, args.tol, args.format)
    try:
        if args.command == "site":
            return cmd_site(cfg, args.strict, out)
        return {"laws": cmd_laws, "teleport": cmd_teleport, "support": cmd_support,
                "closure": cmd_closure}[args.command](cfg, out)
    except InputError as e:
        print(f"causalcat {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
