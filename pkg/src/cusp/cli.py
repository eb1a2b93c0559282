"""Command line driver.

Exit codes: 0 success, 2 bad input, 3 geometric failure, 4 verification failure.
Set ``CUSP_LOG`` (e.g. ``INFO`` or ``DEBUG``) for progress messages on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .compactify import NotHyperbolic, discrete_hyperbola
from .cycles import Cycle, NotNegativeDefinite, charge, dual_cycle, monodromy, sl2z_word
from .pipeline import construct
from .render import render_base, render_surface
from .serialize import (
    MalformedInput,
    base_to_json,
    complex_from_json,
    complex_to_json,
    dumps,
    report_to_json,
    surface_to_json,
    vec,
)
from .surgery import EmptyBoundary, RecipeError, SurgeryError
from .tricomplex import TriangulationError, verify_type_iii

EXIT_OK, EXIT_INPUT, EXIT_GEOMETRY, EXIT_VERIFY = 0, 2, 3, 4

log = logging.getLogger("cusp")


class InputError(Exception):
    pass


def builtin_recipes() -> list:
    root = resources.files("cusp") / "recipes"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_config(source: str) -> dict:
    """Read a recipe or a config ``{"recipe": ..., "options": {...}}``.

    ``source`` is a path, or the name of a bundled recipe.
    """
    path = Path(source)
    try:
        if path.is_file():
            text = path.read_text()
            base_dir = path.parent
        elif source in builtin_recipes():
            text = (resources.files("cusp") / "recipes" / f"{source}.json").read_text()
            base_dir = Path(".")
        else:
            raise InputError(f"no such recipe file or bundled recipe: {source}")
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{source}: expected a JSON object")
    if "recipe" in doc:
        recipe = doc["recipe"]
        if isinstance(recipe, str):
            return {"recipe": load_config(str(base_dir / recipe))["recipe"],
                    "options": doc.get("options", {})}
        if not isinstance(recipe, dict):
            raise InputError("'recipe' must be an object or a path")
        return {"recipe": recipe, "options": doc.get("options", {})}
    return {"recipe": doc, "options": {}}


def parse_cycle(text: str) -> Cycle:
    try:
        return Cycle.parse(text)
    except ValueError as exc:
        raise InputError(f"cannot parse cycle {text!r}") from exc


def _fmt_matrix(m) -> str:
    return f"[[{m.a}, {m.b}], [{m.c}, {m.d}]]"


# --- commands --------------------------------------------------------------------


def cmd_dual(args) -> int:
    c = parse_cycle(args.cycle)
    try:
        d = dual_cycle(c)
    except NotNegativeDefinite as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(d)
    print(f"Q={charge(c)} Q'={charge(d)}")
    return EXIT_OK


def cmd_charge(args) -> int:
    print(charge(parse_cycle(args.cycle)))
    return EXIT_OK


def cmd_monodromy(args) -> int:
    c = parse_cycle(args.cycle)
    n = monodromy(c)
    print(f"N = {_fmt_matrix(n)}")
    print(f"trace = {n.trace}")
    try:
        print(f"word = {sl2z_word(n)}")
    except NotHyperbolic:
        print("word = (not hyperbolic)")
    return EXIT_OK


def _points_json(points) -> list:
    out = []
    for p in points:
        rec = {"vertex": p["vertex"], "point": vec(p["point"]), "measured": list(p["measured"]),
               "ok": p["ok"]}
        if p["ok"] is None:
            rec["note"] = p["note"]
        else:
            rec.update(toric_star=list(p["toric_star"]), expected=list(p["expected"]),
                       incident=[list(x) for x in p["incident"]])
        out.append(rec)
    return out


def _write(out: Path, name: str, text: str):
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def cmd_construct(args) -> int:
    cfg = load_config(args.recipe)
    recipe, opts = cfg["recipe"], cfg["options"]
    anchor = args.anchor if args.anchor is not None else opts.get("anchor")
    refinement = opts.get("refinement")
    relaxed = True if args.relaxed_cuts else opts.get("relaxed_cuts")
    periods = args.periods if args.periods is not None else int(opts.get("periods", 1))
    out = Path(args.out or opts.get("out", "out"))
    c = construct(recipe, anchor=anchor, relaxed=relaxed, refinement=refinement)
    cdoc = complex_to_json(c.complex, c.expected_dual)
    rdoc = report_to_json(c.report, cdoc)
    bdoc = base_to_json(c.base)
    bdoc["boundary_cycle"] = list(c.cycle)
    sdoc = surface_to_json(c.surface)
    try:
        h = discrete_hyperbola(c.surface.base, periods)
        sdoc["hyperbola"] = {"periods": periods, "vertices": [vec(v) for v in h.vertices]}
    except EmptyBoundary:
        sdoc["hyperbola"] = None
    _write(out, "base.json", dumps(bdoc))
    _write(out, "surface.json", dumps(sdoc))
    _write(out, "complex.json", dumps(cdoc))
    _write(out, "report.json", dumps(rdoc))
    _write(out, "surgery_points.json", dumps(_points_json(c.surgery_points)))
    if args.svg:
        _write(out, "base.svg", render_base(c.base))
        _write(out, "surface.svg", render_surface(c.surface, c.complex))
    r = c.report
    print(f"boundary cycle {c.cycle}; expected dual {c.expected_dual}")
    print(f"v0 star {r.v0_cycle} ({r.counts['edges_at_v0']} edges); charge total {r.charge_total}")
    print(f"faces {r.counts['faces']}, vertices {r.counts['vertices']}; "
          f"Type III checks {'pass' if r.ok else 'FAIL'}")
    bad = [p for p in c.surgery_points if p["ok"] is False]
    if bad:
        print(f"{len(bad)} singular vertices differ from their predicted stars", file=sys.stderr)
    print(f"artifacts written to {out}")
    return EXIT_OK if r.ok and not bad else EXIT_VERIFY


def cmd_verify(args) -> int:
    try:
        doc = json.loads(Path(args.complex).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read complex: {exc}") from exc
    t, exp = complex_from_json(doc)
    if args.expected is not None:
        exp = parse_cycle(args.expected)
    report = verify_type_iii(t, exp)
    print(dumps(report_to_json(report, doc)), end="")
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_render(args) -> int:
    cfg = load_config(args.recipe)
    relaxed = True if args.relaxed_cuts else cfg["options"].get("relaxed_cuts")
    out = Path(args.out or "out")
    c = construct(cfg["recipe"], anchor=args.anchor, relaxed=relaxed)
    _write(out, "base.svg", render_base(c.base, grid=args.grid))
    _write(out, "surface.svg", render_surface(c.surface, c.complex, grid=args.grid))
    print(f"wrote {out / 'base.svg'} and {out / 'surface.svg'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cusp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (("dual", cmd_dual, "dual cycle and both charges"),
                               ("charge", cmd_charge, "charge of a cycle"),
                               ("monodromy", cmd_monodromy, "monodromy matrix, trace, R/L word")):
        q = sub.add_parser(name, help=helptext)
        q.add_argument("cycle", help="comma separated, e.g. 6,9")
        q.set_defaults(func=fn)

    q = sub.add_parser("construct", help="run the construction from a recipe")
    q.add_argument("recipe_pos", nargs="?", metavar="RECIPE")
    q.add_argument("--recipe", help="recipe or config JSON, or a bundled recipe name")
    q.add_argument("--out", help="output directory (default: out)")
    q.add_argument("--anchor", type=int, help="cone anchor index")
    q.add_argument("--periods", type=int, help="periods of the discrete hyperbola to record")
    q.add_argument("--svg", action="store_true", help="also write SVG pictures")
    q.add_argument("--relaxed-cuts", action="store_true",
                   help="allow cuts to meet (may report Unsupported)")
    q.set_defaults(func=cmd_construct)

    q = sub.add_parser("verify", help="audit a complex JSON")
    q.add_argument("complex")
    q.add_argument("--expected", help="expected dual cycle (overrides the stored one)")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("render", help="write SVG pictures for a recipe")
    q.add_argument("recipe_pos", nargs="?", metavar="RECIPE")
    q.add_argument("--recipe")
    q.add_argument("--out")
    q.add_argument("--anchor", type=int)
    q.add_argument("--grid", action="store_true", help="draw lattice points")
    q.add_argument("--relaxed-cuts", action="store_true")
    q.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    level = os.environ.get("CUSP_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if hasattr(args, "recipe_pos"):
        args.recipe = args.recipe or args.recipe_pos
        if not args.recipe:
            print("error: a recipe is required", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, MalformedInput, RecipeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SurgeryError, TriangulationError, NotHyperbolic, NotNegativeDefinite) as exc:
        print(f"geometric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY


if __name__ == "__main__":
    sys.exit(main())
