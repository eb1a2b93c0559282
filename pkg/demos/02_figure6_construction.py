"""Build the (4,6,5) example step by step and check the star at v0.

Starts from the rectangle with cycle (0,0,0,0), performs 4+2+6+5 internal
blow-ups and one node smoothing, closes the boundary up with a cone at the
monodromy fixed point, triangulates, and flips edges at v0.

Run: python demos/02_figure6_construction.py [OUTDIR]
"""

import json
import sys
from importlib import resources
from pathlib import Path

from cusp.compactify import close_up, collar_monodromy, fixed_point
from cusp.cycles import dual_cycle
from cusp.render import render_base, render_surface
from cusp.surgery import base_from_recipe, boundary_d_values
from cusp.tricomplex import minimize_star, star, triangulate, verify_type_iii

recipe = json.loads((resources.files("cusp") / "recipes" / "figure6.json").read_text())

blowups = dict(recipe, surgeries=recipe["surgeries"][:-1])
print("after the blow-ups:", boundary_d_values(base_from_recipe(blowups)))
base = base_from_recipe(recipe)
cyc = boundary_d_values(base)
print("after the smoothing:", cyc, f"with {len(base.singular_points)} singular points")

m = collar_monodromy(base)
print("collar monodromy trace:", m.linear.trace, " fixed point v0:", tuple(fixed_point(m)))

surface = close_up(base)
t = triangulate(surface)
print(f"triangulated: {len(t.faces)} faces, star at v0 before flips {star(t, t.v0).cycle}")
t = minimize_star(t)
report = verify_type_iii(t, dual_cycle(cyc))
print("star at v0 after flips:", report.v0_cycle, " expected dual:", report.expected_dual)
print("charge total:", report.charge_total, " Euler characteristic:", report.euler)
print("all Type III checks pass:", report.ok)

if len(sys.argv) > 1:
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    (out / "base.svg").write_text(render_base(base))
    (out / "surface.svg").write_text(render_surface(surface, t))
    print("pictures written to", out)
