"""The charge-3 models: full-length blow-ups collapse the boundary.

No cone is needed; the collapsed point becomes v0 and its star is (6,9),
the dual of the bookkept boundary cycle (3,2,2,2,3,2,2,2,2,2,2).

Run: python demos/03_charge3_collapse.py
"""

import json
from importlib import resources

from cusp.cycles import charge
from cusp.pipeline import bookkept_cycle, construct
from cusp.surgery import fan_from_toric_cycle, solve_lengths

for name in ("charge3_model1", "charge3_model2"):
    recipe = json.loads((resources.files("cusp") / "recipes" / f"{name}.json").read_text())
    toric = tuple(recipe["toric_cycle"])
    lengths = solve_lengths(fan_from_toric_cycle(toric), set(recipe["lengths"]["support"]))
    print(f"{name}: toric cycle {toric}")
    print("  edge lengths:", lengths)
    print("  bookkept boundary cycle:", bookkept_cycle(recipe))
    c = construct(recipe)
    r = c.report
    print(f"  pieces after closing: {len(c.surface.pieces)}, faces: {r.counts['faces']}")
    others = {v: q for v, q in r.to_json()["charges"].items() if int(v) != c.complex.v0}
    print(f"  star at v0: {r.v0_cycle} (charge {charge(r.v0_cycle)}); other charges {others}")
    print("  Type III checks pass:", r.ok)
