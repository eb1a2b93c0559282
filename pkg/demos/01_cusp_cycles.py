"""Cusp cycles, their duals and the charge identity.

Run: python demos/01_cusp_cycles.py
"""

from cusp.cycles import (
    charge,
    cycles_equal,
    dual_cycle,
    dual_monodromy,
    is_negative_definite,
    monodromy,
    same_cyclic_word,
    sl2z_word,
)


def show(c):
    d = dual_cycle(c)
    n = monodromy(c)
    print(f"cycle {c}: Q={charge(c)}, trace N={n.trace}")
    print(f"  dual {d}: Q'={charge(d)}, Q+Q'={charge(c) + charge(d)}")
    # the dual product is conjugate to N itself, read as a cyclic R/L word
    same = same_cyclic_word(sl2z_word(n), sl2z_word(dual_monodromy(d)))
    print(f"  word of N: {sl2z_word(n)}; matches the dual product: {same}")
    print(f"  dual of dual is the cycle again: {cycles_equal(dual_cycle(d), c)}")


if __name__ == "__main__":
    for c in [(6, 9), (4, 6, 5), (3,), (2, 5, 6, 6)]:
        show(c)
    print("(2, 2, 2) negative definite:", is_negative_definite((2, 2, 2)))
