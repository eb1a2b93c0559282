"""Cycles of negative self-intersections and their SL(2,Z) invariants.

A cycle ``d = (d_1, ..., d_n)`` is read cyclically; two cycles are the same
when they agree up to rotation and reversal.  Entries are taken in the
normalised convention (for ``n == 1`` the single entry is ``2 - D^2``).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterable, Sequence

from .exactgeom import Mat2, mat_product

R = Mat2(1, 1, 0, 1)
L = Mat2(1, 0, 1, 1)


class NotNegativeDefinite(ValueError):
    pass


class NotHyperbolic(ValueError):
    pass


class Cycle(tuple):
    """Immutable cyclic sequence of integers."""

    def __new__(cls, entries: Iterable[int]):
        entries = tuple(int(x) for x in entries)
        if not entries:
            raise ValueError("a cycle needs at least one entry")
        return super().__new__(cls, entries)

    @classmethod
    def parse(cls, text: str) -> "Cycle":
        """Parse the comma separated form, e.g. ``"3,2,2,2"``."""
        try:
            return cls(int(tok) for tok in text.replace(" ", "").split(",") if tok)
        except ValueError as exc:
            raise ValueError(f"cannot parse cycle {text!r}") from exc

    def __str__(self):
        return ",".join(str(x) for x in self)

    def __repr__(self):
        return f"Cycle({str(self)})"


def charge(c: Sequence[int]) -> int:
    return 12 + sum(d - 3 for d in c)


def is_negative_definite(c: Sequence[int]) -> bool:
    return all(d >= 2 for d in c) and any(d >= 3 for d in c)


def _rotations(c):
    c = tuple(c)
    return [c[i:] + c[:i] for i in range(len(c))]


def canonical_cycle(c: Sequence[int]) -> tuple:
    """Lexicographically least rotation of ``c`` or of its reversal."""
    c = tuple(c)
    return min(_rotations(c) + _rotations(c[::-1]))


def cycles_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    return len(a) == len(b) and canonical_cycle(a) == canonical_cycle(b)


def dual_cycle(c: Sequence[int]) -> Cycle:
    """Dual cusp cycle by the block formula ``(a, 2^b) -> (b + 3, 2^(a - 3))``.

    With ``c`` rotated to ``(a_1, 2^b_1, ..., a_k, 2^b_k)`` the output is
    ``(b_k + 3, 2^(a_1 - 3), b_1 + 3, 2^(a_2 - 3), ...)``: each run of 2s is
    paired with the long entry that follows it.  Pairing it with the entry
    before instead gives the same charge and is still an involution, but the
    monodromy traces of the two cycles then disagree whenever ``c`` contains
    2s, so it is not the dual cusp.
    """
    if not is_negative_definite(c):
        raise NotNegativeDefinite(f"{tuple(c)} is not negative definite")
    c = tuple(c)
    start = next(i for i, d in enumerate(c) if d >= 3)
    c = c[start:] + c[:start]
    blocks = []
    for d in c:
        if d >= 3:
            blocks.append([d, 0])
        else:
            blocks[-1][1] += 1
    k = len(blocks)
    out = []
    # start with the block that precedes a_1 so the 2s after the first entry count a_1 - 3
    for i in range(-1, k - 1):
        out.append(blocks[i][1] + 3)
        out.extend([2] * (blocks[i + 1][0] - 3))
    return Cycle(out)


def cycle_factor(d: int) -> Mat2:
    return Mat2(0, 1, -1, d)


def dual_factor(d: int) -> Mat2:
    return Mat2(0, -1, 1, d)


def monodromy(c: Sequence[int]) -> Mat2:
    """Product of ``[[0, 1], [-1, d_i]]`` in index order."""
    return mat_product(cycle_factor(d) for d in c)


def dual_monodromy(c: Sequence[int]) -> Mat2:
    """Product of ``[[0, -1], [1, d_i]]`` in index order."""
    return mat_product(dual_factor(d) for d in c)


# --- SL(2,Z) conjugacy words ------------------------------------------------


@dataclass(frozen=True)
class _QuadIrr:
    """``(p + q*sqrt(D)) / r`` with ``D`` not a square and ``r != 0``."""

    p: int
    q: int
    r: int
    D: int

    def floor(self) -> int:
        p, q, r = self.p, self.q, self.r
        if r < 0:
            p, q, r = -p, -q, -r
        if q == 0:
            return p // r
        s = isqrt(q * q * self.D)
        fl = s if q > 0 else -s - 1
        return (p + fl) // r

    def sign(self) -> int:
        p, q = self.p, self.q
        if q == 0:
            s = (p > 0) - (p < 0)
        else:
            sq = 1 if q > 0 else -1
            if p == 0 or (p > 0) == (q > 0):
                s = sq
            else:
                # opposite signs: compare p^2 with q^2 D
                s = sq if q * q * self.D > p * p else -sq
        return s if self.r > 0 else -s

    def sub_int(self, m: int) -> "_QuadIrr":
        return _QuadIrr(self.p - m * self.r, self.q, self.r, self.D)

    def less(self, other: "_QuadIrr") -> bool:
        # self < other  <=>  sign(other - self) > 0
        diff = _QuadIrr(other.p * self.r - self.p * other.r,
                        other.q * self.r - self.q * other.r,
                        self.r * other.r, self.D)
        return diff.sign() > 0

    def mobius(self, g: Mat2) -> "_QuadIrr":
        a, b, c, d = g
        p1, q1 = a * self.p + b * self.r, a * self.q
        p2, q2 = c * self.p + d * self.r, c * self.q
        num_p = p1 * p2 - q1 * q2 * self.D
        num_q = q1 * p2 - p1 * q2
        den = p2 * p2 - q2 * q2 * self.D
        return _QuadIrr(num_p, num_q, den, self.D)


def _is_positive(m: Mat2) -> bool:
    return min(m) >= 0


def positive_word(m: Mat2) -> str:
    """Factor a matrix with nonnegative entries into letters R and L."""
    if m.det != 1 or not _is_positive(m):
        raise ValueError(f"{m.rows()} is not a nonnegative SL(2,Z) matrix")
    letters = []
    a, b, c, d = m
    while (a, b, c, d) != (1, 0, 0, 1):
        if b >= a and d >= c:
            letters.append("R")
            b, d = b - a, d - c
        elif a >= b and c >= d:
            letters.append("L")
            a, c = a - b, c - d
        else:  # pragma: no cover - impossible for det 1
            raise ValueError("matrix does not factor into R and L")
    return "".join(reversed(letters))


def positive_conjugator(m: Mat2) -> Mat2:
    """Some ``g`` in SL(2,Z) with ``g m g^-1`` having nonnegative entries.

    The attracting and repelling fixed points of ``m`` acting on the real
    projective line are pushed by continued-fraction steps until they sit on
    opposite sides of 0 with the attracting one positive.
    """
    if m.det != 1:
        raise ValueError("matrix is not in SL(2,Z)")
    t = m.trace
    if t <= 2:
        raise NotHyperbolic(f"trace {t} <= 2")
    a, b, c, d = m
    D = t * t - 4
    if c == 0:  # pragma: no cover - c == 0 forces trace +-2
        raise NotHyperbolic("upper triangular SL(2,Z) matrix is not hyperbolic")
    attracting = _QuadIrr(a - d, 1, 2 * c, D)
    repelling = _QuadIrr(a - d, -1, 2 * c, D)
    g = Mat2.identity()
    for _ in range(100000):
        xp, xm = attracting.mobius(g), repelling.mobius(g)
        lo, hi = (xm, xp) if xm.less(xp) else (xp, xm)
        if lo.sign() < 0 < hi.sign():
            m0 = 0
        else:
            m0 = lo.floor() + 1
            if not lo.sub_int(m0).less(hi.sub_int(m0)) or hi.sub_int(m0).sign() <= 0:
                m0 = None
        if m0 is not None:
            if lo is xm:
                return Mat2(1, -m0, 0, 1) @ g
            return Mat2(0, -1, 1, -m0) @ g
        f = lo.floor()
        g = Mat2(0, -1, 1, 0) @ Mat2(1, -f, 0, 1) @ g
    raise RuntimeError("fixed point reduction did not terminate")  # pragma: no cover


def sl2z_word(m: Mat2) -> str:
    """R/L word of a positive conjugate of a hyperbolic ``m`` (trace > 2).

    Two such matrices are conjugate in SL(2,Z) exactly when their words agree
    up to rotation; compare with :func:`same_cyclic_word`.
    """
    g = positive_conjugator(m)
    conj = g @ m @ g.inverse()
    if not _is_positive(conj):  # pragma: no cover - guarded by the reduction
        raise RuntimeError(f"reduction produced {conj.rows()}")
    return positive_word(conj)


def canonical_word(w: str) -> str:
    return min(w[i:] + w[:i] for i in range(len(w))) if w else w


def same_cyclic_word(u: str, v: str) -> bool:
    return len(u) == len(v) and canonical_word(u) == canonical_word(v)


def word_matrix(w: str) -> Mat2:
    return mat_product(R if ch == "R" else L for ch in w)


# --- cycle surgeries ----------------------------------------------------------

SURGERY_KINDS = ("internal_blowup", "corner_blowup", "node_smoothing")


@dataclass(frozen=True)
class SurgeryOnCycle:
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in SURGERY_KINDS:
            raise ValueError(f"unknown surgery kind {self.kind!r}")


def apply_surgery(c: Sequence[int], s: SurgeryOnCycle) -> Cycle:
    """Effect of a blow-up or node smoothing on the cycle.

    Index ``i`` names the component for an internal blow-up, and the node
    ``D_i ∩ D_{i+1}`` otherwise.  A merge across the wrap-around node puts
    the merged entry first.
    """
    c = list(c)
    n = len(c)
    i = s.index
    if not 0 <= i < n:
        raise IndexError(f"surgery index {i} out of range for cycle of length {n}")
    if s.kind == "internal_blowup":
        c[i] += 1
        return Cycle(c)
    j = (i + 1) % n
    if s.kind == "corner_blowup":
        if n == 1:
            return Cycle([c[0] + 2, 1])
        c[i] += 1
        c[j] += 1
        c.insert(i + 1, 1)
        return Cycle(c)
    if n == 1:
        raise ValueError("smoothing the node of a one-component cycle leaves no cycle")
    merged = c[i] + c[j] - 2
    if j == 0:
        return Cycle([merged] + c[1:n - 1])
    return Cycle(c[:i] + [merged] + c[j + 1:])
