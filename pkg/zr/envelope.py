"""Convex quadratics in ``w`` and the exact upper envelope of a family of them.

The envelope is built by divide and conquer: two piecewise quadratics with
``n1`` and ``n2`` pieces are merged in ``O(n1 + n2)`` by scanning their
breakpoints together and splitting an overlap where the two active pieces
cross. Since two quadratics cross at most twice, the envelope of ``m``
quadratics has at most ``2m − 1`` pieces.
"""

import math
from bisect import bisect_right
from collections.abc import Sequence
from dataclasses import dataclass

TANGENCY_EPS = 1e-12


def quadratic_roots(a: float, b: float, c: float) -> tuple[float, float] | None:
    """Real roots of ``a·w² + b·w + c`` in ascending order, or ``None``.

    Uses the cancellation-free form ``q = −(b + sign(b)·√disc) / 2``.
    A discriminant within ``TANGENCY_EPS`` (relative) of zero is a double root.
    """
    if a == 0:
        if b == 0:
            return None
        root = -c / b
        return root, root
    disc = b * b - 4 * a * c
    if disc < 0:
        if -disc <= TANGENCY_EPS * (b * b + abs(4 * a * c)):
            root = -b / (2 * a)
            return root, root
        return None
    q = -(b + math.copysign(math.sqrt(disc), b)) / 2
    if q == 0:
        return 0.0, 0.0
    r1, r2 = q / a, c / q
    return (r1, r2) if r1 <= r2 else (r2, r1)


@dataclass(slots=True, frozen=True)
class QuadraticFn:
    """``a2·w² + a1·w + a0`` with ``a2 > 0``."""

    a2: float
    a1: float
    a0: float

    def __call__(self, w: float) -> float:
        return (self.a2 * w + self.a1) * w + self.a0

    @property
    def vertex(self) -> float:
        return -self.a1 / (2 * self.a2)

    @property
    def vertex_value(self) -> float:
        return self.a0 - self.a1 * self.a1 / (4 * self.a2)

    def level_interval(self, y: float) -> tuple[float, float] | None:
        """The interval ``{w : f(w) ≤ y}``, ``None`` when empty."""
        return quadratic_roots(self.a2, self.a1, self.a0 - y)

    def minimize_on(self, lo: float, hi: float) -> tuple[float, float]:
        """Minimizer and minimum over ``[lo, hi]`` (bounds may be infinite)."""
        w = min(max(self.vertex, lo), hi)
        return w, self(w)


def crossings(g: QuadraticFn, h: QuadraticFn) -> tuple[float, ...]:
    """Points where ``g − h`` changes sign; tangencies are not crossings."""
    a, b, c = g.a2 - h.a2, g.a1 - h.a1, g.a0 - h.a0
    if a == 0:
        return () if b == 0 else (-c / b,)
    disc = b * b - 4 * a * c
    if disc <= TANGENCY_EPS * (b * b + abs(4 * a * c)):
        return ()
    roots = quadratic_roots(a, b, c)
    return roots if roots is not None else ()


def _interior_point(lo: float, hi: float) -> float:
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(lo):
        return hi - max(1.0, abs(hi))
    if math.isinf(hi):
        return lo + max(1.0, abs(lo))
    return (lo + hi) / 2


@dataclass(slots=True, frozen=True)
class PiecewiseQuadratic:
    """``pieces[k]`` is active on ``[thresholds[k], thresholds[k+1])``.

    ``thresholds`` starts at ``-inf`` and ends at ``+inf``.
    """

    thresholds: tuple[float, ...]
    pieces: tuple[QuadraticFn, ...]

    @classmethod
    def single(cls, fn: QuadraticFn) -> PiecewiseQuadratic:
        return cls((-math.inf, math.inf), (fn,))

    def __len__(self) -> int:
        return len(self.pieces)

    def __call__(self, w: float) -> float:
        k = bisect_right(self.thresholds, w) - 1
        return self.pieces[min(max(k, 0), len(self.pieces) - 1)](w)

    def minimum(self) -> tuple[float, float]:
        """Global ``(w, value)`` minimum from the clamped vertex of each piece."""
        best_w, best_y = math.nan, math.inf
        for k, piece in enumerate(self.pieces):
            w, y = piece.minimize_on(self.thresholds[k], self.thresholds[k + 1])
            if y < best_y:
                best_w, best_y = w, y
        return best_w, best_y


def merge_envelopes(g: PiecewiseQuadratic, h: PiecewiseQuadratic) -> PiecewiseQuadratic:
    """Pointwise maximum of two piecewise quadratics in ``O(len(g) + len(h))``."""
    t, u = g.thresholds, h.thresholds
    bounds: list[float] = [-math.inf]
    pieces: list[QuadraticFn] = []
    i = j = 0
    while i < len(g.pieces) and j < len(h.pieces):
        lo, hi = max(t[i], u[j]), min(t[i + 1], u[j + 1])
        if lo < hi:
            gi, hj = g.pieces[i], h.pieces[j]
            cuts = sorted({lo, hi, *(x for x in crossings(gi, hj) if lo < x < hi)})
            for left, right in zip(cuts, cuts[1:]):
                x = _interior_point(left, right)
                bounds.append(right)
                # ties keep the first operand
                pieces.append(gi if gi(x) >= hj(x) else hj)

        if t[i + 1] == hi:
            i += 1
        if u[j + 1] == hi:
            j += 1

    out_bounds, out_pieces = [bounds[0]], []
    for piece, right in zip(pieces, bounds[1:]):
        if out_pieces and out_pieces[-1] == piece:
            out_bounds[-1] = right
        else:
            out_pieces.append(piece)
            out_bounds.append(right)
    return PiecewiseQuadratic(tuple(out_bounds), tuple(out_pieces))


def upper_envelope(fns: Sequence[QuadraticFn]) -> PiecewiseQuadratic:
    """Exact pointwise maximum of ``fns`` by recursive halving."""
    if not fns:
        raise ValueError("upper_envelope needs at least one function")
    if len(fns) == 1:
        return PiecewiseQuadratic.single(fns[0])
    half = len(fns) // 2
    return merge_envelopes(upper_envelope(fns[:half]), upper_envelope(fns[half:]))
