"""Planar matchings on the boundary of a rectangle.

Boundary points are numbered counterclockwise: the ``source`` points along
the bottom edge left to right get 0..s-1, the ``target`` points along the top
edge right to left get s..s+t-1.  With this numbering a matching is planar
exactly when no two pairs interleave, and the sorted pair tuple is a
canonical key.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache


class DiagramError(Exception):
    pass


@dataclass(frozen=True, order=True)
class TLDiagram:
    source: int
    target: int
    pairs: tuple
    partner: tuple = field(default=(), compare=False, repr=False, hash=False)

    def __post_init__(self):
        total = self.source + self.target
        if self.source < 0 or self.target < 0 or total % 2:
            raise DiagramError(f"no perfect matching on {self.source}+{self.target} points")
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        partner = [-1] * total
        for a, b in pairs:
            if not (0 <= a < b < total) or partner[a] != -1 or partner[b] != -1:
                raise DiagramError(f"invalid pairing {self.pairs!r}")
            partner[a], partner[b] = b, a
        if -1 in partner:
            raise DiagramError(f"pairing {self.pairs!r} is not perfect")
        stack = []
        for i in range(total):
            j = partner[i]
            if j > i:
                stack.append(i)
            elif not stack or stack.pop() != j:
                raise DiagramError(f"pairing {self.pairs!r} is not planar")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "partner", tuple(partner))

    # boundary-point helpers
    def src(self, i: int) -> int:
        return i

    def tgt(self, k: int) -> int:
        return self.source + self.target - 1 - k

    def side(self, p: int):
        """('s', i) or ('t', k) for a boundary point index."""
        if p < self.source:
            return ("s", p)
        return ("t", self.source + self.target - 1 - p)

    @property
    def through_strands(self) -> int:
        return sum(1 for a, b in self.pairs if a < self.source <= b)

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            self.partner[i] == self.tgt(i) for i in range(self.source))


def from_sides(source: int, target: int, arcs) -> TLDiagram:
    """Build a diagram from arcs given as pairs of ('s', i) / ('t', k) endpoints."""
    def idx(e):
        kind, j = e
        return j if kind == "s" else source + target - 1 - j
    return TLDiagram(source, target, tuple((idx(a), idx(b)) for a, b in arcs))


def identity(n: int) -> TLDiagram:
    return from_sides(n, n, [(("s", i), ("t", i)) for i in range(n)])


def cup() -> TLDiagram:
    return TLDiagram(0, 2, ((0, 1),))


def cap() -> TLDiagram:
    return TLDiagram(2, 0, ((0, 1),))


def compose(f: TLDiagram, g: TLDiagram):
    """Stack ``g`` below ``f`` (g first).  Returns (diagram, closed loop count)."""
    if f.source != g.target:
        raise DiagramError(f"cannot compose: {g.target} strands into {f.source}")
    a, b, c = g.source, g.target, f.target
    gp, fp = g.partner, f.partner
    seen = [False] * b
    out_total = a + c

    def res_tgt(l):
        return out_total - 1 - l

    def run(state, p):
        # follow arcs until a result boundary point is reached
        while True:
            if state == "g":
                q = gp[p]
                if q < a:
                    return q
                k = a + b - 1 - q
                seen[k] = True
                state, p = "f", k
            else:
                q = fp[p]
                if q >= b:
                    return res_tgt(b + c - 1 - q)
                seen[q] = True
                state, p = "g", a + b - 1 - q

    pairs = []
    done = set()
    for i in range(a):
        if i in done:
            continue
        j = run("g", i)
        done.update((i, j))
        pairs.append((i, j))
    for l in range(c):
        start = res_tgt(l)
        if start in done:
            continue
        j = run("f", b + c - 1 - l)
        done.update((start, j))
        pairs.append((start, j))
    loops = 0
    for k in range(b):
        if seen[k]:
            continue
        # closed component: alternate f-arcs and g-arcs between middle points
        loops += 1
        m = k
        while not seen[m]:
            seen[m] = True
            m2 = fp[m]
            seen[m2] = True
            m = a + b - 1 - gp[a + b - 1 - m2]
    return TLDiagram(a, c, tuple(pairs)), loops


def tensor(f: TLDiagram, g: TLDiagram) -> TLDiagram:
    s, t = f.source + g.source, f.target + g.target

    def remap_f(p):
        kind, j = f.side(p)
        return ("s", j) if kind == "s" else ("t", j)

    def remap_g(p):
        kind, j = g.side(p)
        return ("s", f.source + j) if kind == "s" else ("t", f.target + j)

    arcs = [(remap_f(p), remap_f(q)) for p, q in f.pairs]
    arcs += [(remap_g(p), remap_g(q)) for p, q in g.pairs]
    return from_sides(s, t, arcs)


def adjoint(f: TLDiagram) -> TLDiagram:
    def flip(p):
        kind, j = f.side(p)
        return ("t", j) if kind == "s" else ("s", j)
    return from_sides(f.target, f.source, [(flip(p), flip(q)) for p, q in f.pairs])


def closure_loops(f: TLDiagram) -> int:
    """Loops obtained by joining source i to target i for every i."""
    if f.source != f.target:
        raise DiagramError("closure needs an endomorphism")
    n = f.source
    seen = [False] * (2 * n)
    loops = 0
    for start in range(2 * n):
        if seen[start]:
            continue
        loops += 1
        p = start
        while not seen[p]:
            seen[p] = True
            q = f.partner[p]
            seen[q] = True
            kind, j = f.side(q)
            p = f.tgt(j) if kind == "s" else f.src(j)
    return loops


@lru_cache(maxsize=None)
def matchings(m: int) -> tuple:
    """All planar perfect matchings of points 0..m-1 on a circle, as sorted pair tuples."""
    if m % 2:
        return ()
    if m == 0:
        return ((),)
    out = []
    for j in range(1, m, 2):
        for inner in matchings(j - 1):
            inner_pairs = tuple((x + 1, y + 1) for x, y in inner)
            for outer in matchings(m - j - 1):
                outer_pairs = tuple((x + j + 1, y + j + 1) for x, y in outer)
                out.append(tuple(sorted(((0, j),) + inner_pairs + outer_pairs)))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def basis(source: int, target: int) -> tuple:
    """Every diagram from ``source`` to ``target`` strands, in canonical order."""
    return tuple(TLDiagram(source, target, p) for p in matchings(source + target))
