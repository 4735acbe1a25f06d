"""Abstract graded roots and their Z[U]-modules.

A graded root is an infinite tree R with an integer grading chi on the
vertices such that chi changes by exactly 1 along every edge, every vertex
with two neighbours lies above one of them, chi is bounded below with finite
levels, and all sufficiently high levels contain a single vertex.  We store
only the finite part up to the first level from which the tree is a single
upward stem; `top` marks the base of that implicit stem.

A finite integer sequence tau produces a graded root: vertex classes at
level k are the maximal index intervals on which tau <= k (the merge tree of
tau), so local minima of tau become the leaves.  The associated graded
Z[U]-module decomposes as one infinite tower T+ based at twice the minimal
level plus one finite tower per remaining leaf, whose length is the distance
to the lowest branching vertex joining it to an earlier leaf.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import InternalInvariantError


@dataclass(frozen=True)
class TauFunction:
    """An integer sequence tau(0..T) defining a graded root."""

    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("tau needs at least one value")

    def __len__(self):
        return len(self.values)

    def min(self) -> int:
        return min(self.values)

    def max(self) -> int:
        return max(self.values)


class GradedRoot:
    """Finite part of a graded root: a tree with integer levels.

    Vertices are 0..n-1 with grading chi[v]; parent[v] is the unique
    neighbour one level up (None exactly for `top`).  Above chi[top] the
    root continues with one implicit vertex per level.
    """

    def __init__(self, chi: list[int], parent: list[Optional[int]]):
        self.chi = tuple(chi)
        self.parent = tuple(parent)
        n = len(self.chi)
        if len(self.parent) != n or n == 0:
            raise ValueError("chi and parent must be nonempty and equally long")
        tops = [v for v in range(n) if self.parent[v] is None]
        if len(tops) != 1:
            raise ValueError(f"expected a unique top vertex, found {len(tops)}")
        self.top = tops[0]
        children: list[list[int]] = [[] for _ in range(n)]
        for v in range(n):
            p = self.parent[v]
            if p is not None:
                if self.chi[p] != self.chi[v] + 1:
                    raise ValueError("edge levels must differ by exactly 1")
                children[p].append(v)
        self.children = tuple(tuple(c) for c in children)
        top_level = self.chi[self.top]
        if any(self.chi[v] > top_level for v in range(n)):
            raise ValueError("top vertex must carry the maximal level")
        if sum(1 for v in range(n) if self.chi[v] == top_level) != 1:
            raise ValueError("the top level must contain a single vertex")
        # connectivity: every vertex reaches top through parents (acyclic by levels)

    def __len__(self):
        return len(self.chi)

    @property
    def leaves(self) -> tuple[int, ...]:
        """Local minimum vertices, i.e. vertices with no child."""
        return tuple(v for v in range(len(self.chi)) if not self.children[v])

    def min_level(self) -> int:
        return min(self.chi)

    def merge_level(self, u: int, v: int) -> int:
        """Level of the lowest vertex dominating both u and v."""
        if u == v:
            return self.chi[u]
        seen = {u}
        while self.parent[u] is not None:
            u = self.parent[u]
            seen.add(u)
        while v not in seen:
            v = self.parent[v]
        return self.chi[v]

    def canonical_key(self):
        """Canonical encoding; equal keys <=> grading-preserving isomorphism.

        Children subtrees are sorted recursively, so the key is independent
        of vertex numbering.  Computed iteratively (trees can be deep).
        """
        n = len(self.chi)
        key: list = [None] * n
        order = sorted(range(n), key=lambda v: self.chi[v])  # children before parents
        for v in order:
            key[v] = tuple(sorted(key[c] for c in self.children[v]))
        return (self.chi[self.top], key[self.top])


def root_from_tau(tau: TauFunction) -> GradedRoot:
    """Merge tree of tau: level-k vertices are runs of {i : tau(i) <= k}."""
    vals = tau.values
    lo, hi = min(vals), max(vals)
    chi: list[int] = []
    parent: list[Optional[int]] = []
    prev_runs: list[tuple[int, int, int]] = []  # (start, end, vertex) at level k-1
    for k in range(lo, hi + 1):
        runs: list[list[int]] = []
        i = 0
        n = len(vals)
        while i < n:
            if vals[i] <= k:
                j = i
                while j + 1 < n and vals[j + 1] <= k:
                    j += 1
                runs.append([i, j])
                i = j + 1
            else:
                i += 1
        vertex_ids = []
        for start, end in runs:
            chi.append(k)
            parent.append(None)
            vertex_ids.append(len(chi) - 1)
        for start, end, v in prev_runs:
            for (rs, re), w in zip(runs, vertex_ids):
                if rs <= start and end <= re:
                    parent[v] = w
                    break
            else:
                raise InternalInvariantError("sublevel run not contained above")
        prev_runs = [(rs, re, w) for (rs, re), w in zip(runs, vertex_ids)]
    return GradedRoot(chi, parent)


@dataclass(frozen=True)
class UModuleDecomposition:
    """T+_{d}  plus a multiset of finite towers T_{r}(n), all in even degrees.

    finite_towers is kept sorted, so equality is multiset equality.
    Gradings are exact rationals.
    """

    tower_grade: Fraction
    finite_towers: tuple[tuple[Fraction, int], ...]
    parity: str = "even"

    @staticmethod
    def from_parts(tower_grade, towers) -> "UModuleDecomposition":
        canon = tuple(sorted((Fraction(g), int(n)) for g, n in towers))
        return UModuleDecomposition(Fraction(tower_grade), canon)

    def shifted(self, r) -> "UModuleDecomposition":
        r = Fraction(r)
        return UModuleDecomposition(
            self.tower_grade + r,
            tuple((g + r, n) for g, n in self.finite_towers),
            self.parity,
        )

    @property
    def reduced_rank(self) -> int:
        return sum(n for _, n in self.finite_towers)

    def __str__(self):
        parts = [f"T+[{self.tower_grade}]"]
        i = 0
        towers = self.finite_towers
        while i < len(towers):
            j = i
            while j < len(towers) and towers[j] == towers[i]:
                j += 1
            g, n = towers[i]
            mult = f"{j - i}*" if j - i > 1 else ""
            parts.append(f"{mult}T[{g}]({n})")
            i = j
        return " + ".join(parts)


def module_from_root(root: GradedRoot, tie_key: Optional[Callable[[int], object]] = None) -> UModuleDecomposition:
    """Z[U]-module of a graded root.

    Leaves are taken in ascending order of level; the first one starts the
    infinite tower at twice its level, every later leaf v contributes a
    finite tower based at twice its level with length chi(w) - chi(v), where
    w is the lowest vertex dominating v together with some earlier leaf.
    The result does not depend on how ties between equal-level leaves are
    broken; tie_key exists so tests can permute them.
    """
    if tie_key is None:
        tie_key = lambda v: v
    leaves = sorted(root.leaves, key=lambda v: (root.chi[v], tie_key(v)))
    first = leaves[0]
    towers = []
    for k, v in enumerate(leaves[1:], start=1):
        w_level = min(root.merge_level(v, u) for u in leaves[:k])
        towers.append((Fraction(2 * root.chi[v]), w_level - root.chi[v]))
    return UModuleDecomposition.from_parts(Fraction(2 * root.chi[first]), towers)


def reduced_rank(tau: TauFunction) -> int:
    """Total rank of the finite towers, straight from the tau values.

    Valid under the normalisation tau(1) > tau(0) = 0:
    rank = min tau + sum of the downward jumps of tau.
    """
    vals = tau.values
    if len(vals) < 2 or vals[0] != 0 or vals[1] <= vals[0]:
        raise ValueError("reduced_rank requires tau(1) > tau(0) = 0")
    drops = sum(max(vals[i] - vals[i + 1], 0) for i in range(len(vals) - 1))
    return min(vals) + drops


# ---------------------------------------------------------------------------
# renderers
# ---------------------------------------------------------------------------


def _layout(root: GradedRoot) -> dict[int, Fraction]:
    """x-positions: leaves at 0, 1, 2, ... in planar order, parents centred."""
    pos: dict[int, Fraction] = {}
    next_slot = 0
    stack: list[tuple[int, bool]] = [(root.top, False)]
    while stack:
        v, expanded = stack.pop()
        if expanded:
            xs = [pos[c] for c in root.children[v]]
            pos[v] = sum(xs) / len(xs)
        elif root.children[v]:
            stack.append((v, True))
            for c in reversed(root.children[v]):
                stack.append((c, False))
        else:
            pos[v] = Fraction(next_slot)
            next_slot += 1
    return pos


def render_ascii(root: GradedRoot) -> str:
    pos = _layout(root)
    col = {v: int(4 * pos[v]) for v in pos}
    width = max(col.values()) + 1
    lo, hi = root.min_level(), root.chi[root.top]
    label_w = max(len(str(lo)), len(str(hi))) + 1
    by_level: dict[int, list[int]] = {}
    for v in range(len(root.chi)):
        by_level.setdefault(root.chi[v], []).append(v)
    lines = [" " * label_w + " : " + " " * col[root.top] + ":"]
    for k in range(hi, lo - 1, -1):
        row = [" "] * width
        for v in by_level.get(k, []):
            row[col[v]] = "*"
        lines.append(f"{k:>{label_w}} | " + "".join(row).rstrip())
        if k > lo:
            conn = [" "] * width
            for v in range(len(root.chi)):
                p = root.parent[v]
                if p is None or root.chi[v] != k - 1:
                    continue
                cv, cp = col[v], col[p]
                if cv == cp:
                    conn[cv] = "|"
                elif cv < cp:
                    conn[(cv + cp + 1) // 2] = "/"
                else:
                    conn[(cv + cp) // 2] = "\\"
            lines.append(" " * label_w + " | " + "".join(conn).rstrip())
    return "\n".join(lines) + "\n"


def render_svg(root: GradedRoot) -> str:
    pos = _layout(root)
    unit, level_h = 48, 24
    margin_x, margin_y = 60, 30
    stem = 30
    lo, hi = root.min_level(), root.chi[root.top]
    x = {v: margin_x + int(unit * pos[v]) for v in pos}
    y = {v: margin_y + stem + level_h * (hi - root.chi[v]) for v in pos}
    width = max(x.values()) + margin_x
    height = margin_y + stem + level_h * (hi - lo) + margin_y
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    ]
    for k in range(hi, lo - 1, -1):
        gy = margin_y + stem + level_h * (hi - k)
        out.append(
            f'<line x1="{margin_x // 2}" y1="{gy}" x2="{width - 10}" y2="{gy}" '
            f'stroke="#999" stroke-width="1" stroke-dasharray="3,4"/>'
        )
        if k % 5 == 0:
            out.append(f'<text x="4" y="{gy + 4}" font-size="11" fill="#333">{k}</text>')
    tx, ty = x[root.top], y[root.top]
    out.append(f'<line x1="{tx}" y1="{ty}" x2="{tx}" y2="{ty - stem}" stroke="#000" stroke-width="1.5"/>')
    for v in range(len(root.chi)):
        p = root.parent[v]
        if p is not None:
            out.append(
                f'<line x1="{x[v]}" y1="{y[v]}" x2="{x[p]}" y2="{y[p]}" '
                f'stroke="#000" stroke-width="1.5"/>'
            )
    for v in range(len(root.chi)):
        out.append(f'<circle cx="{x[v]}" cy="{y[v]}" r="3" fill="#000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(root: GradedRoot, format: str) -> str:
    """Deterministic text rendering of a graded root ('ascii' or 'svg')."""
    if format == "ascii":
        return render_ascii(root)
    if format == "svg":
        return render_svg(root)
    raise ValueError(f"unknown render format: {format!r}")
