"""Immutable decorated rooted trees with axiom validation and primitive queries.

Cells are either vertices or arrows; arrows carry a 0/1 decoration and every
edge carries one integer decoration near each of its two ends.  A validated
tree satisfies six axioms (see :func:`validate_axioms`); all analyses in the
other modules assume a validated tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .errors import TreeStructureError

VERTEX = "vertex"
ARROW = "arrow"

CellRef = str


@dataclass(frozen=True)
class Cell:
    """One 0-dimensional cell: a vertex, or an arrow decorated 0 or 1."""

    id: CellRef
    kind: str
    arrow_decoration: int | None = None


@dataclass(frozen=True, order=True)
class Edge:
    """An undirected edge with one integer decoration near each end.

    `ends` is sorted; `q[i]` is the decoration near `ends[i]`.
    """

    ends: tuple[CellRef, CellRef]
    q: tuple[int, int]

    def q_near(self, cell: CellRef) -> int:
        if cell == self.ends[0]:
            return self.q[0]
        if cell == self.ends[1]:
            return self.q[1]
        raise ValueError(f"cell {cell!r} is not an end of edge {self.ends}")

    def other(self, cell: CellRef) -> CellRef:
        if cell == self.ends[0]:
            return self.ends[1]
        if cell == self.ends[1]:
            return self.ends[0]
        raise ValueError(f"cell {cell!r} is not an end of edge {self.ends}")

    def __str__(self) -> str:
        return "{%s,%s}" % self.ends


def make_edge(a: CellRef, qa: int, b: CellRef, qb: int) -> Edge:
    """Build an edge decorated `qa` near `a` and `qb` near `b`."""
    if a <= b:
        return Edge((a, b), (qa, qb))
    return Edge((b, a), (qb, qa))


@dataclass(frozen=True)
class ValidationDiagnostic:
    """One violated axiom clause, with the cells/edges where it fails."""

    axiom_id: int | str
    location: tuple[str, ...]
    message: str

    def __str__(self) -> str:
        return f"axiom {self.axiom_id} at ({', '.join(self.location)}): {self.message}"


@dataclass(frozen=True)
class DecoratedRootedTree:
    """A structurally valid decorated rooted tree.  Construct via :func:`build_tree`.

    The instance is immutable and safe to share between concurrent analyses.
    Vertex/arrow classification is recomputed from valencies and the root,
    never trusted from the input.
    """

    cells: dict[CellRef, Cell]
    edges: tuple[Edge, ...]
    root: CellRef
    _incident: dict[CellRef, tuple[Edge, ...]] = field(repr=False, compare=False)
    _parent_edge: dict[CellRef, Edge | None] = field(repr=False, compare=False)
    _depth: dict[CellRef, int] = field(repr=False, compare=False)
    _edge_to: dict[CellRef, dict[CellRef, Edge]] = field(repr=False, compare=False)

    # -- basic sets ---------------------------------------------------------

    def cell_ids(self) -> list[CellRef]:
        return sorted(self.cells)

    @cached_property
    def vertices(self) -> frozenset[CellRef]:
        return frozenset(c for c, cell in self.cells.items() if cell.kind == VERTEX)

    @cached_property
    def arrows(self) -> frozenset[CellRef]:
        return frozenset(c for c, cell in self.cells.items() if cell.kind == ARROW)

    @cached_property
    def arrows0(self) -> frozenset[CellRef]:
        """Arrows decorated (0)."""
        return frozenset(
            c for c, cell in self.cells.items()
            if cell.kind == ARROW and cell.arrow_decoration == 0
        )

    @cached_property
    def arrows1(self) -> frozenset[CellRef]:
        """Arrows decorated (1)."""
        return frozenset(
            c for c, cell in self.cells.items()
            if cell.kind == ARROW and cell.arrow_decoration == 1
        )

    def is_vertex(self, c: CellRef) -> bool:
        return self.cells[c].kind == VERTEX

    def is_arrow(self, c: CellRef) -> bool:
        return self.cells[c].kind == ARROW

    # -- incidence ----------------------------------------------------------

    def incident_edges(self, c: CellRef) -> tuple[Edge, ...]:
        if c not in self.cells:
            raise KeyError(f"unknown cell {c!r}")
        return self._incident[c]

    def valency(self, c: CellRef) -> int:
        return len(self.incident_edges(c))

    def neighbors(self, c: CellRef) -> list[CellRef]:
        return [e.other(c) for e in self.incident_edges(c)]

    def edge_between(self, a: CellRef, b: CellRef) -> Edge:
        try:
            return self._edge_to[a][b]
        except KeyError:
            raise KeyError(f"no edge between {a!r} and {b!r}") from None

    # -- dead ends and a-values ----------------------------------------------

    def dead_ends(self, v: CellRef) -> tuple[Edge, ...]:
        """Edges at `v` whose other end is a (0)-arrow."""
        zero = self.arrows0
        return tuple(e for e in self.incident_edges(v) if e.other(v) in zero)

    def a_value(self, v: CellRef) -> int:
        """Dead-end decoration near `v`, or 1 when no dead end is incident."""
        ends = self.dead_ends(v)
        if not ends:
            return 1
        return ends[0].q_near(v)

    # -- decorations ---------------------------------------------------------

    def Q(self, edge: Edge, end: CellRef) -> int:
        """Product of decorations near `end` of all other edges incident to it."""
        if end not in edge.ends:
            raise ValueError(f"cell {end!r} is not an end of edge {edge}")
        prod = 1
        for e in self.incident_edges(end):
            if e != edge:
                prod *= e.q_near(end)
        return prod

    def edge_determinant(self, edge: Edge) -> int:
        """q(e,x)q(e,y) - Q(e,x)Q(e,y); defined for vertex-vertex edges only."""
        x, y = edge.ends
        if not (self.is_vertex(x) and self.is_vertex(y)):
            raise ValueError(f"edge {edge} has an arrow end; determinant undefined")
        return edge.q[0] * edge.q[1] - self.Q(edge, x) * self.Q(edge, y)

    # -- paths and the tree order ---------------------------------------------

    def parent(self, c: CellRef) -> CellRef | None:
        e = self._parent_edge[c]
        return None if e is None else e.other(c)

    def depth(self, c: CellRef) -> int:
        return self._depth[c]

    def path(self, x: CellRef, y: CellRef) -> tuple[CellRef, ...]:
        """The unique simple path from `x` to `y`, as a cell sequence."""
        if x not in self.cells or y not in self.cells:
            missing = x if x not in self.cells else y
            raise KeyError(f"unknown cell {missing!r}")
        up_x: list[CellRef] = [x]
        up_y: list[CellRef] = [y]
        a, b = x, y
        while self._depth[a] > self._depth[b]:
            a = self.parent(a)  # type: ignore[assignment]
            up_x.append(a)
        while self._depth[b] > self._depth[a]:
            b = self.parent(b)  # type: ignore[assignment]
            up_y.append(b)
        while a != b:
            a = self.parent(a)  # type: ignore[assignment]
            b = self.parent(b)  # type: ignore[assignment]
            up_x.append(a)
            up_y.append(b)
        up_y.pop()  # meeting cell appears once
        return tuple(up_x + up_y[::-1])

    def path_edges(self, x: CellRef, y: CellRef) -> tuple[Edge, ...]:
        cells = self.path(x, y)
        return tuple(
            self.edge_between(cells[i], cells[i + 1]) for i in range(len(cells) - 1)
        )

    def incident_edges_of_path(self, cells: tuple[CellRef, ...]) -> list[tuple[Edge, CellRef]]:
        """Edges incident to (but not in) the path, each with its attach cell."""
        on_path = set()
        for i in range(len(cells) - 1):
            on_path.add(self.edge_between(cells[i], cells[i + 1]))
        out = []
        for c in cells:
            for e in self.incident_edges(c):
                if e not in on_path:
                    out.append((e, c))
        return out

    def less_than(self, x: CellRef, y: CellRef) -> bool:
        """Tree order: x < y iff x lies on the path from the root to y, x != y."""
        if x == y:
            return False
        if self._depth[x] >= self._depth[y]:
            return False
        c = y
        while self._depth[c] > self._depth[x]:
            c = self.parent(c)  # type: ignore[assignment]
        return c == x

    def connected(self, subset: Iterable[CellRef]) -> bool:
        """Whether every path between members of `subset` stays inside it."""
        members = set(subset)
        for c in members:
            if c not in self.cells:
                raise KeyError(f"unknown cell {c!r}")
        if len(members) <= 1:
            return True
        start = next(iter(members))
        seen = {start}
        stack = [start]
        while stack:
            c = stack.pop()
            for d in self.neighbors(c):
                if d in members and d not in seen:
                    seen.add(d)
                    stack.append(d)
        return seen == members

    def iter_vertex_edges(self) -> Iterator[Edge]:
        """Edges whose two ends are both vertices."""
        for e in self.edges:
            if self.is_vertex(e.ends[0]) and self.is_vertex(e.ends[1]):
                yield e


def build_tree(
    cells: Iterable[Cell], edges: Iterable[Edge], root: CellRef
) -> DecoratedRootedTree:
    """Assemble and structurally check a decorated rooted tree.

    Raises :class:`TreeStructureError` carrying every problem found:
    duplicate ids, duplicate or dangling edges, self-loops, a disconnected or
    cyclic graph, a root classified as arrow, and decoration bookkeeping
    errors.  Axioms are not checked here; see :func:`validate_axioms`.
    """
    problems: list[str] = []
    cell_list = list(cells)
    edge_input = list(edges)

    by_id: dict[CellRef, Cell] = {}
    for cell in cell_list:
        if cell.id in by_id:
            problems.append(f"duplicate cell id {cell.id!r}")
        by_id[cell.id] = cell
    if root not in by_id:
        problems.append(f"root {root!r} is not a cell")

    seen_pairs: set[tuple[CellRef, CellRef]] = set()
    incident: dict[CellRef, list[Edge]] = {c: [] for c in by_id}
    for e in edge_input:
        a, b = e.ends
        if a == b:
            problems.append(f"self-loop at {a!r}")
            continue
        if a not in by_id or b not in by_id:
            problems.append(f"edge {e} mentions an unknown cell")
            continue
        if e.ends in seen_pairs:
            problems.append(f"not a tree: duplicate edge {e}")
            continue
        seen_pairs.add(e.ends)
        incident[a].append(e)
        incident[b].append(e)

    if problems:
        raise TreeStructureError(problems)

    kept = sorted(seen_pairs)
    if len(kept) != len(by_id) - 1:
        problems.append(
            f"not a tree: {len(by_id)} cells need {len(by_id) - 1} edges, got {len(kept)}"
        )

    # Rooted orientation by BFS; detects disconnection.
    parent_edge: dict[CellRef, Edge | None] = {root: None}
    depth: dict[CellRef, int] = {root: 0}
    queue = [root]
    while queue:
        c = queue.pop(0)
        for e in incident[c]:
            d = e.other(c)
            if d not in depth:
                depth[d] = depth[c] + 1
                parent_edge[d] = e
                queue.append(d)
    if len(depth) != len(by_id):
        missing = sorted(set(by_id) - set(depth))
        problems.append(f"disconnected: unreachable cells {missing}")
    if problems:
        raise TreeStructureError(problems)

    # Reclassify cells from valencies; cross-check the declared kinds.
    final: dict[CellRef, Cell] = {}
    for cid in sorted(by_id):
        declared = by_id[cid]
        kind = VERTEX if (cid == root or len(incident[cid]) != 1) else ARROW
        if declared.kind != kind:
            problems.append(
                f"cell {cid!r} declared {declared.kind!r} but classifies as {kind!r}"
            )
        if kind == ARROW:
            if declared.arrow_decoration not in (0, 1):
                problems.append(
                    f"arrow {cid!r} must be decorated 0 or 1, got {declared.arrow_decoration!r}"
                )
            final[cid] = Cell(cid, ARROW, declared.arrow_decoration)
        else:
            if declared.arrow_decoration is not None:
                problems.append(f"vertex {cid!r} carries an arrow decoration")
            final[cid] = Cell(cid, VERTEX)
    if problems:
        raise TreeStructureError(problems)

    incident_sorted = {c: tuple(sorted(es)) for c, es in incident.items()}
    return DecoratedRootedTree(
        cells=final,
        edges=tuple(sorted(set(edge_input))),
        root=root,
        _incident=incident_sorted,
        _parent_edge=parent_edge,
        _depth=depth,
        _edge_to={
            c: {e.other(c): e for e in es} for c, es in incident_sorted.items()
        },
    )


def _coprime(a: int, b: int) -> bool:
    return math.gcd(a, b) == 1


def validate_axioms(tree: DecoratedRootedTree) -> list[ValidationDiagnostic]:
    """Check the six defining axioms; an empty list means the tree passes all.

    1. every vertex has a (1)-arrow above it;
    2. at most one dead end per vertex;
    3. decorations near the root equal 1;
    4. decorations near arrows equal 1;
    5. near each vertex: pairwise coprime decorations, upward decorations
       positive with at most one exceeding 1, and the dead-end decoration
       equal to the maximum upward decoration;
    6. every vertex-vertex edge has negative determinant.
    """
    out: list[ValidationDiagnostic] = []
    root = tree.root

    covered: set[CellRef] = set()
    for alpha in sorted(tree.arrows1):
        covered.update(tree.path(root, alpha)[:-1])
    for v in sorted(tree.vertices):
        if v not in covered:
            out.append(
                ValidationDiagnostic(1, (v,), "no arrow decorated (1) above this vertex")
            )

    for v in sorted(tree.vertices):
        dead = tree.dead_ends(v)
        if len(dead) > 1:
            out.append(
                ValidationDiagnostic(
                    2, (v,), f"{len(dead)} dead ends incident to one vertex"
                )
            )

    for e in tree.incident_edges(root):
        if e.q_near(root) != 1:
            out.append(
                ValidationDiagnostic(
                    3, (str(e), root), f"decoration near root is {e.q_near(root)}, not 1"
                )
            )

    for alpha in sorted(tree.arrows):
        (e,) = tree.incident_edges(alpha)
        if e.q_near(alpha) != 1:
            out.append(
                ValidationDiagnostic(
                    4, (str(e), alpha), f"decoration near arrow is {e.q_near(alpha)}, not 1"
                )
            )

    for v in sorted(tree.vertices):
        inc = tree.incident_edges(v)
        for i in range(len(inc)):
            for j in range(i + 1, len(inc)):
                qi, qj = inc[i].q_near(v), inc[j].q_near(v)
                if not _coprime(qi, qj):
                    out.append(
                        ValidationDiagnostic(
                            5,
                            (v, str(inc[i]), str(inc[j])),
                            f"decorations {qi} and {qj} are not coprime",
                        )
                    )
        upward = [e for e in inc if tree.less_than(v, e.other(v))]
        big = [e for e in upward if e.q_near(v) > 1]
        for e in upward:
            if e.q_near(v) < 1:
                out.append(
                    ValidationDiagnostic(
                        5, (v, str(e)), f"upward decoration {e.q_near(v)} is not positive"
                    )
                )
        if len(big) > 1:
            out.append(
                ValidationDiagnostic(
                    5, (v,), "more than one upward decoration exceeds 1"
                )
            )
        dead = tree.dead_ends(v)
        if dead and upward:
            mx = max(e.q_near(v) for e in upward)
            if dead[0].q_near(v) != mx:
                out.append(
                    ValidationDiagnostic(
                        5,
                        (v, str(dead[0])),
                        f"dead-end decoration {dead[0].q_near(v)} is not the maximum {mx}",
                    )
                )

    for e in tree.iter_vertex_edges():
        det = tree.edge_determinant(e)
        if det >= 0:
            out.append(
                ValidationDiagnostic(6, (str(e),), f"edge determinant {det} is not negative")
            )

    return out
