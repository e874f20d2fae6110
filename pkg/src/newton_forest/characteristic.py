"""Characteristic numbers over the pair poset, with the rational-gcd machinery.

P collects the pairs (u, e) where u has positive multiplicity and e is an
edge of the positive subtree incident to u.  (u', e') precedes (u, e) when
the path from u' to u traverses e but not e'.  The characteristic number
c(u, e) is defined by induction over this poset via gcds of rationals; the
derived quantities M, p, p', eta, R and Delta-bar all live here.

All rational arithmetic is exact (`fractions.Fraction`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import InternalInconsistencyError
from .local_invariants import VertexLedger, vertex_ledger
from .multiplicity import (
    DicriticalInfo,
    MultiplicityTable,
    classify,
    multiplicities,
)
from .tree_model import CellRef, DecoratedRootedTree, Edge

Rational = Fraction

Pair = tuple[CellRef, Edge]


def rational_gcd(values: Iterable[Rational | int]) -> Rational:
    """The unique xi >= 0 with <values> = xi * Z as a sub-Z-module of Q."""
    vals = [Fraction(v) for v in values]
    if not vals:
        return Fraction(0)
    m = lcm(*(v.denominator for v in vals))
    g = gcd(*(abs(v.numerator) * (m // v.denominator) for v in vals))
    return Fraction(g, m)


def rational_divides(a: Rational | int, b: Rational | int) -> bool:
    """Whether b lies in a*Z (with 0 dividing only 0)."""
    a, b = Fraction(a), Fraction(b)
    if a == 0:
        return b == 0
    return (b / a).denominator == 1


@dataclass(frozen=True)
class PosetP:
    """The pair poset, with predecessor structure realized explicitly."""

    elements: tuple[Pair, ...]
    minimal: frozenset[Pair]
    _pred: Mapping[Pair, tuple[Pair, ...]]  # immediate predecessors
    _n_side: Mapping[Pair, frozenset[CellRef]]  # script-N cells beyond e from u
    _beyond: Mapping[Pair, frozenset[CellRef]]  # all cells beyond e from u

    def immediate_predecessors(self, pair: Pair) -> tuple[Pair, ...]:
        return self._pred[pair]

    def n_side(self, pair: Pair) -> frozenset[CellRef]:
        """script-N(u, e): the positive vertices x with e on the path u -> x."""
        return self._n_side[pair]

    def beyond(self, pair: Pair) -> frozenset[CellRef]:
        """Every cell x (of any kind) with e on the path u -> x."""
        return self._beyond[pair]

    def precedes(self, a: Pair, b: Pair) -> bool:
        """Strictly: a < b in the poset."""
        if a == b:
            return False
        # a = (u', e'), b = (u, e): need e on the u'..u path and e' off it.
        return a[0] in self._n_side[b] and b[0] not in self._n_side[a]

    def comparable(self, a: Pair, b: Pair) -> bool:
        return a == b or self.precedes(a, b) or self.precedes(b, a)

    def interval(self, top: Pair, bottom: Pair) -> tuple[Pair, ...]:
        """All pairs p with top >= p >= bottom, ordered from top to bottom."""
        if top != bottom and not self.precedes(bottom, top):
            raise ValueError("pairs are not comparable")
        chain = [top]
        cur = top
        while cur != bottom:
            nxt = None
            for p in self._pred[cur]:
                if p == bottom or self.precedes(bottom, p):
                    nxt = p
                    break
            if nxt is None:
                raise InternalInconsistencyError("broken predecessor chain")
            chain.append(nxt)
            cur = nxt
        return tuple(chain)


def script_E(
    tree: DecoratedRootedTree, table: MultiplicityTable, u: CellRef
) -> tuple[Edge, ...]:
    """Edges of the positive subtree incident to u, sorted."""
    if u not in tree.vertices or table.N.get(u, 0) <= 0:
        raise ValueError(f"{u!r} is not a positive-multiplicity vertex")
    return tuple(
        e
        for e in tree.incident_edges(u)
        if e.other(u) in tree.vertices and table.N.get(e.other(u), 0) > 0
    )


def build_poset(
    tree: DecoratedRootedTree, table: MultiplicityTable | None = None
) -> PosetP:
    if table is None:
        table = multiplicities(tree)
    script_N = {v for v in tree.vertices if table.N[v] > 0}
    elements: list[Pair] = []
    for u in sorted(script_N):
        for e in tree.incident_edges(u):
            if e.other(u) in script_N:
                elements.append((u, e))

    pred: dict[Pair, tuple[Pair, ...]] = {}
    n_side: dict[Pair, frozenset[CellRef]] = {}
    beyond_of: dict[Pair, frozenset[CellRef]] = {}
    minimal = set()
    for u, e in elements:
        u0 = e.other(u)
        preds = tuple(
            (u0, tree.edge_between(u0, n))
            for n in sorted(tree.neighbors(u0))
            if n != u and n in script_N
        )
        pred[(u, e)] = preds
        if not preds:
            minimal.add((u, e))
        # Everything on the far side of e, by flood fill from u0 away from u.
        beyond = {u0}
        stack = [u0]
        while stack:
            c = stack.pop()
            for n in tree.neighbors(c):
                if n not in beyond and not (c == u0 and n == u):
                    beyond.add(n)
                    stack.append(n)
        beyond_of[(u, e)] = frozenset(beyond)
        n_side[(u, e)] = frozenset(beyond & script_N)

    return PosetP(
        elements=tuple(elements),
        minimal=frozenset(minimal),
        _pred=pred,
        _n_side=n_side,
        _beyond=beyond_of,
    )


def path_dead_end_product(
    tree: DecoratedRootedTree,
    x: CellRef,
    y: CellRef,
    include_x: bool = True,
    include_y: bool = True,
) -> int:
    """Product of dead-end values a_v over the vertices of the path x..y,
    optionally dropping either endpoint.  Equals 1 on empty ranges."""
    cells = tree.path(x, y)
    prod = 1
    for i, c in enumerate(cells):
        if i == 0 and not include_x:
            continue
        if i == len(cells) - 1 and not include_y and len(cells) > 1:
            continue
        if x == y and not (include_x and include_y):
            continue
        prod *= tree.a_value(c)
    return prod


def h_products(
    tree: DecoratedRootedTree, w: CellRef, A: Sequence[CellRef]
) -> tuple[int, int]:
    """(h(w,A), h-hat(w,A)): products over the edge pairs shared by all the
    paths from w to the arrows in A.  A must be nonempty."""
    if not A:
        raise ValueError("h-products need a nonempty arrow set")
    paths = {alpha: tree.path(w, alpha) for alpha in A}
    common = set(paths[A[0]])
    for alpha in A[1:]:
        common &= set(paths[alpha])
    edge_sets = {
        alpha: set(tree.path_edges(w, alpha)) for alpha in A
    }
    h = 1
    h_hat = 1
    for u in sorted(common):
        if not tree.is_vertex(u):
            continue
        for e in tree.incident_edges(u):
            if all(e not in edge_sets[alpha] for alpha in A):
                h *= e.q_near(u)
                if u != w:
                    h_hat *= e.q_near(u)
    return h, h_hat


@dataclass(frozen=True)
class PairData:
    c: Rational
    M: int
    p: int
    p_prime: int
    eta: Rational
    nonpositive: bool
    n_side: frozenset[CellRef]


@dataclass(frozen=True)
class CharacteristicTable:
    poset: PosetP
    pairs: Mapping[Pair, PairData]
    edges_at: Mapping[CellRef, tuple[Edge, ...]]  # script-E per positive vertex

    def c(self, u: CellRef, e: Edge) -> Rational:
        return self.pairs[(u, e)].c

    def M(self, u: CellRef, e: Edge) -> int:
        return self.pairs[(u, e)].M

    def eta(self, u: CellRef, e: Edge) -> Rational:
        return self.pairs[(u, e)].eta


def characteristic_numbers(
    tree: DecoratedRootedTree,
    table: MultiplicityTable | None = None,
    info: DicriticalInfo | None = None,
    ledger: VertexLedger | None = None,
    poset: PosetP | None = None,
) -> CharacteristicTable:
    """Characteristic numbers and their derived quantities, bottom-up over
    the pair poset.  Integrality of M, p/c and p'/c is asserted: it is a
    theorem for valid minimally complete trees, so a failure signals a bug
    or an input that should not have validated."""
    if table is None:
        table = multiplicities(tree)
    if info is None:
        info = classify(tree, table)
    if ledger is None:
        ledger = vertex_ledger(tree, table, info)
    if poset is None:
        poset = build_poset(tree, table)

    per = ledger.per_vertex
    script_N = set(per)
    ones = sorted(tree.arrows1)

    c_of: dict[Pair, Rational] = {}
    # Predecessor n-sides are strictly smaller, so size order is evaluation order.
    for pair in sorted(
        poset.elements, key=lambda p: (len(poset.n_side(p)), p[0], p[1])
    ):
        u, e = pair
        u0 = e.other(u)
        a0 = per[u0].a
        d0 = per[u0].d
        preds = poset.immediate_predecessors(pair)
        if not preds:
            c_of[pair] = Fraction(d0, a0)
        else:
            values = [Fraction(d0)] + [c_of[p] for p in preds]
            if any(v == 0 for v in values):
                raise InternalInconsistencyError("zero fed to a characteristic gcd")
            c_of[pair] = rational_gcd(values) / a0

    pairs: dict[Pair, PairData] = {}
    for pair in poset.elements:
        u, e = pair
        v = e.other(u)
        beyond = poset.beyond(pair)
        A = [alpha for alpha in ones if alpha in beyond]
        p = sum(table.x_hat[(u, alpha)] for alpha in A)
        p_prime = sum(table.x_hat[(v, alpha)] for alpha in ones if alpha not in beyond)

        c = c_of[pair]
        N_u = table.N[u]
        if not rational_divides(c, N_u):
            raise InternalInconsistencyError(f"c(u,e) does not divide N at {pair}")
        if not rational_divides(c, p) or not rational_divides(c, p_prime):
            raise InternalInconsistencyError(f"c(u,e) does not divide p/p' at {pair}")
        M = int(Fraction(N_u) / c)
        if M <= 0:
            raise InternalInconsistencyError(f"nonpositive M at {pair}")

        n_side = poset.n_side(pair)
        dt = sum(per[x].delta_tilde for x in n_side)
        eta = Fraction(dt) - (1 - c)
        pairs[pair] = PairData(
            c=c,
            M=M,
            p=p,
            p_prime=p_prime,
            eta=eta,
            nonpositive=dt <= 0,
            n_side=n_side,
        )

    edges_at = {u: script_E(tree, table, u) for u in sorted(script_N)}
    return CharacteristicTable(poset=poset, pairs=pairs, edges_at=edges_at)


def R_of(
    tree: DecoratedRootedTree,
    ledger: VertexLedger,
    chars: CharacteristicTable,
    u: CellRef,
    A: Sequence[Edge],
) -> Rational:
    """R(u, A) = sum over adjacent dicriticals of (1 - 1/k) + (1 - 1/a)
    + sum over e in A of (1 - 1/M(u,e))."""
    data = ledger.per_vertex[u]
    allowed = set(chars.edges_at[u])
    for e in A:
        if e not in allowed:
            raise ValueError(f"edge {e} is not a positive-subtree edge at {u!r}")
    total = Fraction(0)
    for x in data.dicriticals:
        total += 1 - Fraction(1, data.k[x])
    total += 1 - Fraction(1, data.a)
    for e in A:
        total += 1 - Fraction(1, chars.M(u, e))
    return total


def delta_bar(
    ledger: VertexLedger,
    chars: CharacteristicTable,
    u: CellRef,
    A: Sequence[Edge],
) -> int:
    """Genus defect of {u} together with everything beyond the edges of A."""
    cells: set[CellRef] = {u}
    for e in A:
        cells |= chars.pairs[(u, e)].n_side
    return ledger.delta_tilde(cells)


def R_and_delta_bar(
    tree: DecoratedRootedTree,
    ledger: VertexLedger,
    chars: CharacteristicTable,
    u: CellRef,
    A: Sequence[Edge],
) -> tuple[Rational, int]:
    return (
        R_of(tree, ledger, chars, u, A),
        delta_bar(ledger, chars, u, A),
    )
