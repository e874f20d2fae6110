"""Global structure: trivial chains, teeth, the skeleton, and comb decompositions.

A chain hanging off the positive subtree is "trivial" when its interior
vertices have exactly two positive neighbours and zero genus defect.  The
qualifying chains (the set Gamma) define teeth, the vertex sets W / V / V-bar,
the loose-end set Omega, the skeleton S, and per-vertex tooth counts.  On top
of that, the comb relation partitions the skeleton pairs into totally ordered
classes; the decomposition relative to an initial vertex carries per-class
extremal pairs, the drop of the characteristic number, the covered vertex
sets, the quotient tree and its shape statistics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .characteristic import (
    CharacteristicTable,
    Pair,
    characteristic_numbers,
)
from .errors import InternalInconsistencyError
from .local_invariants import VertexLedger, vertex_ledger
from .multiplicity import DicriticalInfo, MultiplicityTable, classify, multiplicities
from .tree_model import CellRef, DecoratedRootedTree, Edge


@dataclass(frozen=True)
class StructureLedger:
    Z: frozenset[CellRef]
    Gamma: tuple[tuple[CellRef, ...], ...]  # trivial chains, one per start
    W: frozenset[CellRef]
    V: Mapping[CellRef, frozenset[CellRef]]
    V_bar: Mapping[CellRef, frozenset[CellRef]]
    Omega: frozenset[CellRef]
    is_brush: bool
    S: frozenset[CellRef]
    delta_star: Mapping[CellRef, int]
    t: Mapping[CellRef, int]
    teeth: frozenset[Pair]
    In: frozenset[CellRef]


def _context(tree, table, info, ledger, chars):
    if table is None:
        table = multiplicities(tree)
    if info is None:
        info = classify(tree, table)
    if ledger is None:
        ledger = vertex_ledger(tree, table, info)
    if chars is None:
        chars = characteristic_numbers(tree, table, info, ledger)
    return table, info, ledger, chars


def _maximal_trivial_walk(
    tree: DecoratedRootedTree, per, script_N: set[CellRef], start: CellRef
) -> tuple[CellRef, ...] | None:
    """The longest trivial chain out of a valency-one vertex of the positive
    subtree: interior cells must keep two positive neighbours and zero defect."""
    if per[start].epsilon != 1:
        return None
    prev = start
    (cur,) = [n for n in tree.neighbors(start) if n in script_N]
    cells = [start, cur]
    while per[cur].epsilon == 2 and per[cur].delta_tilde == 0:
        (nxt,) = [n for n in tree.neighbors(cur) if n in script_N and n != prev]
        prev, cur = cur, nxt
        cells.append(cur)
    return tuple(cells)


def structure_ledger(
    tree: DecoratedRootedTree,
    table: MultiplicityTable | None = None,
    info: DicriticalInfo | None = None,
    ledger: VertexLedger | None = None,
    chars: CharacteristicTable | None = None,
) -> StructureLedger:
    table, info, ledger, chars = _context(tree, table, info, ledger, chars)
    per = ledger.per_vertex
    script_N = set(per)

    Z = frozenset(
        z for z in script_N if per[z].epsilon == 1 and per[z].delta_tilde <= 0
    )

    gamma: list[tuple[CellRef, ...]] = []
    gamma_lemma_form: list[tuple[CellRef, ...]] = []
    for start in sorted(script_N):
        walk = _maximal_trivial_walk(tree, per, script_N, start)
        if walk is None:
            continue
        descends = tree.less_than(walk[-1], walk[-2])
        if per[start].delta_tilde <= 0 < ledger.delta_tilde(walk) and descends:
            gamma.append(walk)
        if per[start].delta_tilde <= 0 < per[walk[-1]].delta_tilde and descends:
            gamma_lemma_form.append(walk)
    if gamma != gamma_lemma_form:
        raise InternalInconsistencyError(
            "the two characterizations of the qualifying chains disagree"
        )

    W = frozenset(w[-1] for w in gamma)
    V: dict[CellRef, frozenset[CellRef]] = {}
    V_bar: dict[CellRef, frozenset[CellRef]] = {}
    for v in sorted(script_N):
        mine = [w for w in gamma if w[-1] == v]
        if mine:
            V[v] = frozenset(w[0] for w in mine)
            cells: set[CellRef] = set()
            for w in mine:
                cells.update(w)
            V_bar[v] = frozenset(cells)
        else:
            V[v] = frozenset()
            V_bar[v] = frozenset({v})

    Omega = frozenset(Z - set().union(*(V[w] for w in W)) if W else Z)
    is_brush = any(V_bar[w] == script_N for w in W)
    S = frozenset(
        script_N - set().union(*((V_bar[w] - {w}) for w in W)) if W else script_N
    )

    gamma_edges: set[Edge] = set()
    for w in gamma:
        for i in range(len(w) - 1):
            gamma_edges.add(tree.edge_between(w[i], w[i + 1]))
    t: dict[CellRef, int] = {}
    delta_star: dict[CellRef, int] = {}
    for v in sorted(script_N):
        n_edges = chars.edges_at[v]
        t[v] = sum(1 for e in n_edges if e in gamma_edges)
        delta_star[v] = len(n_edges) - t[v]

    teeth = frozenset(
        (w[-1], tree.edge_between(w[-1], w[-2])) for w in gamma
    )

    if Omega:
        initial = Omega
    else:
        initial = frozenset(v for v in S if delta_star[v] <= 1)

    return StructureLedger(
        Z=Z,
        Gamma=tuple(sorted(gamma)),
        W=W,
        V=V,
        V_bar=V_bar,
        Omega=Omega,
        is_brush=is_brush,
        S=S,
        delta_star=delta_star,
        t=t,
        teeth=teeth,
        In=initial,
    )


def _R_single(ledger: VertexLedger, chars: CharacteristicTable, v: CellRef, f: Edge) -> Fraction:
    data = ledger.per_vertex[v]
    total = Fraction(0)
    for x in data.dicriticals:
        total += 1 - Fraction(1, data.k[x])
    total += 1 - Fraction(1, data.a)
    total += 1 - Fraction(1, chars.M(v, f))
    return total


def is_comb_over(
    tree: DecoratedRootedTree,
    ledger: VertexLedger,
    chars: CharacteristicTable,
    struct: StructureLedger,
    top: Pair,
    bottom: Pair,
) -> bool:
    """Whether `top` is a comb over `bottom` (top must be >= bottom in the poset)."""
    poset = chars.poset
    if top != bottom and not poset.precedes(bottom, top):
        if poset.precedes(top, bottom):
            raise ValueError("first pair must lie above the second")
        raise ValueError("pairs are not comparable")
    chain = poset.interval(top, bottom)
    u = top[0]
    for v, f in chain[1:]:
        eps = ledger.per_vertex[v].epsilon
        if eps not in (2, 3):
            return False
        r1 = _R_single(ledger, chars, v, f)
        if eps == 2:
            if not r1 < 1:
                return False
        else:
            if r1 != 0:
                return False
            path_edge_at_v = tree.edge_between(v, tree.path(u, v)[-2])
            candidates = [
                e for e in chars.edges_at[v] if e != f and e != path_edge_at_v
            ]
            if len(candidates) != 1:
                raise InternalInconsistencyError(
                    f"expected a unique third edge at {v!r}, found {len(candidates)}"
                )
            if (v, candidates[0]) not in struct.teeth:
                return False
    return True


@dataclass(frozen=True)
class CombClass:
    pairs: tuple[Pair, ...]  # ascending: least element first
    c_dot: int
    Y: frozenset[CellRef]
    t_count: int

    @property
    def least(self) -> Pair:
        return self.pairs[0]

    @property
    def greatest(self) -> Pair:
        return self.pairs[-1]

    @property
    def u(self) -> CellRef:
        return self.pairs[-1][0]


@dataclass(frozen=True)
class CombStats:
    B: int
    L: int
    n1: int  # classes (other than the root class) whose top has skeleton valency 1
    n2: int
    n_gt2: int
    T: int
    x0: int
    x_C: tuple[int, ...]  # aligned with the non-root classes in class order
    H: int


@dataclass(frozen=True)
class CombDecomposition:
    z: CellRef
    O: tuple[Pair, ...]
    classes: tuple[CombClass, ...]
    c0_index: int | None
    quotient_edges: tuple[tuple[int, int], ...]
    stats: CombStats | None

    @property
    def u0(self) -> CellRef | None:
        return None if self.c0_index is None else self.classes[self.c0_index].u


def comb_decomposition(
    tree: DecoratedRootedTree,
    z: CellRef,
    table: MultiplicityTable | None = None,
    info: DicriticalInfo | None = None,
    ledger: VertexLedger | None = None,
    chars: CharacteristicTable | None = None,
    struct: StructureLedger | None = None,
) -> CombDecomposition:
    """Decompose the skeleton pairs pointing at `z` into comb classes.

    The classes are produced by joining skeleton-adjacent pairs that pass the
    single-step comb test, then verified against the pairwise comb relation;
    a mismatch is an engine bug.
    """
    table, info, ledger, chars = _context(tree, table, info, ledger, chars)
    if struct is None:
        struct = structure_ledger(tree, table, info, ledger, chars)
    if z not in struct.In:
        raise ValueError(f"{z!r} is not an initial vertex")

    S = struct.S
    members = sorted(S - {z})
    if not members:
        return CombDecomposition(
            z=z, O=(), classes=(), c0_index=None, quotient_edges=(), stats=None
        )

    toward_z: dict[CellRef, CellRef] = {}
    pair_of: dict[CellRef, Pair] = {}
    for u in members:
        nxt = tree.path(u, z)[1]
        toward_z[u] = nxt
        pair_of[u] = (u, tree.edge_between(u, nxt))
    O = tuple(pair_of[u] for u in members)

    # Union-find over the skeleton vertices away from z.
    parent_uf: dict[CellRef, CellRef] = {u: u for u in members}

    def find(x: CellRef) -> CellRef:
        while parent_uf[x] != x:
            parent_uf[x] = parent_uf[parent_uf[x]]
            x = parent_uf[x]
        return x

    def union(x: CellRef, y: CellRef) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent_uf[ry] = rx

    for u in members:
        p = toward_z[u]
        if p == z:
            continue
        if _single_step_comb(tree, ledger, chars, struct, pair_of[u], pair_of[p]):
            union(u, p)

    groups: dict[CellRef, list[CellRef]] = {}
    for u in members:
        groups.setdefault(find(u), []).append(u)

    dist = {u: len(tree.path(z, u)) for u in members}
    classes: list[CombClass] = []
    class_index_of: dict[CellRef, int] = {}
    per = ledger.per_vertex
    for key in sorted(groups, key=lambda k: min(dist[u] for u in groups[k])):
        us = sorted(groups[key], key=lambda u: dist[u])
        pairs = tuple(pair_of[u] for u in us)
        least, greatest = pairs[0], pairs[-1]
        c_drop = chars.pairs[least].c - chars.pairs[greatest].c
        if c_drop.denominator != 1 or c_drop < 0:
            raise InternalInconsistencyError(
                f"characteristic drop {c_drop} is not a nonnegative integer"
            )
        u_C = greatest[0]
        Y = frozenset(
            struct.V_bar[u_C]
            | (chars.pairs[greatest].n_side - chars.pairs[least].n_side)
        )
        t_count = sum(1 for u in us[:-1] if struct.t[u] > 0)
        idx = len(classes)
        classes.append(
            CombClass(pairs=pairs, c_dot=int(c_drop), Y=Y, t_count=t_count)
        )
        for u in us:
            class_index_of[u] = idx

    _verify_classes(tree, ledger, chars, struct, O, class_index_of)

    z_prime = [u for u in members if toward_z[u] == z]
    if len(z_prime) != 1:
        raise InternalInconsistencyError(
            f"initial vertex {z!r} has {len(z_prime)} skeleton neighbours"
        )
    c0_index = class_index_of[z_prime[0]]

    quotient_edges = sorted(
        {
            tuple(sorted((class_index_of[u], class_index_of[toward_z[u]])))
            for u in members
            if toward_z[u] != z and class_index_of[u] != class_index_of[toward_z[u]]
        }
    )

    stats = None
    if len(classes) > 1:
        stats = _stats(tree, ledger, chars, struct, classes, c0_index)
    return CombDecomposition(
        z=z,
        O=O,
        classes=tuple(classes),
        c0_index=c0_index,
        quotient_edges=tuple((a, b) for a, b in quotient_edges),
        stats=stats,
    )


def _single_step_comb(tree, ledger, chars, struct, upper: Pair, lower: Pair) -> bool:
    """Comb test between a pair and its immediate predecessor (at v = lower[0])."""
    v, f = lower
    u = upper[0]
    eps = ledger.per_vertex[v].epsilon
    if eps not in (2, 3):
        return False
    r1 = _R_single(ledger, chars, v, f)
    if eps == 2:
        return r1 < 1
    if r1 != 0:
        return False
    edge_up = tree.edge_between(v, u)
    candidates = [e for e in chars.edges_at[v] if e != f and e != edge_up]
    if len(candidates) != 1:
        raise InternalInconsistencyError(
            f"expected a unique third edge at {v!r}, found {len(candidates)}"
        )
    return (v, candidates[0]) in struct.teeth


def _verify_classes(tree, ledger, chars, struct, O, class_index_of) -> None:
    poset = chars.poset
    pairs = list(O)
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            a, b = pairs[i], pairs[j]
            same = class_index_of[a[0]] == class_index_of[b[0]]
            if poset.precedes(a, b):
                expected = is_comb_over(tree, ledger, chars, struct, b, a)
            elif poset.precedes(b, a):
                expected = is_comb_over(tree, ledger, chars, struct, a, b)
            else:
                expected = False
            if same != expected:
                raise InternalInconsistencyError(
                    f"comb classes disagree with the pairwise relation at {a} / {b}"
                )


def _stats(tree, ledger, chars, struct, classes: Sequence[CombClass], c0: int) -> CombStats:
    per = ledger.per_vertex
    dt = ledger.delta_tilde
    u0_class = classes[c0]
    u0 = u0_class.u
    ds_u0 = struct.delta_star[u0]
    B = 2 if ds_u0 == 2 else 0
    L = sum(1 for v in struct.S if struct.delta_star[v] == 1)
    n1 = n2 = n_gt2 = 0
    T = 0
    x_C: list[int] = []
    total_rest = 0
    for i, cls in enumerate(classes):
        if i == c0:
            continue
        ds = struct.delta_star[cls.u]
        tt = struct.t[cls.u]
        if ds == 1:
            n1 += 1
            T += max(0, tt - 2)
        elif ds == 2:
            n2 += 1
            T += max(0, tt - 1)
        else:
            n_gt2 += 1
            T += tt
        x = dt(struct.V_bar[cls.u]) - max(1, per[cls.u].epsilon - 2)
        x_C.append(x)
        total_rest += cls.c_dot + x

    x0 = dt(
        struct.V_bar[u0] | chars.pairs[u0_class.greatest].n_side
    ) - abs(ds_u0 - 3)
    H = B + 2 * (L - 2) + n2
    total = B + 2 * (L - 2) + n2 + T + x0 + total_rest
    dt_N = dt(per.keys())
    if total != dt_N:
        raise InternalInconsistencyError(
            f"comb statistics identity failed: {total} != {dt_N}"
        )
    return CombStats(B=B, L=L, n1=n1, n2=n2, n_gt2=n_gt2, T=T, x0=x0, x_C=tuple(x_C), H=H)


def rooted_tree_H(n: int, edges: Sequence[tuple[int, int]], root: int) -> int:
    """2*(number of valency-1 vertices, root included) + (number of non-root
    valency-2 vertices) - 2, for an abstract rooted tree on 0..n-1."""
    val = [0] * n
    for a, b in edges:
        val[a] += 1
        val[b] += 1
    lam = sum(1 for v in range(n) if val[v] == 1)
    n2 = sum(1 for v in range(n) if v != root and val[v] == 2)
    return 2 * lam + n2 - 2


def quotient_tree_H(decomp: CombDecomposition) -> int:
    """H of the quotient tree; asserted equal to B + 2(L-2) + n2."""
    if len(decomp.classes) <= 1:
        raise ValueError("the quotient statistic needs at least two classes")
    h = rooted_tree_H(len(decomp.classes), decomp.quotient_edges, decomp.c0_index)
    assert decomp.stats is not None
    if h != decomp.stats.H:
        raise InternalInconsistencyError(
            f"quotient shape H={h} disagrees with B+2(L-2)+n2={decomp.stats.H}"
        )
    return h
