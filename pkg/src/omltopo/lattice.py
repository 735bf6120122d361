"""Finite orthomodular lattices: validation, table lookups, Sasaki projection, generators."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

# Upper bound on gen_boolean(k); 2**5 elements keeps L^{#2} relations tractable.
BOOLEAN_MAX_K = 5
MO_MAX_K = 32


class LatticeError(ValueError):
    """Base class for validation failures; ``pair`` holds the witnessing names."""

    def __init__(self, message: str, pair: Tuple[str, ...] = ()):
        super().__init__(message)
        self.pair = tuple(pair)


class NotAPoset(LatticeError):
    pass


class NotALattice(LatticeError):
    pass


class NotAnOrtholattice(LatticeError):
    pass


class NotOrthomodular(LatticeError):
    pass


class SizeLimit(ValueError):
    pass


@dataclass(frozen=True)
class RawLatticeSpec:
    """Interchange form of a lattice before validation.

    ``pairs`` are index pairs (i, j) meaning element i lies below element j;
    ``kind`` says whether they list covers only or the full order.
    """

    names: Tuple[str, ...]
    pairs: Tuple[Tuple[int, int], ...]
    ortho: Dict[str, str]
    kind: str = "covers"

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("element names must be unique")
        if self.kind not in ("covers", "full"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        n = len(self.names)
        for i, j in self.pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"order pair ({i}, {j}) out of range")
        known = set(self.names)
        for k, v in self.ortho.items():
            if k not in known or v not in known:
                raise ValueError(f"orthocomplement references unknown element {k!r}->{v!r}")


def transitive_closure(rel: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a boolean relation matrix (Warshall)."""
    closure = rel.astype(bool, copy=True)
    np.fill_diagonal(closure, True)
    for k in range(closure.shape[0]):
        closure |= np.outer(closure[:, k], closure[k, :])
    return closure


@dataclass(frozen=True, eq=False)
class FiniteOml:
    """A validated finite orthomodular lattice.

    Elements are dense indices ``0..n-1``; all operations are table lookups.
    Instances are immutable and hash by identity.
    """

    names: Tuple[str, ...]
    order: np.ndarray  # order[i, j] <=> i <= j
    ortho_map: np.ndarray
    meet_table: np.ndarray
    join_table: np.ndarray
    bottom: int
    top: int
    atoms: Tuple[int, ...]
    _index: Dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        for arr in (self.order, self.ortho_map, self.meet_table, self.join_table):
            arr.setflags(write=False)
        self._index.update({name: i for i, name in enumerate(self.names)})

    @property
    def n(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"FiniteOml(n={self.n}, atoms={len(self.atoms)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no element named {name!r}") from None

    def name(self, x: int) -> str:
        return self.names[x]

    def leq(self, a: int, b: int) -> bool:
        return bool(self.order[a, b])

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def ortho(self, a: int) -> int:
        return int(self.ortho_map[a])

    def sasaki(self, a: int, b: int) -> int:
        """Sasaki projection of ``a`` onto ``b``: b ∧ (a ∨ b⊥)."""
        return int(self.sasaki_table[a, b])

    @property
    def sasaki_table(self) -> np.ndarray:
        table = self.__dict__.get("_sasaki")
        if table is None:
            # table[a, b] = meet(b, join(a, ortho(b)))
            j = self.join_table[:, self.ortho_map]
            table = self.meet_table[np.arange(self.n)[None, :], j]
            table.setflags(write=False)
            object.__setattr__(self, "_sasaki", table)
        return table

    def up(self, x: int) -> np.ndarray:
        """Indices of the elements above ``x``."""
        return np.flatnonzero(self.order[x])

    def down(self, x: int) -> np.ndarray:
        return np.flatnonzero(self.order[:, x])

    def atoms_below(self, x: int) -> frozenset:
        return frozenset(a for a in self.atoms if self.order[a, x])

    def is_atom(self, x: int) -> bool:
        return x in self.atoms

    def is_atomic(self) -> bool:
        """Every non-bottom element has an atom below it."""
        atom_mask = np.zeros(self.n, dtype=bool)
        atom_mask[list(self.atoms)] = True
        covered = self.order[atom_mask].any(axis=0)
        covered[self.bottom] = True
        return bool(covered.all())

    def has_atom_projection(self) -> bool:
        """a & b is bottom or an atom for every atom a and every element b."""
        allowed = set(self.atoms) | {self.bottom}
        rows = self.sasaki_table[list(self.atoms)]
        return all(int(x) in allowed for x in np.unique(rows))

    def to_spec(self) -> RawLatticeSpec:
        pairs = tuple((int(i), int(j)) for i, j in zip(*np.nonzero(self.order)) if i != j)
        ortho = {self.names[i]: self.names[int(o)] for i, o in enumerate(self.ortho_map)}
        return RawLatticeSpec(self.names, pairs, ortho, kind="full")

    def covers(self) -> List[Tuple[int, int]]:
        """Hasse diagram edges (x, y) with x covered by y."""
        strict = self.order.copy()
        np.fill_diagonal(strict, False)
        si = strict.astype(np.int32)
        # x < z < y for some z
        between = (si @ si) > 0
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(strict & ~between))]


def _bounds_table(order: np.ndarray, names: Sequence[str], lower: bool) -> np.ndarray:
    n = order.shape[0]
    table = np.empty((n, n), dtype=np.int64)
    kind = "meet" if lower else "join"
    for a in range(n):
        for b in range(a, n):
            if lower:
                cand = order[:, a] & order[:, b]
                # greatest lower bound: the candidate above every other candidate
                best = np.flatnonzero(cand & order[cand].all(axis=0))
            else:
                cand = order[a] & order[b]
                best = np.flatnonzero(cand & order[:, cand].all(axis=1))
            if best.size != 1:
                raise NotALattice(
                    f"elements {names[a]!r} and {names[b]!r} have no {kind}",
                    (names[a], names[b]),
                )
            table[a, b] = table[b, a] = best[0]
    return table


def validate(spec: RawLatticeSpec) -> FiniteOml:
    """Check a raw spec and build the corresponding :class:`FiniteOml`.

    Raises the first failing stage among NotAPoset, NotALattice,
    NotAnOrtholattice and NotOrthomodular, naming a witnessing pair.
    """
    names = tuple(spec.names)
    n = len(names)
    if n < 2:
        raise SizeLimit("a lattice needs distinct bottom and top (n >= 2)")
    rel = np.zeros((n, n), dtype=bool)
    for i, j in spec.pairs:
        rel[i, j] = True
    if spec.kind == "covers":
        order = transitive_closure(rel)
    else:
        order = rel.copy()
        np.fill_diagonal(order, True)
        comp = (order.astype(np.int32) @ order.astype(np.int32)) > 0
        bad = np.argwhere(comp & ~order)
        if bad.size:
            i, j = bad[0]
            raise NotAPoset(f"order is not transitive at ({names[i]!r}, {names[j]!r})", (names[i], names[j]))
    sym = order & order.T
    np.fill_diagonal(sym, False)
    if sym.any():
        i, j = np.argwhere(sym)[0]
        raise NotAPoset(f"order is not antisymmetric: {names[i]!r} and {names[j]!r}", (names[i], names[j]))

    meet = _bounds_table(order, names, lower=True)
    join = _bounds_table(order, names, lower=False)
    bottoms = np.flatnonzero(order.all(axis=1))
    tops = np.flatnonzero(order.all(axis=0))
    bottom, top = int(bottoms[0]), int(tops[0])

    if set(spec.ortho) != set(names):
        missing = sorted(set(names) - set(spec.ortho))
        raise NotAnOrtholattice(f"orthocomplement undefined for {missing}", tuple(missing[:1]))
    index = {name: i for i, name in enumerate(names)}
    ortho = np.array([index[spec.ortho[name]] for name in names], dtype=np.int64)
    for x in range(n):
        if ortho[ortho[x]] != x:
            raise NotAnOrtholattice(f"orthocomplement is not an involution at {names[x]!r}",
                                    (names[x], names[ortho[x]]))
        if join[x, ortho[x]] != top or meet[x, ortho[x]] != bottom:
            raise NotAnOrtholattice(f"{names[x]!r} and its orthocomplement are not complements",
                                    (names[x], names[ortho[x]]))
    for a, b in zip(*np.nonzero(order)):
        if not order[ortho[b], ortho[a]]:
            raise NotAnOrtholattice(f"orthocomplement is not order-reversing on ({names[a]!r}, {names[b]!r})",
                                    (names[a], names[b]))
    for a, b in zip(*np.nonzero(order)):
        if join[a, meet[b, ortho[a]]] != b:
            raise NotOrthomodular(f"orthomodular law fails for {names[a]!r} <= {names[b]!r}",
                                  (names[a], names[b]))

    strict_up = order.copy()
    np.fill_diagonal(strict_up, False)
    atoms = tuple(int(x) for x in np.flatnonzero(strict_up[bottom])
                  if order[:, x].sum() == 2)
    return FiniteOml(names, order, ortho, meet, join, bottom, top, atoms)


def from_order(names: Sequence[str], leq, ortho: Dict[str, str]) -> FiniteOml:
    """Build from a predicate ``leq(i, j)`` over indices."""
    n = len(names)
    pairs = tuple((i, j) for i in range(n) for j in range(n) if i != j and leq(i, j))
    return validate(RawLatticeSpec(tuple(names), pairs, dict(ortho), kind="full"))


def gen_boolean(k: int, max_k: int = BOOLEAN_MAX_K) -> FiniteOml:
    """Powerset of ``k`` points, ordered by inclusion, ortho = set complement.

    Atoms are named ``p1..pk``; other elements join atom names with ``+``;
    the bounds are ``0`` and ``1``.
    """
    if k < 1:
        raise SizeLimit("gen_boolean needs k >= 1 (k = 0 has bottom == top)")
    if k > max_k:
        raise SizeLimit(f"gen_boolean(k={k}) exceeds cap {max_k}")
    full = (1 << k) - 1

    def label(mask):
        if mask == 0:
            return "0"
        if mask == full:
            return "1"
        return "+".join(f"p{i + 1}" for i in range(k) if mask >> i & 1)

    masks = sorted(range(1 << k), key=lambda m: (bin(m).count("1"), m))
    names = [label(m) for m in masks]
    ortho = {label(m): label(full ^ m) for m in masks}
    return from_order(names, lambda i, j: masks[i] & ~masks[j] == 0, ortho)


def _mo_atom(i: int, k: int) -> str:
    return "abcdefghijklmnopqrstuvwxyz"[i] if k <= 26 else f"a{i + 1}"


def gen_mo(k: int) -> FiniteOml:
    """MO(k): bottom, top and ``k`` orthogonal atom pairs named a, a', b, b', ...

    Past 26 pairs the names fall back to a1, a1', a2, ...
    """
    if k < 1:
        raise SizeLimit("gen_mo needs k >= 1")
    if k > MO_MAX_K:
        raise SizeLimit(f"gen_mo(k={k}) exceeds cap {MO_MAX_K}")
    letters = [_mo_atom(i, k) for i in range(k)]
    names = ["0", *[x for a in letters for x in (a, a + "'")], "1"]
    ortho = {"0": "1", "1": "0"}
    for a in letters:
        ortho[a] = a + "'"
        ortho[a + "'"] = a
    last = len(names) - 1
    return from_order(names, lambda i, j: i == 0 or j == last, ortho)


def gen_product(l1: FiniteOml, l2: FiniteOml) -> FiniteOml:
    """Direct product with pointwise order and pointwise orthocomplement."""
    elems = list(itertools.product(range(l1.n), range(l2.n)))
    names = [f"({l1.names[x]},{l2.names[y]})" for x, y in elems]
    ortho = {f"({l1.names[x]},{l2.names[y]})": f"({l1.names[l1.ortho(x)]},{l2.names[l2.ortho(y)]})"
             for x, y in elems}
    return from_order(
        names,
        lambda i, j: l1.order[elems[i][0], elems[j][0]] and l2.order[elems[i][1], elems[j][1]],
        ortho,
    )


def gen_horizontal_sum(l1: FiniteOml, l2: FiniteOml) -> FiniteOml:
    """Glue two lattices along their bounds; the middle parts stay incomparable.

    Middle elements of ``l2`` get a ``'`` suffix appended while their name
    clashes with one already taken.
    """
    names = ["0"]
    origin = [None]
    for src, lat in ((1, l1), (2, l2)):
        for x in range(lat.n):
            if x in (lat.bottom, lat.top):
                continue
            label = lat.names[x]
            while label in names or label == "1":
                label += "'" if src == 2 else "^"
            names.append(label)
            origin.append((src, x))
    names.append("1")
    origin.append(None)
    pos = {o: i for i, o in enumerate(origin) if o is not None}
    last = len(names) - 1
    ortho = {"0": "1", "1": "0"}
    for i, o in enumerate(origin):
        if o is None:
            continue
        src, x = o
        lat = l1 if src == 1 else l2
        ortho[names[i]] = names[pos[(src, lat.ortho(x))]]

    def leq(i, j):
        if i == 0 or j == last:
            return True
        if j == 0 or i == last:
            return False
        (s1, x), (s2, y) = origin[i], origin[j]
        lat = l1 if s1 == 1 else l2
        return s1 == s2 and bool(lat.order[x, y])

    return from_order(names, leq, ortho)


def gen_greechie(blocks: Sequence[Sequence[str]]) -> FiniteOml:
    """Paste boolean blocks along shared atoms (Greechie-diagram construction).

    Each block is a list of atom names; two blocks may share at most one atom.
    An element is a subset of one block; the bounds, the shared atoms and their
    complements are identified across blocks. The result is validated, so
    diagrams with short loops are rejected with the appropriate error.
    """
    blocks = [tuple(b) for b in blocks]
    for b1, b2 in itertools.combinations(blocks, 2):
        if len(set(b1) & set(b2)) > 1:
            raise ValueError("Greechie blocks may share at most one atom")
    if sum(2 ** len(b) for b in blocks) > 4096:
        raise SizeLimit("Greechie diagram too large")

    def canon(bi, subset):
        block = blocks[bi]
        subset = frozenset(subset)
        if not subset:
            return ("0",)
        if len(subset) == len(block):
            return ("1",)
        if len(subset) == 1:
            return ("atom", next(iter(subset)))
        if len(subset) == len(block) - 1:
            (missing,) = set(block) - subset
            return ("co", missing)
        return ("el", bi, subset)

    members = {}  # canonical key -> list of (block, subset)
    for bi, block in enumerate(blocks):
        for r in range(len(block) + 1):
            for sub in itertools.combinations(block, r):
                members.setdefault(canon(bi, sub), []).append((bi, frozenset(sub)))

    def label(key):
        if key[0] in ("0", "1"):
            return key[0]
        if key[0] == "atom":
            return key[1]
        if key[0] == "co":
            return key[1] + "'"
        return "+".join(sorted(key[2]))

    keys = sorted(members, key=lambda k: (len(members[k][0][1]), label(k)))
    keys.sort(key=lambda k: {"0": 0, "1": 2}.get(k[0], 1))
    names = [label(k) for k in keys]

    def leq(i, j):
        for bi, s in members[keys[i]]:
            for bj, t in members[keys[j]]:
                if bi == bj and s <= t:
                    return True
        return False

    ortho = {}
    for key in keys:
        bi, s = members[key][0]
        comp = canon(bi, set(blocks[bi]) - s)
        ortho[label(key)] = label(comp)
    return from_order(names, leq, ortho)
