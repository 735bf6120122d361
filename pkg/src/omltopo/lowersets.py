"""Lower sets of finite posets with the ¬ complement, the ¬¬ closure and the smashed product."""
from __future__ import annotations

from typing import Dict, Iterable, List, Tuple

import numpy as np

from .lattice import FiniteOml


class NotALowerSet(ValueError):
    pass


class FinitePoset:
    """Finite poset with a least element, stored as a boolean order matrix."""

    def __init__(self, order: np.ndarray, bottom: int | None = None):
        order = np.asarray(order, dtype=bool)
        n = order.shape[0]
        if order.shape != (n, n) or not order.diagonal().all():
            raise ValueError("order must be a reflexive square matrix")
        strict_sym = order & order.T
        np.fill_diagonal(strict_sym, False)
        if strict_sym.any():
            raise ValueError("order is not antisymmetric")
        oi = order.astype(np.int32)
        if ((oi @ oi > 0) & ~order).any():
            raise ValueError("order is not transitive")
        least = np.flatnonzero(order.all(axis=1))
        if least.size != 1:
            raise ValueError("poset has no least element")
        if bottom is not None and bottom != least[0]:
            raise ValueError(f"element {bottom} is not the least element")
        self.order = order
        self.order.setflags(write=False)
        self.bottom = int(least[0])
        # atoms: exactly two elements (bottom and itself) below
        below = order.sum(axis=0)
        self.atoms = tuple(int(x) for x in np.flatnonzero(below == 2))

    @classmethod
    def from_oml(cls, lat: FiniteOml) -> "FinitePoset":
        return cls(np.array(lat.order), lat.bottom)

    @property
    def n(self) -> int:
        return self.order.shape[0]

    def atoms_below(self, x: int) -> frozenset:
        return frozenset(a for a in self.atoms if self.order[a, x])

    def is_atomic(self) -> bool:
        covered = self.order[list(self.atoms)].any(axis=0) if self.atoms else np.zeros(self.n, bool)
        covered[self.bottom] = True
        return bool(covered.all())

    def mask(self, members: Iterable[int]) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[list(members)] = True
        return m

    def down_closure(self, members: Iterable[int]) -> "LowerSet":
        m = self.mask(members)
        return LowerSet(self, self.order[:, m].any(axis=1) | self._bottom_mask())

    def _bottom_mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[self.bottom] = True
        return m

    def empty(self) -> "LowerSet":
        return LowerSet(self, np.zeros(self.n, dtype=bool))

    def full(self) -> "LowerSet":
        return LowerSet(self, np.ones(self.n, dtype=bool))

    def bottom_only(self) -> "LowerSet":
        return LowerSet(self, self._bottom_mask())


def is_lower_set(poset: FinitePoset, subset) -> bool:
    """True iff every element below a member is itself a member."""
    mask = np.asarray(subset, dtype=bool) if _is_mask(subset, poset.n) else poset.mask(subset)
    # y <= x with x in S and y not in S
    return not (poset.order[~mask][:, mask]).any()


def _is_mask(subset, n) -> bool:
    return isinstance(subset, np.ndarray) and subset.dtype == bool and subset.shape == (n,)


class LowerSet:
    """Downward-closed subset of a :class:`FinitePoset`, held as a boolean mask."""

    __slots__ = ("host", "mask")

    def __init__(self, host: FinitePoset, mask):
        mask = np.array(mask, dtype=bool)
        if mask.shape != (host.n,):
            raise ValueError("mask length does not match the host poset")
        if not is_lower_set(host, mask):
            raise NotALowerSet("subset is not downward closed")
        mask.setflags(write=False)
        self.host = host
        self.mask = mask

    @property
    def members(self) -> frozenset:
        return frozenset(int(x) for x in np.flatnonzero(self.mask))

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __iter__(self):
        return iter(int(x) for x in np.flatnonzero(self.mask))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LowerSet):
            return NotImplemented
        return self.host is other.host and bool((self.mask == other.mask).all())

    def __hash__(self):
        return hash((id(self.host), self.mask.tobytes()))

    def __le__(self, other: "LowerSet") -> bool:
        return not (self.mask & ~other.mask).any()

    def __and__(self, other: "LowerSet") -> "LowerSet":
        return LowerSet(self.host, self.mask & other.mask)

    def __or__(self, other: "LowerSet") -> "LowerSet":
        return LowerSet(self.host, self.mask | other.mask)

    def __repr__(self) -> str:
        return f"LowerSet({sorted(self.members)})"


def complement_neg(ideal: LowerSet) -> LowerSet:
    """¬I: elements x such that every y <= x lying in I is the bottom."""
    host = ideal.host
    nonzero = ideal.mask.copy()
    nonzero[host.bottom] = False
    # x is excluded iff some nonzero member of I lies below it
    hit = host.order[nonzero].any(axis=0)
    return LowerSet(host, ~hit)


def closure_negneg(ideal: LowerSet) -> LowerSet:
    return complement_neg(complement_neg(ideal))


class SmashedPoset(FinitePoset):
    """⊥-smashed product P^{#2}: pairs with both coordinates nonzero, plus (⊥, ⊥).

    Elements are densely re-indexed; ``pairs[i]`` gives the base pair of
    element ``i`` and :meth:`index` maps back, sending any pair with a bottom
    coordinate to the single bottom element.
    """

    def __init__(self, base: FinitePoset):
        bot = base.bottom
        nz = [x for x in range(base.n) if x != bot]
        pairs: List[Tuple[int, int]] = [(bot, bot)] + [(a, b) for a in nz for b in nz]
        first = np.array([p[0] for p in pairs])
        second = np.array([p[1] for p in pairs])
        order = base.order[np.ix_(first, first)] & base.order[np.ix_(second, second)]
        super().__init__(order, 0)
        self.base = base
        self.pairs = tuple(pairs)
        lookup = np.zeros((base.n, base.n), dtype=np.int64)
        for i, (a, b) in enumerate(pairs):
            lookup[a, b] = i
        # any pair with a bottom coordinate collapses to (⊥, ⊥), stored at index 0
        lookup.setflags(write=False)
        self.lookup = lookup
        self.first = first
        self.second = second

    def index(self, a: int, b: int) -> int:
        return int(self.lookup[a, b])

    def pair_mask(self, lower: LowerSet) -> np.ndarray:
        """Lift a lower set of P^{#2} to a base-indexed n×n membership matrix."""
        return lower.mask[self.lookup]

    def from_pair_predicate(self, pred) -> np.ndarray:
        return np.array([bool(pred(a, b)) for a, b in self.pairs])


def smashed_product(poset) -> SmashedPoset:
    if isinstance(poset, FiniteOml):
        poset = FinitePoset.from_oml(poset)
    return SmashedPoset(poset)


def names_of(lower: LowerSet, names: Dict[int, str] | Tuple[str, ...]) -> List[str]:
    """Sorted element names, the serialized form of a lower set."""
    return sorted(names[x] for x in lower)
