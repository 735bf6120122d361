"""Relation families R_n, neighbourhood balls and openness on finite OMLs.

Three families are supported:

``at``       relations on pairs of atoms and balls of atoms
``lattice``  balls on the whole lattice built from the atom family
``general``  the atom-free construction on the smashed product L^{#2}

On a finite lattice every increasing chain of relations stabilizes, so the
union R_∞ is realized exactly as the first fixpoint R_{n*}.
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .lattice import FiniteOml
from .lowersets import FinitePoset, LowerSet, SmashedPoset, closure_negneg, complement_neg, is_lower_set

FAMILIES = ("at", "lattice", "general")


class NotAtomic(ValueError):
    pass


class NoAtomProjection(ValueError):
    pass


class NotAnAtom(ValueError):
    pass


class StepNotLowerSet(RuntimeError):
    """A pre-closure set failed to be downward closed (should be impossible on an OML)."""


def _require_atom_hypotheses(lat: FiniteOml):
    if not lat.is_atomic():
        raise NotAtomic("lattice is not atomic")
    if not lat.has_atom_projection():
        raise NoAtomProjection("Sasaki projection of some atom is neither bottom nor an atom")


@dataclass(frozen=True)
class RnProfile:
    """The chain R_0 ⊆ R_1 ⊆ ... ⊆ R_{n*} up to its first repeat.

    For ``kind == "atom"`` each relation is an m×m boolean matrix over
    ``lat.atoms``; for ``kind == "general"`` each is a :class:`LowerSet`
    of the smashed product.
    """

    kind: str
    relations: Tuple
    stabilization: int
    smashed: Optional[SmashedPoset] = None

    def relation(self, n: int):
        if n < 0:
            raise ValueError("n must be non-negative")
        return self.relations[min(n, self.stabilization)]

    @property
    def infinity(self):
        return self.relations[self.stabilization]


def r_at_profile(lat: FiniteOml, max_steps: Optional[int] = None) -> RnProfile:
    """Atom relations: R_0 = {(a,b) : a <= b⊥}, then
    R_{k+1} = {(a,b) : some (a',b') >= (a,b) has (a & b', b & a') in R_k}."""
    _require_atom_hypotheses(lat)
    atoms = np.array(lat.atoms, dtype=np.int64)
    m = len(atoms)
    sas = lat.sasaki_table
    r0 = lat.order[np.ix_(atoms, lat.ortho_map[atoms])]
    ups = [lat.up(a) for a in atoms]
    relations = [r0]
    limit = max_steps if max_steps is not None else m * m + 1
    while len(relations) <= limit:
        prev = relations[-1]
        full = np.zeros((lat.n, lat.n), dtype=bool)
        full[np.ix_(atoms, atoms)] = prev
        nxt = np.zeros((m, m), dtype=bool)
        for i, a in enumerate(atoms):
            for j, b in enumerate(atoms):
                # rows: a & b' for b' >= b; cols: b & a' for a' >= a
                nxt[i, j] = full[np.ix_(sas[a, ups[j]], sas[b, ups[i]])].any()
        if (nxt == prev).all():
            break
        relations.append(nxt)
    else:
        raise RuntimeError("atom relations did not stabilize within max_steps")
    for r in relations:
        r.setflags(write=False)
    return RnProfile("atom", tuple(relations), len(relations) - 1)


def _step_set(lat: FiniteOml, sp: SmashedPoset, prev: LowerSet) -> np.ndarray:
    """Pre-closure set {(a,b) in L^{#2} : some (a',b') >= (a,b) has (a & b', b & a') in prev}."""
    full = sp.pair_mask(prev)
    sas = lat.sasaki_table
    ups = [lat.up(x) for x in range(lat.n)]
    out = np.zeros(sp.n, dtype=bool)
    for i, (a, b) in enumerate(sp.pairs):
        out[i] = full[np.ix_(sas[a, ups[b]], sas[b, ups[a]])].any()
    return out


def r_general_profile(lat: FiniteOml, max_steps: Optional[int] = None) -> RnProfile:
    """General relations on L^{#2}: R_0 = ¬¬{(a,b) : a <= b⊥}, R_{k+1} = ¬¬(step set of R_k)."""
    sp = SmashedPoset(FinitePoset.from_oml(lat))
    orth = np.array([lat.order[a, lat.ortho_map[b]] for a, b in sp.pairs])
    if not is_lower_set(sp, orth):
        raise StepNotLowerSet("orthogonality set is not a lower set of L^{#2}")
    relations = [closure_negneg(LowerSet(sp, orth))]
    limit = max_steps if max_steps is not None else sp.n + 1
    while len(relations) <= limit:
        pre = _step_set(lat, sp, relations[-1])
        if not is_lower_set(sp, pre):
            raise StepNotLowerSet(f"step {len(relations)} produced a set that is not downward closed")
        nxt = closure_negneg(LowerSet(sp, pre))
        if nxt == relations[-1]:
            break
        relations.append(nxt)
    else:
        raise RuntimeError("general relations did not stabilize within max_steps")
    return RnProfile("general", tuple(relations), len(relations) - 1, smashed=sp)


def _any_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int32) @ b.astype(np.int32)) > 0


def _nonzero_below(lat: FiniteOml) -> np.ndarray:
    nz = np.array(lat.order)
    nz[lat.bottom, :] = False
    return nz  # [y, x]: bottom < y <= x


def _atom_below(lat: FiniteOml) -> np.ndarray:
    return np.array(lat.order[list(lat.atoms)]).T  # [x, i]: atom i <= x


def lattice_balls(lat: FiniteOml, atom_balls: np.ndarray, keep_vacuous: bool = False) -> np.ndarray:
    """Lattice balls from an atom-ball matrix ``atom_balls[i, j]`` (atom j in B(atom i)).

    b is in the ball of a iff every atom of a has an atom of b in its ball and
    every atom of b has an atom of a in its ball. Returns an n×n matrix.
    """
    ab = _atom_below(lat)
    reach = _any_matmul(atom_balls, ab.T)      # reach[i, b]: some atom y of b lies in B(x_i)
    clause1 = ~_any_matmul(ab, ~reach)         # every atom x of a reaches b
    back = _any_matmul(atom_balls, ab.T)       # back[j, a]: some atom x of a lies in B(y_j)
    clause2 = ~_any_matmul(ab, ~back).T
    return _drop_vacuous(lat, clause1 & clause2, keep_vacuous)


def general_balls(lat: FiniteOml, sp: SmashedPoset, r_inf: LowerSet, r_n: LowerSet,
                  keep_vacuous: bool = False) -> np.ndarray:
    """General balls from two lower sets of L^{#2}; literal ∀∃∃ evaluation over
    nonzero elements, with D = r_inf ∩ ¬r_n. Returns an n×n matrix [a, b]."""
    dist = np.array(sp.pair_mask(r_inf & complement_neg(r_n)))
    # quantifiers range over nonzero elements, so pairs with a bottom coordinate never qualify
    dist[lat.bottom, :] = False
    dist[:, lat.bottom] = False
    nzb = _nonzero_below(lat)
    # clause 1: ∀a' ≤≠⊥ a ∃a'' ≤≠⊥ a' ∃b' ≤≠⊥ b: (a'', b') in D
    e = _any_matmul(dist, nzb)          # e[x, b]: ∃b' ≤≠⊥ b with (x, b') in D
    f = _any_matmul(nzb.T, e)           # f[a', b]: ∃a'' ≤≠⊥ a' with e[a'', b]
    clause1 = ~_any_matmul(nzb.T, ~f)   # ∀a' ≤≠⊥ a: f[a', b]
    # clause 2: ∀b' ≤≠⊥ b ∃b'' ≤≠⊥ b' ∃a' ≤≠⊥ a: (a', b'') in D
    g = _any_matmul(nzb.T, dist)        # g[a, y]: ∃a' ≤≠⊥ a with (a', y) in D
    h = _any_matmul(g, nzb)             # h[a, b']: ∃b'' ≤≠⊥ b' with g[a, b'']
    clause2 = ~_any_matmul(~h, nzb)     # ∀b' ≤≠⊥ b: h[a, b']
    return _drop_vacuous(lat, clause1 & clause2, keep_vacuous)


def is_open_under(ball, subset: Iterable[int], horizon: int) -> bool:
    """Openness against a ball family ``ball(a, n)``: each member has some ball
    with index n <= horizon inside the subset. Complete whenever the balls
    decrease in n and are empty from ``horizon`` on."""
    subset = frozenset(subset)
    return all(any(ball(a, n) <= subset for n in range(horizon + 1)) for a in subset)


def _drop_vacuous(lat: FiniteOml, balls: np.ndarray, keep: bool) -> np.ndarray:
    # (⊥, ⊥) meets both clauses vacuously; balls are taken over nonzero pairs
    if not keep:
        balls[lat.bottom, lat.bottom] = False
    balls.setflags(write=False)
    return balls


class Engine:
    """Lazily computed profiles and balls for one lattice."""

    def __init__(self, lat: FiniteOml):
        self.lat = lat
        self._at: Optional[RnProfile] = None
        self._general: Optional[RnProfile] = None

    @property
    def at_profile(self) -> RnProfile:
        if self._at is None:
            self._at = r_at_profile(self.lat)
        return self._at

    @property
    def general_profile(self) -> RnProfile:
        if self._general is None:
            self._general = r_general_profile(self.lat)
        return self._general

    def stabilization(self, family: str) -> int:
        return (self.general_profile if family == "general" else self.at_profile).stabilization

    @functools.lru_cache(maxsize=None)
    def at_ball_matrix(self, n: int) -> np.ndarray:
        """[i, j] true iff atom j lies in the atom ball of radius index n around atom i."""
        prof = self.at_profile
        return prof.infinity & ~prof.relation(n)

    @functools.lru_cache(maxsize=None)
    def lattice_ball_matrix(self, n: int) -> np.ndarray:
        """[a, b] true iff b is in the lattice ball of a (atom quantifier form)."""
        return lattice_balls(self.lat, self.at_ball_matrix(n))

    @functools.lru_cache(maxsize=None)
    def general_ball_matrix(self, n: int) -> np.ndarray:
        """[a, b] true iff b is in the general ball of a."""
        prof = self.general_profile
        return general_balls(self.lat, prof.smashed, prof.infinity, prof.relation(n))

    def ball(self, family: str, a: int, n: int) -> frozenset:
        if n < 0:
            raise ValueError("n must be non-negative")
        if family == "at":
            try:
                i = self.lat.atoms.index(a)
            except ValueError:
                raise NotAnAtom(f"{self.lat.names[a]!r} is not an atom") from None
            row = self.at_ball_matrix(n)[i]
            return frozenset(self.lat.atoms[j] for j in np.flatnonzero(row))
        mat = self.lattice_ball_matrix(n) if family == "lattice" else self.general_ball_matrix(n)
        return frozenset(int(b) for b in np.flatnonzero(mat[a]))

    def is_open(self, subset: Iterable[int], family: str) -> bool:
        subset = frozenset(subset)
        if family == "at" and not subset <= set(self.lat.atoms):
            raise ValueError("subset for the atom family must consist of atoms")
        horizon = self.stabilization(family) + 1
        return is_open_under(lambda a, n: self.ball(family, a, n), subset, horizon)

    def isolated_points(self, family: str) -> frozenset:
        carrier = self.lat.atoms if family == "at" else range(self.lat.n)
        return frozenset(a for a in carrier if self.is_open({a}, family))

    def first_empty_ball(self, family: str, a: int) -> int:
        n = 0
        while self.ball(family, a, n):
            n += 1
        return n


@functools.lru_cache(maxsize=64)
def engine(lat: FiniteOml) -> Engine:
    """Shared, cached :class:`Engine` for ``lat`` (FiniteOml hashes by identity)."""
    if lat.order.shape[0] == 0:
        raise ValueError("empty lattice")
    return Engine(lat)


def _check_family(family: str):
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")


def ball_at(lat: FiniteOml, a: int, n: int) -> frozenset:
    """Atoms b with (a, b) in R_∞ but not in R_n."""
    return engine(lat).ball("at", a, n)


def ball_lattice(lat: FiniteOml, a: int, n: int) -> frozenset:
    _require_atom_hypotheses(lat)
    return engine(lat).ball("lattice", a, n)


def ball_general(lat: FiniteOml, a: int, n: int) -> frozenset:
    return engine(lat).ball("general", a, n)


def is_open(lat: FiniteOml, subset: Iterable[int], family: str = "general") -> bool:
    _check_family(family)
    return engine(lat).is_open(subset, family)


def isolated_points(lat: FiniteOml, family: str = "general") -> frozenset:
    _check_family(family)
    return engine(lat).isolated_points(family)


@dataclass
class TopologyReport:
    kind: str
    stabilization: int
    relations: List[dict]
    isolated: List[str]
    balls: Dict[str, Dict[str, List[str]]]
    first_empty: Dict[str, int]
    openness: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "stabilization": self.stabilization,
            "relations": self.relations,
            "isolated": self.isolated,
            "balls": self.balls,
            "first_empty": self.first_empty,
            "openness": self.openness,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)


def relation_pairs(lat: FiniteOml, profile: RnProfile, n: int) -> List[List[int]]:
    """Members of R_n as base-lattice index pairs, sorted."""
    rel = profile.relation(n)
    if profile.kind == "atom":
        return sorted([lat.atoms[i], lat.atoms[j]] for i, j in zip(*np.nonzero(rel)))
    sp = profile.smashed
    return sorted(list(sp.pairs[i]) for i in rel)


def topology_report(
    lat: FiniteOml,
    family: str = "general",
    max_n: Optional[int] = None,
    queries: Optional[Dict[str, Iterable[int]]] = None,
) -> TopologyReport:
    """Aggregate profile, balls and isolated points into a deterministic report.

    ``max_n`` bounds the ball radii emitted; it defaults to n* + 1.
    """
    _check_family(family)
    eng = engine(lat)
    prof = eng.general_profile if family == "general" else eng.at_profile
    top_n = prof.stabilization + 1 if max_n is None else max_n
    carrier = lat.atoms if family == "at" else range(lat.n)
    names = lat.names
    relations = [{"n": k, "pairs": relation_pairs(lat, prof, k)} for k in range(prof.stabilization + 1)]
    balls = {
        names[a]: {str(k): sorted(names[b] for b in eng.ball(family, a, k)) for k in range(top_n + 1)}
        for a in carrier
    }
    report = TopologyReport(
        kind=family,
        stabilization=prof.stabilization,
        relations=relations,
        isolated=sorted(names[a] for a in eng.isolated_points(family)),
        balls=balls,
        first_empty={names[a]: eng.first_empty_ball(family, a) for a in carrier},
    )
    for label, subset in (queries or {}).items():
        report.openness[label] = eng.is_open(subset, family)
    return report
