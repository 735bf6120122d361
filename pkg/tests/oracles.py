"""Brute-force reference implementations used as independent oracles.

Everything here works from the order relation and the orthocomplement alone,
with plain Python sets: no meet/join tables, no Sasaki table, no lower-set
classes and no smashed-product indexing from the package. Pairs that have
exactly one bottom coordinate are simply treated as non-members, the other
natural reading of the smashed product.
"""
import itertools
import random


class NaiveOml:
    def __init__(self, lat):
        self.n = lat.n
        self.elems = list(range(lat.n))
        self.le_ = [[bool(lat.order[i, j]) for j in range(lat.n)] for i in range(lat.n)]
        self.ort = [int(lat.ortho_map[i]) for i in range(lat.n)]
        self.bot = next(x for x in self.elems if all(self.le(x, y) for y in self.elems))
        self.top = next(x for x in self.elems if all(self.le(y, x) for y in self.elems))
        self.atoms = [x for x in self.elems
                      if x != self.bot and all(y in (self.bot, x) for y in self.elems if self.le(y, x))]

    def le(self, a, b):
        return self.le_[a][b]

    def meet(self, a, b):
        lbs = [x for x in self.elems if self.le(x, a) and self.le(x, b)]
        (g,) = [x for x in lbs if all(self.le(y, x) for y in lbs)]
        return g

    def join(self, a, b):
        ubs = [x for x in self.elems if self.le(a, x) and self.le(b, x)]
        (g,) = [x for x in ubs if all(self.le(x, y) for y in ubs)]
        return g

    def sasaki(self, a, b):
        return self.meet(b, self.join(a, self.ort[b]))

    def atoms_below(self, x):
        return {a for a in self.atoms if self.le(a, x)}

    def up(self, x):
        return [y for y in self.elems if self.le(x, y)]

    def nz_down(self, x):
        return [y for y in self.elems if y != self.bot and self.le(y, x)]


def orthomodular_violations(names, le, ortho):
    """All pairs (a, b) with a <= b and b != a ∨ (b ∧ a⊥), by exhaustive search.

    ``le`` is a predicate on indices, ``ortho`` an index list.
    """
    n = len(names)
    elems = range(n)

    def meet(a, b):
        lbs = [x for x in elems if le(x, a) and le(x, b)]
        return [x for x in lbs if all(le(y, x) for y in lbs)][0]

    def join(a, b):
        ubs = [x for x in elems if le(a, x) and le(b, x)]
        return [x for x in ubs if all(le(x, y) for y in ubs)][0]

    return [(names[a], names[b]) for a in elems for b in elems
            if le(a, b) and join(a, meet(b, ortho[a])) != b]


# -- lower sets over an explicit poset ----------------------------------------

def neg(elements, le, bot, ideal):
    return {x for x in elements if all(y not in ideal or y == bot for y in elements if le(y, x))}


def is_down_closed(elements, le, subset):
    return all(y in subset for x in subset for y in elements if le(y, x))


def random_poset(rng: random.Random, n: int):
    """Random poset on 0..n-1 with 0 as least element; returns an n×n list of bools."""
    rel = [[i == j or i == 0 for j in range(n)] for i in range(n)]
    for i in range(1, n):
        for j in range(i + 1, n):
            if rng.random() < 0.3:
                rel[i][j] = True
    for k in range(n):
        for i in range(n):
            if rel[i][k]:
                for j in range(n):
                    if rel[k][j]:
                        rel[i][j] = True
    return rel


def random_lower_set(rng: random.Random, rel):
    n = len(rel)
    gens = {x for x in range(n) if rng.random() < 0.35}
    if rng.random() < 0.9:
        gens.add(0)
    return {y for x in gens for y in range(n) if rel[y][x]}


# -- relation families --------------------------------------------------------

def smash(nv):
    nz = [x for x in nv.elems if x != nv.bot]
    return [(nv.bot, nv.bot)] + [(a, b) for a in nz for b in nz]


def _pair_le(nv, p, q):
    return nv.le(p[0], q[0]) and nv.le(p[1], q[1])


def general_relations(nv, max_steps=50):
    """R_0, R_1, ... on the smashed product until the first repeat."""
    carrier = smash(nv)
    bottom = (nv.bot, nv.bot)

    def nn(s):
        return neg(carrier, lambda p, q: _pair_le(nv, p, q), bottom,
                   neg(carrier, lambda p, q: _pair_le(nv, p, q), bottom, s))

    rels = [nn({(a, b) for a, b in carrier if nv.le(a, nv.ort[b])})]
    for _ in range(max_steps):
        prev = rels[-1]
        step = {(a, b) for a, b in carrier
                if any((nv.sasaki(a, b2), nv.sasaki(b, a2)) in prev
                       for a2 in nv.up(a) for b2 in nv.up(b))}
        nxt = nn(step)
        if nxt == prev:
            return rels
        rels.append(nxt)
    raise RuntimeError("no fixpoint")


def atom_relations(nv, max_steps=50):
    at = nv.atoms
    rels = [{(a, b) for a in at for b in at if nv.le(a, nv.ort[b])}]
    for _ in range(max_steps):
        prev = rels[-1]
        nxt = {(a, b) for a in at for b in at
               if any((nv.sasaki(a, b2), nv.sasaki(b, a2)) in prev
                      for a2 in nv.up(a) for b2 in nv.up(b))}
        if nxt == prev:
            return rels
        rels.append(nxt)
    raise RuntimeError("no fixpoint")


def general_ball(nv, r_inf, r_n, a, keep_vacuous=False):
    """Literal two-clause evaluation over elements strictly above bottom."""
    carrier = smash(nv)
    bottom = (nv.bot, nv.bot)
    d = r_inf & neg(carrier, lambda p, q: _pair_le(nv, p, q), bottom, r_n)
    out = set()
    for b in nv.elems:
        c1 = all(any((a2, b1) in d for a2 in nv.nz_down(a1) for b1 in nv.nz_down(b))
                 for a1 in nv.nz_down(a))
        c2 = all(any((a1, b2) in d for b2 in nv.nz_down(b1) for a1 in nv.nz_down(a))
                 for b1 in nv.nz_down(b))
        if c1 and c2:
            out.add(b)
    if not keep_vacuous and a == nv.bot:
        out.discard(nv.bot)
    return out


def atom_ball(at_inf, at_n, a, atoms):
    return {b for b in atoms if (a, b) in at_inf and (a, b) not in at_n}


def lattice_ball(nv, at_inf, at_n, a, keep_vacuous=False):
    out = set()
    for b in nv.elems:
        c1 = all(any(y in atom_ball(at_inf, at_n, x, nv.atoms) for y in nv.atoms_below(b))
                 for x in nv.atoms_below(a))
        c2 = all(any(x in atom_ball(at_inf, at_n, y, nv.atoms) for x in nv.atoms_below(a))
                 for y in nv.atoms_below(b))
        if c1 and c2:
            out.add(b)
    if not keep_vacuous and a == nv.bot:
        out.discard(nv.bot)
    return out


def all_triples(n):
    return itertools.product(range(n), repeat=3)
