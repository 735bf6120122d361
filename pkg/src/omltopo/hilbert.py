"""Projective geometry of ℝ³: the θ ladder, the two-plane projection lemma,
Sasaki projection as orthogonal projection, witness chains and lattice metrics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

UNIT_TOL = 1e-12
GRID_SIZE = 400
GRID_TOL = 1e-6
WITNESS_TOL = 1e-9
# slack on d(A, B) >= θ_n, so chained steps that land on θ_k up to rounding are accepted
PRECONDITION_SLACK = 1e-9

Real = Union[float, Fraction]


class DomainError(ValueError):
    pass


class CertificateFailure(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


class DimensionError(ValueError):
    pass


# -- the map f and the ladder -------------------------------------------------

def f(x: Real) -> Real:
    """(3x - 1) / (x + 1) on [0, 1]; exact on Fractions."""
    if not 0 <= x <= 1:
        raise DomainError(f"f is defined on [0, 1], got {x}")
    return (3 * x - 1) / (x + 1)


def f_inv(y: Real) -> Real:
    """Inverse of f: (1 + y) / (3 - y) on [-1, 1]."""
    if not -1 <= y <= 1:
        raise DomainError(f"f_inv is defined on [-1, 1], got {y}")
    return (1 + y) / (3 - y)


def c(n: int) -> Fraction:
    """Cosine of the n-th ladder angle, n / (n + 2), as an exact rational."""
    if n < 0:
        raise DomainError("n must be non-negative")
    return Fraction(n, n + 2)


def theta(n: int) -> float:
    return math.acos(c(n))


@dataclass(frozen=True)
class ThetaLadder:
    cosines: Tuple[Fraction, ...]
    angles: Tuple[float, ...]

    @classmethod
    def build(cls, size: int) -> "ThetaLadder":
        """Ladder of ``size + 1`` rungs generated by the recursion c_{k+1} = f_inv(c_k)."""
        cos = [Fraction(0)]
        for _ in range(size):
            cos.append(f_inv(cos[-1]))
        return cls(tuple(cos), tuple(math.acos(x) for x in cos))

    def verify(self) -> bool:
        """Recursion agrees with the closed form and the angles strictly decrease."""
        closed = all(x == c(k) for k, x in enumerate(self.cosines))
        dec = all(b < a for a, b in zip(self.angles, self.angles[1:]))
        return closed and dec and self.angles[0] == math.pi / 2


# -- vectors, lines and subspaces ----------------------------------------------

def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise DegenerateInput("zero vector has no direction")
    return v / norm


def _canonical_sign(v: np.ndarray, tol: float = 1e-15) -> np.ndarray:
    for comp in v:
        if abs(comp) > tol:
            return v if comp > 0 else -v
    return v


@dataclass(frozen=True, eq=False)
class Line3:
    """One-dimensional subspace of ℝ³ with a canonical unit direction
    (first nonzero component positive)."""

    direction: np.ndarray

    def __init__(self, vector):
        d = _canonical_sign(unit(vector))
        d.setflags(write=False)
        object.__setattr__(self, "direction", d)

    def __eq__(self, other):
        return isinstance(other, Line3) and bool(np.allclose(self.direction, other.direction, atol=1e-12))

    def __hash__(self):
        return hash(tuple(np.round(self.direction, 9)))

    def __repr__(self):
        return "Line3({:.6g}, {:.6g}, {:.6g})".format(*self.direction)

    def as_subspace(self) -> "Subspace3":
        return Subspace3([self.direction])


class Subspace3:
    """Subspace of ℝ³ held by an orthonormal basis (rows of ``basis``)."""

    def __init__(self, vectors: Sequence = (), rank_tol: float = 1e-10):
        vecs = np.asarray(vectors, dtype=float).reshape(-1, 3)
        if vecs.shape[0] == 0:
            self.basis = np.zeros((0, 3))
        else:
            u, s, vt = np.linalg.svd(vecs, full_matrices=False)
            rank = int((s > rank_tol * max(1.0, s[0])).sum())
            self.basis = vt[:rank]
        self.basis.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def project(self, v) -> np.ndarray:
        return self.projector @ np.asarray(v, dtype=float)

    def contains(self, v, tol: float = 1e-9) -> bool:
        v = np.asarray(v, dtype=float)
        return bool(np.linalg.norm(v - self.project(v)) <= tol * max(1.0, np.linalg.norm(v)))

    def contains_subspace(self, other: "Subspace3", tol: float = 1e-9) -> bool:
        return all(self.contains(b, tol) for b in other.basis)

    def orthocomplement(self) -> "Subspace3":
        if self.dim == 0:
            return Subspace3(np.eye(3))
        _, _, vt = np.linalg.svd(self.basis, full_matrices=True)
        return Subspace3(vt[self.dim:])

    def __repr__(self):
        return f"Subspace3(dim={self.dim})"


ZERO = Subspace3()


def _as_subspace(x) -> Subspace3:
    return x.as_subspace() if isinstance(x, Line3) else x


# -- geometry of the projection lemma -----------------------------------------

def v_phi(theta_: float, phi: float) -> np.ndarray:
    """Normalized projection of v = (cos θ, sin θ, 0) onto span{e1, (0, cos φ, sin φ)}."""
    ct, st = math.cos(theta_), math.sin(theta_)
    cp, sp = math.cos(phi), math.sin(phi)
    scale = 1.0 / math.sqrt(ct * ct + st * st * cp * cp)
    return scale * np.array([ct, st * cp * cp, st * cp * sp])


def dot_closed_form(theta_, phi, psi):
    """v_φ · v_ψ in closed form; broadcasts over numpy arrays."""
    ct2 = np.cos(theta_) ** 2
    st2 = np.sin(theta_) ** 2
    cp, sp = np.cos(phi), np.sin(phi)
    cq, sq = np.cos(psi), np.sin(psi)
    num = ct2 + st2 * (cp * cp * cq * cq + cp * cq * sp * sq)
    den = np.sqrt((ct2 + st2 * cp * cp) * (ct2 + st2 * cq * cq))
    return num / den


def lemma_min(theta_: float) -> float:
    """Closed-form minimum of v_φ · v_ψ: f(cos θ)."""
    ct = math.cos(theta_)
    return (3 * ct - 1) / (ct + 1)


def minimizer_cos2(theta_: float) -> float:
    """cos²φ at the minimum, cos θ / (1 + cos θ)."""
    ct = math.cos(theta_)
    return ct / (1 + ct)


@dataclass(frozen=True)
class LemmaCertificate:
    theta: float
    closed_form_min: float
    closed_form_max: float
    grid_min: float
    grid_max: float
    refined_min: float
    refined_argmin: Tuple[float, float]
    diagonal_min: float

    @property
    def abs_err(self) -> float:
        return abs(self.refined_min - self.closed_form_min)

    @property
    def argmin_cos2_err(self) -> float:
        return abs(math.cos(self.refined_argmin[0]) ** 2 - minimizer_cos2(self.theta))

    @property
    def argmin_antidiagonal_err(self) -> float:
        """Distance of φ + ψ from the nearest multiple of π."""
        s = (self.refined_argmin[0] + self.refined_argmin[1]) / math.pi
        return abs(s - round(s)) * math.pi


def lemma_extrema(theta_: float, grid: int = GRID_SIZE, tol: float = GRID_TOL) -> Tuple[float, float, LemmaCertificate]:
    """Closed-form extrema of v_φ · v_ψ and a numeric certificate.

    The certificate evaluates a grid×grid lattice of (φ, ψ) over one period,
    refines the grid minimum by 2-D local descent, and separately runs a
    golden-section search along ψ = -φ. Raises CertificateFailure if the
    grid dips below the closed-form minimum or the refinement misses it by
    more than ``tol``.
    """
    if not 0 < theta_ < math.pi / 2:
        raise DomainError("θ must lie strictly between 0 and π/2")
    lo, hi = lemma_min(theta_), 1.0
    # v_φ has period π in φ
    ang = np.linspace(0.0, math.pi, grid, endpoint=False)
    vals = dot_closed_form(theta_, ang[:, None], ang[None, :])
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    grid_min, grid_max = float(vals[i, j]), float(vals.max())

    res = optimize.minimize(
        lambda p: dot_closed_form(theta_, p[0], p[1]),
        x0=[ang[i], ang[j]],
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 20000},
    )
    diag = optimize.minimize_scalar(
        lambda p: dot_closed_form(theta_, p, -p),
        bracket=(0.0, math.acos(math.sqrt(minimizer_cos2(theta_))), math.pi / 2),
        method="golden",
        tol=1e-12,
    )
    refined = min(float(res.fun), float(diag.fun))
    cert = LemmaCertificate(
        theta=theta_,
        closed_form_min=lo,
        closed_form_max=hi,
        grid_min=grid_min,
        grid_max=grid_max,
        refined_min=refined,
        refined_argmin=(float(res.x[0]), float(res.x[1])),
        diagonal_min=float(diag.fun),
    )
    if grid_min < lo - 1e-12 or cert.abs_err > tol or abs(grid_max - hi) > 1e-12:
        raise CertificateFailure(
            f"θ={theta_}: closed form [{lo}, {hi}] vs grid [{grid_min}, {grid_max}], refined {refined}"
        )
    return lo, hi, cert


# -- lines, projections and metrics -------------------------------------------

def proj_metric(a: Line3, b: Line3) -> float:
    """Projective distance arccos |u·v| in [0, π/2]."""
    cosv = abs(float(np.dot(a.direction, b.direction)))
    return math.acos(min(1.0, cosv))


def sasaki_project(e, b: Line3) -> Union[Line3, Subspace3]:
    """B & E: the line spanned by the orthogonal projection of B's direction onto E,
    or :data:`ZERO` when B is orthogonal to E."""
    e = _as_subspace(e)
    p = e.project(b.direction)
    if np.linalg.norm(p) <= 1e-12:
        return ZERO
    return Line3(p)


def _adapted_frame(a: Line3, b: Line3) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Orthonormal e1, e2, e3 with u = e1 and v = cos d e1 + sin d e2."""
    u = a.direction
    v = b.direction
    if np.dot(u, v) < 0:
        v = -v
    d = proj_metric(a, b)
    if d == 0.0:
        raise DegenerateInput("lines coincide; the adapted frame needs d(A, B) > 0")
    e2 = unit(v - np.dot(u, v) * u)
    e3 = np.cross(u, e2)
    return u, e2, e3, d


def plane(e1: np.ndarray, e2: np.ndarray, e3: np.ndarray, phi: float) -> Subspace3:
    """E_φ = span{e1, cos φ e2 + sin φ e3}."""
    return Subspace3([e1, math.cos(phi) * e2 + math.sin(phi) * e3])


@dataclass(frozen=True)
class WitnessStep:
    a1: Subspace3
    a2: Subspace3
    alpha: float
    residual: float


def witness_step(a: Line3, b: Line3, n: int) -> WitnessStep:
    """Two planes through A whose projections of B lie exactly θ_{n-1} apart.

    Searches φ on the family ψ = -φ, where the projected dot product falls
    continuously from 1 at φ = 0 to f(cos d(A, B)) <= cos θ_{n-1}.
    """
    if n < 1:
        raise PreconditionError("witness_step needs n >= 1")
    d0 = proj_metric(a, b)
    if d0 == 0.0:
        raise DegenerateInput("d(A, B) = 0")
    if d0 < theta(n) - PRECONDITION_SLACK:
        raise PreconditionError(f"d(A, B) = {d0} < θ_{n} = {theta(n)}")
    e1, e2, e3, d = _adapted_frame(a, b)
    target = float(c(n - 1))
    ct = math.cos(d)

    def dot_at(phi):
        return dot_closed_form(d, phi, -phi)

    # cos²φ* = cos d / (1 + cos d); for d = π/2 the endpoint itself is degenerate
    phi_hi = math.acos(math.sqrt(ct / (1 + ct))) if ct > 0 else math.pi / 2
    if ct <= 0:
        phi_hi -= 1e-12
    g_hi = dot_at(phi_hi) - target
    if g_hi > 0:
        # d sits on θ_n up to rounding, so the minimum equals the target
        if g_hi > 1e-9:
            raise PreconditionError(f"no root: minimum {dot_at(phi_hi)} above cos θ_{n-1} = {target}")
        alpha = phi_hi
    else:
        alpha = optimize.brentq(lambda p: dot_at(p) - target, 0.0, phi_hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    a1 = plane(e1, e2, e3, alpha)
    a2 = plane(e1, e2, e3, -alpha)
    p1, p2 = sasaki_project(a1, b), sasaki_project(a2, b)
    residual = abs(proj_metric(p1, p2) - theta(n - 1))
    return WitnessStep(a1, a2, alpha, residual)


@dataclass(frozen=True)
class Chain:
    """Pairs (A_k, B_k) for k = n, n-1, ..., 0, with their distances."""

    pairs: Tuple[Tuple[Line3, Line3], ...]
    angles: Tuple[float, ...]
    residuals: Tuple[float, ...]

    @property
    def final_gap(self) -> float:
        """|d(A_0, B_0) - π/2|."""
        return abs(self.angles[-1] - math.pi / 2)


def chain_witness(a: Line3, b: Line3, n: int) -> Chain:
    """Descend from (A, B) to an orthogonal pair through n witness steps.

    Each step replaces (A_k, B_k) by the projections of B_k onto two planes
    containing A_k, which lie θ_{k-1} apart.
    """
    if n < 0:
        raise PreconditionError("n must be non-negative")
    d = proj_metric(a, b)
    if d < theta(n) - PRECONDITION_SLACK:
        raise PreconditionError(f"d(A, B) = {d} < θ_{n}")
    pairs = [(a, b)]
    angles = [d]
    residuals = []
    for k in range(n, 0, -1):
        ak, bk = pairs[-1]
        step = witness_step(ak, bk, k)
        nxt = (sasaki_project(step.a1, bk), sasaki_project(step.a2, bk))
        pairs.append(nxt)
        angles.append(proj_metric(*nxt))
        residuals.append(step.residual)
    return Chain(tuple(pairs), tuple(angles), tuple(residuals))


def d_pi(x: Line3, b) -> float:
    """Distance from a line to the nearest line inside subspace b: arccos ‖Π_b u‖."""
    b = _as_subspace(b)
    if b.dim == 0:
        raise DimensionError("d_pi needs a nonzero subspace")
    norm = float(np.linalg.norm(b.project(x.direction)))
    return math.acos(min(1.0, norm))


def _max_dpi(a: Subspace3, b: Subspace3) -> float:
    """max over unit x in a of d_pi(x, b), via the smallest singular value of Bᵀ A."""
    if a.dim > b.dim:
        return math.pi / 2
    s = np.linalg.svd(b.basis @ a.basis.T, compute_uv=False)
    return math.acos(min(1.0, float(s.min())))


def d_lattice(a, b) -> float:
    """Hausdorff-style distance between subspaces: the larger of the two
    one-sided maxima of d_pi, computed from principal angles."""
    a, b = _as_subspace(a), _as_subspace(b)
    if a.dim == 0 or b.dim == 0:
        raise DimensionError("d_L needs nonzero subspaces")
    return max(_max_dpi(a, b), _max_dpi(b, a))


# short alias matching the metric's usual name
d_L = d_lattice


def random_line(rng: np.random.Generator) -> Line3:
    while True:
        v = rng.standard_normal(3)
        if np.linalg.norm(v) > 1e-6:
            return Line3(v)


def random_pair_at_least(rng: np.random.Generator, min_angle: float,
                         max_angle: float = math.pi / 2) -> Tuple[Line3, Line3]:
    """Random lines (A, B) with d(A, B) drawn uniformly from [min_angle, max_angle]."""
    a = random_line(rng)
    u = a.direction
    w = rng.standard_normal(3)
    w = unit(w - np.dot(w, u) * u)
    t = rng.uniform(min_angle, max_angle)
    return a, Line3(math.cos(t) * u + math.sin(t) * w)


def line_at_angle(a: Line3, angle: float, rng: Optional[np.random.Generator] = None) -> Line3:
    """A line exactly ``angle`` away from ``a``, in a random (or fixed) direction."""
    u = a.direction
    w = rng.standard_normal(3) if rng is not None else np.eye(3)[np.argmin(np.abs(u))]
    w = unit(w - np.dot(w, u) * u)
    return Line3(math.cos(angle) * u + math.sin(angle) * w)


def chain_trace(ch: Chain) -> dict:
    """JSON-friendly trace of a chain."""
    return {
        "input": [list(map(float, ch.pairs[0][0].direction)), list(map(float, ch.pairs[0][1].direction))],
        "chain": [[list(map(float, p.direction)), list(map(float, q.direction))] for p, q in ch.pairs],
        "angles": list(ch.angles),
        "residuals": list(ch.residuals),
    }
