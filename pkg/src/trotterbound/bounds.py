"""First-order Trotter step bounds for the Hubbard and t-J lattice models.

Every bound is carried as an exact polynomial in ``t, U, J`` (the bracketed
commutator sum, i.e. ``r * epsilon / tau**2``) and evaluated numerically only
at the end.  Three independent routes are provided for the commutator bound:

``brute``
    sum of ``||[H_a, H_b]||`` over every ordered pair of Pauli terms of the
    built Hamiltonian;
``expanded``
    translation-invariant expansion over site displacements using an
    :class:`ATable` measured on a reference lattice;
``closed``
    hard-coded closed-form polynomials in ``N_x, N_y``.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from trotterbound.models import (
    Boundary,
    LatticeSpec,
    ModelParams,
    SiteTermGroup,
    all_terms,
    build_model,
)
from trotterbound.pauli import Coefficient, HamTerm, Monomial, commutator_norm

__all__ = [
    "ATable",
    "BoundResult",
    "SimParams",
    "a_table",
    "bound_brute",
    "bound_closed",
    "bound_expanded",
    "bound_one_norm",
    "commutator_sum",
    "compute_a",
    "one_norm_polynomial",
    "omega_ratio",
    "bound",
    "closed_polynomial",
    "interior_a",
    "open_edge_deficit",
    "sweep",
]

ROUTES = ("brute", "expanded", "closed", "closed_exact", "one_norm")

T2 = Coefficient.monomial(1, t=2)
TU = Coefficient.monomial(1, t=1, u=1)
TJ = Coefficient.monomial(1, t=1, j=1)
J2 = Coefficient.monomial(1, j=2)
T1 = Coefficient.monomial(1, t=1)
U1 = Coefficient.monomial(1, u=1)
J1 = Coefficient.monomial(1, j=1)

SELF, RIGHT, DOWN, DIAG, ANTI = (0, 0), (0, 1), (1, 0), (1, 1), (1, -1)


@dataclass(frozen=True)
class SimParams:
    """Evolution time ``tau`` and allowed Trotter error ``epsilon``."""

    tau: float = 1.0
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        if not (self.tau > 0 and self.epsilon > 0):
            raise ValueError("tau and epsilon must be positive")

    @property
    def prefactor(self) -> float:
        return self.tau**2 / self.epsilon


@dataclass
class BoundResult:
    """A bound as exact polynomial plus its numeric step count."""

    polynomial: Coefficient
    numeric_r: float | None
    method: str
    model: str | None = None
    lattice: LatticeSpec | None = None
    params: ModelParams | None = None
    sim: SimParams | None = None
    pair_count: int | None = None

    def scaled(self, params: ModelParams) -> float:
        """``r * epsilon / tau**2`` at ``params``."""
        return self.polynomial.evaluate(params.t, params.u, params.j)

    def to_json(self) -> dict:
        lat = self.lattice
        return {
            "method": self.method,
            "model": self.model,
            "lattice": None if lat is None else {
                "n_x": lat.n_x, "n_y": lat.n_y, "dimension": lat.dimension, "boundary": lat.boundary.value,
            },
            "params": None if self.params is None else {
                "t": self.params.t, "u": self.params.u, "j": self.params.j,
            },
            "sim": None if self.sim is None else {"tau": self.sim.tau, "epsilon": self.sim.epsilon},
            "polynomial": self.polynomial.to_json(),
            "polynomial_text": str(self.polynomial),
            "numeric_r": self.numeric_r,
        }


def _finish(poly: Coefficient, method: str, params: ModelParams | None, sim: SimParams | None,
            **provenance) -> BoundResult:
    r = None
    if params is not None and sim is not None:
        r = sim.prefactor * poly.evaluate(params.t, params.u, params.j)
    return BoundResult(poly, r, method, params=params, sim=sim, **provenance)


# ---------------------------------------------------------------------------
# commutator sums
# ---------------------------------------------------------------------------

def _symplectic(terms: Sequence[HamTerm]) -> tuple[np.ndarray, np.ndarray]:
    n = terms[0].n_qubits
    x = np.zeros((len(terms), n), dtype=np.float64)
    z = np.zeros_like(x)
    for row, term in enumerate(terms):
        xm, zm = term.pauli.x_mask, term.pauli.z_mask
        for q in range(n):
            x[row, q] = (xm >> q) & 1
            z[row, q] = (zm >> q) & 1
    return x, z


def _class_index(terms: Sequence[HamTerm]) -> tuple[list[Coefficient], np.ndarray]:
    classes: dict[Coefficient, int] = {}
    idx = np.empty(len(terms), dtype=np.int64)
    for k, term in enumerate(terms):
        idx[k] = classes.setdefault(abs(term.coeff), len(classes))
    return list(classes), idx


def commutator_sum(left: Sequence[HamTerm], right: Sequence[HamTerm] | None = None,
                   ) -> tuple[Coefficient, Counter[Coefficient], int]:
    """Exact ``sum_{a in left, b in right} ||[a, b]||`` over ordered pairs.

    Returns the polynomial, the number of non-commuting pairs per product
    monomial ``|c_a| |c_b|`` and the total pair count.  Anticommutation is
    evaluated for all pairs at once as a symplectic product of 0/1 matrices;
    every matrix entry stays a small integer, so the float arithmetic is exact.
    """
    right = left if right is None else right
    if not left or not right:
        return Coefficient(), Counter(), len(left) * len(right)
    xl, zl = _symplectic(left)
    xr, zr = (xl, zl) if right is left else _symplectic(right)
    anti = np.mod(xl @ zr.T + zl @ xr.T, 2.0)
    cl, il = _class_index(left)
    cr, ir = (cl, il) if right is left else _class_index(right)
    onehot_l = np.zeros((len(left), len(cl)))
    onehot_l[np.arange(len(left)), il] = 1
    onehot_r = np.zeros((len(right), len(cr)))
    onehot_r[np.arange(len(right)), ir] = 1
    counts = np.rint(onehot_l.T @ anti @ onehot_r).astype(np.int64)
    total = Coefficient()
    breakdown: Counter[Coefficient] = Counter()
    for a, ca in enumerate(cl):
        for b, cb in enumerate(cr):
            n = int(counts[a, b])
            if n:
                weight = ca * cb
                total = total + weight * (2 * n)
                breakdown[weight] += n
    return total, breakdown, len(left) * len(right)


def compute_a(group1: SiteTermGroup, group2: SiteTermGroup) -> tuple[Coefficient, dict[Monomial, int]]:
    """Summed commutator norms between two site groups and per-monomial pair counts.

    Counts are keyed by the monomial exponents of ``|c_a c_b|``.
    """
    poly, breakdown, _ = commutator_sum(group1.terms, group2.terms)
    counts: Counter[Monomial] = Counter()
    for weight, n in breakdown.items():
        for key in weight.terms:
            counts[key] += n
    return poly, dict(counts)


def compute_a_pairwise(group1: SiteTermGroup, group2: SiteTermGroup) -> Coefficient:
    """Term-by-term version of :func:`compute_a` (reference implementation)."""
    total = Coefficient()
    for a in group1.terms:
        for b in group2.terms:
            total = total + commutator_norm(a, b)
    return total


# ---------------------------------------------------------------------------
# A tables and the translation-invariant expansion
# ---------------------------------------------------------------------------

@dataclass
class ATable:
    """Interior-site ``A`` polynomials keyed by displacement ``(d_row, d_col)``.

    Missing displacements are zero.  ``dimension`` records whether the table
    was measured on a chain or a square lattice.
    """

    model: str
    dimension: int
    entries: dict[tuple[int, int], Coefficient] = field(default_factory=dict)
    counts: dict[tuple[int, int], dict[Monomial, int]] = field(default_factory=dict)

    def __getitem__(self, disp: tuple[int, int]) -> Coefficient:
        if disp in self.entries:
            return self.entries[disp]
        back = (-disp[0], -disp[1])
        return self.entries.get(back, Coefficient())

    @classmethod
    def zero(cls, model: str = "none", dimension: int = 2) -> ATable:
        return cls(model, dimension)


@functools.lru_cache(maxsize=None)
def a_table(model: str, dimension: int = 2, reach: int = 2) -> ATable:
    """Measure ``A`` for every displacement within ``reach`` of an interior site.

    Results are cached; treat the returned table as read-only.

    The reference lattice is open and large enough that both sites of every
    measured pair, and all their bonds, lie away from the edges.
    """
    if dimension == 1:
        n = 2 * reach + 3
        lattice = LatticeSpec.chain(n)
        groups = {g.site: g for g in build_model(model, lattice)}
        origin = (0, reach + 1)
        disps = [(0, p) for p in range(0, reach + 1)]
    else:
        n = 2 * reach + 3
        lattice = LatticeSpec.square(n, reach + 2)
        groups = {g.site: g for g in build_model(model, lattice)}
        origin = (0, reach + 1)
        disps = [(q, p) for q in range(0, reach + 1) for p in range(-reach, reach + 1) if (q, p) > (0, -1)]
    table = ATable(model, dimension)
    for dq, dp in disps:
        other = groups[(origin[0] + dq, origin[1] + dp)]
        poly, counts = compute_a(groups[origin], other)
        if poly:
            table.entries[(dq, dp)] = poly
            table.counts[(dq, dp)] = counts
    return table


def bound_expanded(table: ATable, lattice: LatticeSpec, sim: SimParams | None = None,
                   params: ModelParams | None = None) -> BoundResult:
    """Sum ``A`` over all ordered site pairs grouped by displacement.

    Open boundaries weight displacement ``(q, p)`` by ``(N_x - |p|)(N_y - q)``
    pair multiplicities; periodic boundaries give every displacement class
    ``N_x N_y`` ordered pairs.  The accounted pair count must equal
    ``(N_x N_y)**2``.
    """
    nx, ny = lattice.n_x, lattice.n_y
    poly = Coefficient()
    pairs = 0
    if lattice.periodic:
        for q in range(ny):
            for p in range(nx):
                a = table[(_min_image(q, ny), _min_image(p, nx))]
                poly = poly + a * (nx * ny)
                pairs += nx * ny
    else:
        poly = poly + table[SELF] * (nx * ny)
        pairs += nx * ny
        for p in range(1, nx):
            poly = poly + table[(0, p)] * (2 * ny * (nx - p))
            pairs += 2 * ny * (nx - p)
        for q in range(1, ny):
            poly = poly + table[(q, 0)] * (2 * nx * (ny - q))
            pairs += 2 * nx * (ny - q)
            for p in range(1, nx):
                m = 2 * (nx - p) * (ny - q)
                poly = poly + (table[(q, p)] + table[(q, -p)]) * m
                pairs += 2 * m
    if pairs != (nx * ny) ** 2:
        raise RuntimeError(f"expanded form accounts for {pairs} pairs, expected {(nx * ny) ** 2}")
    return _finish(poly, "expanded", params, sim, model=table.model, lattice=lattice, pair_count=pairs)


def _min_image(d: int, n: int) -> int:
    d %= n
    return d - n if d > n // 2 else d


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

def bound_brute(groups: Sequence[SiteTermGroup], sim: SimParams | None = None,
                params: ModelParams | None = None, *, model: str | None = None,
                lattice: LatticeSpec | None = None) -> BoundResult:
    """Commutator bound summed over every ordered pair of Pauli terms.

    Self-pairs are included and contribute zero.
    """
    terms = all_terms(groups)
    poly, _, pairs = commutator_sum(terms)
    return _finish(poly, "brute", params, sim, model=model, lattice=lattice, pair_count=pairs)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def interior_a(model: str, dimension: int = 2) -> dict[tuple[int, int], Coefficient]:
    """Closed-form interior-site ``A`` polynomials (non-zero displacements only)."""
    if model == "hubbard":
        if dimension == 1:
            return {SELF: TU * 4, RIGHT: T2 * 2 + TU * 2}
        hop = T2 * 4 + TU * 2
        return {SELF: T2 * 4 + TU * 8, RIGHT: hop, DOWN: hop, ANTI: T2 * 2}
    if model == "tj":
        if dimension == 1:
            return {SELF: T2 * 2 + TJ * 4, RIGHT: T2 * 4 + TJ * 4 + J2 * Fraction(3, 4)}
        hop = T2 * 8 + TJ * 8 + J2 * Fraction(3, 2)
        return {
            SELF: T2 * 12 + TJ * 16 + J2 * Fraction(3, 2),
            RIGHT: hop,
            DOWN: hop,
            ANTI: T2 * 4 + TJ * 4 + J2 * Fraction(3, 4),
        }
    raise ValueError(f"unsupported model {model!r}")


def closed_polynomial(model: str, lattice: LatticeSpec) -> Coefficient:
    """Bulk closed form of ``r * epsilon / tau**2`` as a polynomial in ``t, U, J``.

    Open 2D: ``N_x N_y A_00 + 2 N_y (N_x - 1) A_01 + 2 N_x (N_y - 1) A_10
    + 2 (N_x - 1)(N_y - 1) A_anti``.  Periodic: the same with every ``N - 1``
    replaced by ``N``.  1D: ``N A_00 + 2 (N - 1) A_01`` (``2 N A_01`` periodic).
    """
    a = interior_a(model, lattice.dimension)
    nx, ny = lattice.n_x, lattice.n_y
    if lattice.dimension == 1:
        links = nx if lattice.periodic else nx - 1
        return a[SELF] * nx + a[RIGHT] * (2 * links)
    lx = nx if lattice.periodic else nx - 1
    ly = ny if lattice.periodic else ny - 1
    return (
        a[SELF] * (nx * ny)
        + a[RIGHT] * (2 * ny * lx)
        + a[DOWN] * (2 * nx * ly)
        + a[ANTI] * (2 * lx * ly)
    )


def open_edge_deficit(model: str, lattice: LatticeSpec) -> Coefficient:
    """Commutator weight the bulk open-boundary form assigns to absent edge bonds.

    The bulk form treats every site as owning a right and a lower bond.  On a
    physical open lattice the ``N_y`` right-edge and ``N_x`` bottom-edge bonds
    do not exist; removing them, together with the pairs they would form with
    their neighbours, lowers the sum by an amount linear in ``N_x + N_y``.
    Valid for ``N_x, N_y >= 2`` in 2D and ``N >= 2`` in 1D.
    """
    if lattice.periodic:
        return Coefficient()
    if lattice.dimension == 1:
        if lattice.n_x < 2:
            raise ValueError("edge deficit is defined for chains of N >= 2")
        if model == "hubbard":
            return TU * 4 + T2 * 4
        if model == "tj":
            return T2 * 10 + TJ * 12 + J2 * Fraction(3, 2)
        raise ValueError(f"unsupported model {model!r}")
    if min(lattice.n_x, lattice.n_y) < 2:
        raise ValueError("edge deficit is defined for N_x, N_y >= 2")
    s = lattice.n_x + lattice.n_y
    if model == "hubbard":
        return TU * (4 * s) + T2 * (12 * s - 12)
    if model == "tj":
        return T2 * (26 * s - 24) + TJ * (28 * s - 24) + J2 * Fraction(9 * s - 9, 2)
    raise ValueError(f"unsupported model {model!r}")


def bound_closed(model: str, lattice: LatticeSpec, sim: SimParams | None = None,
                 params: ModelParams | None = None, *, exact_edges: bool = False) -> BoundResult:
    """Closed-form commutator bound.

    By default the bulk (translation-invariant) form is returned for open
    lattices as well.  ``exact_edges`` subtracts :func:`open_edge_deficit`,
    giving the exact sum for a physical open lattice.
    """
    if model not in ("hubbard", "tj"):
        raise ValueError(f"unsupported model {model!r}")
    poly = closed_polynomial(model, lattice)
    if exact_edges:
        poly = poly - open_edge_deficit(model, lattice)
    return _finish(poly, "closed", params, sim, model=model, lattice=lattice)


# ---------------------------------------------------------------------------
# 1-norm bound
# ---------------------------------------------------------------------------

def one_norm_polynomial(terms: Iterable[HamTerm]) -> Coefficient:
    """``(sum |c|)**2`` over non-identity terms."""
    norm = Coefficient()
    for term in terms:
        if not term.pauli.is_identity:
            norm = norm + abs(term.coeff)
    return norm * norm


def bound_one_norm(model: str, lattice: LatticeSpec, sim: SimParams | None = None,
                   params: ModelParams | None = None, *, source: str = "closed") -> BoundResult:
    """1-norm bound ``N**2 (sum_delta |c_delta|)**2``.

    ``source="closed"`` uses the closed per-site sums ``4t + 3U/4``
    (Hubbard) and ``2t + 15J/8`` (t-J).  ``source="interior"`` sums the
    coefficients of a built interior-site group instead; for the t-J model the
    built group's hopping prefactors give ``4t + 15J/8``.  ``source="terms"``
    uses the full built Hamiltonian, edges included.
    """
    if model not in ("hubbard", "tj"):
        raise ValueError(f"unsupported model {model!r}")
    n = lattice.n_sites
    if source == "closed":
        if lattice.dimension != 2:
            raise ValueError("closed 1-norm forms are given for 2D lattices")
        per_site = T1 * 4 + U1 * Fraction(3, 4) if model == "hubbard" else T1 * 2 + J1 * Fraction(15, 8)
        poly = per_site * per_site * (n * n)
    elif source == "interior":
        group = interior_group(model, lattice.dimension)
        poly = one_norm_polynomial(group.terms) * (n * n)
    elif source == "terms":
        poly = one_norm_polynomial(all_terms(build_model(model, lattice)))
    else:
        raise ValueError(f"unknown source {source!r}")
    return _finish(poly, "one_norm", params, sim, model=model, lattice=lattice)


def interior_group(model: str, dimension: int = 2) -> SiteTermGroup:
    """A site group with every bond present (bulk site)."""
    if dimension == 1:
        lattice = LatticeSpec.chain(3)
        site = (0, 1)
    else:
        lattice = LatticeSpec.square(3, 3)
        site = (1, 1)
    return next(g for g in build_model(model, lattice) if g.site == site)


def omega_ratio(model: str, lattice: LatticeSpec, params: ModelParams) -> float:
    """``r_1-norm / r_commutator`` from the closed forms (independent of tau, epsilon)."""
    comm = bound_closed(model, lattice).polynomial.evaluate(params.t, params.u, params.j)
    if comm == 0:
        raise ZeroDivisionError("commutator bound vanishes: the Hamiltonian terms all commute")
    one = bound_one_norm(model, lattice).polynomial.evaluate(params.t, params.u, params.j)
    return one / comm


# ---------------------------------------------------------------------------
# parameter sweeps
# ---------------------------------------------------------------------------

SWEEP_VARIABLES = ("t", "u", "j", "n", "u_over_t")


def sweep(model: str, lattice: LatticeSpec, vary: str, grid: Sequence[float],
          fixed: ModelParams, method: str = "closed", *, exact_edges: bool = False,
          ) -> list[tuple[float, float]]:
    """Rows ``(value, r * epsilon / tau**2)`` over ``grid``.

    ``vary`` selects the swept quantity: ``t``, ``u`` or ``j`` directly;
    ``u_over_t`` keeps ``fixed.t`` and sets ``U = value * t`` (with
    ``J = 4 t**2 / U`` when ``fixed.j_derived``); ``n`` sets a square
    ``sqrt(n) x sqrt(n)`` lattice in 2D or an ``n``-site chain in 1D.  With
    ``fixed.j_derived`` every point recomputes ``J = 4 t**2 / U``.
    ``method`` is ``closed``, ``brute``, ``one_norm`` or ``omega``.
    """
    if vary not in SWEEP_VARIABLES:
        raise ValueError(f"cannot sweep {vary!r}; choose from {SWEEP_VARIABLES}")
    grid = list(grid)
    if not grid:
        raise ValueError("empty sweep grid")
    if vary in ("u", "u_over_t", "n") and any(v <= 0 for v in grid):
        raise ValueError(f"{vary} grid values must be positive")
    rows = []
    for value in grid:
        t, u, j = fixed.t, fixed.u, fixed.j
        lat = lattice
        if vary == "t":
            t = value
        elif vary == "u":
            u = value
        elif vary == "j":
            j = value
        elif vary == "u_over_t":
            u = value * t
        elif vary == "n":
            lat = _lattice_for_n(lattice, value)
        if fixed.j_derived:
            params = ModelParams(t=t, u=u, j_derived=True)
        else:
            params = ModelParams(t=t, u=u, j=j)
        rows.append((float(value), _scaled_bound(model, lat, params, method, exact_edges)))
    return rows


def _lattice_for_n(lattice: LatticeSpec, value: float) -> LatticeSpec:
    n = int(round(value))
    if n != value or n < 1:
        raise ValueError(f"lattice size must be a positive integer, got {value}")
    if lattice.dimension == 1:
        return LatticeSpec.chain(n, lattice.boundary)
    side = int(round(n ** 0.5))
    if side * side != n:
        raise ValueError(f"2D sweeps over N need perfect squares, got {n}")
    return LatticeSpec.square(side, side, lattice.boundary)


def _scaled_bound(model: str, lattice: LatticeSpec, params: ModelParams, method: str,
                  exact_edges: bool) -> float:
    if method == "closed":
        poly = bound_closed(model, lattice, exact_edges=exact_edges).polynomial
    elif method == "brute":
        poly = bound_brute(build_model(model, lattice)).polynomial
    elif method == "one_norm":
        poly = bound_one_norm(model, lattice).polynomial
    elif method == "omega":
        return omega_ratio(model, lattice, params)
    else:
        raise ValueError(f"unknown sweep method {method!r}")
    return poly.evaluate(params.t, params.u, params.j)


def bound(model: str, lattice: LatticeSpec, method: str, sim: SimParams | None = None,
          params: ModelParams | None = None) -> BoundResult:
    """Dispatch to one bound route by name."""
    if method == "brute":
        return bound_brute(build_model(model, lattice), sim, params, model=model, lattice=lattice)
    if method == "expanded":
        return bound_expanded(a_table(model, lattice.dimension), lattice, sim, params)
    if method == "closed":
        return bound_closed(model, lattice, sim, params)
    if method == "closed_exact":
        return bound_closed(model, lattice, sim, params, exact_edges=True)
    if method == "one_norm":
        return bound_one_norm(model, lattice, sim, params)
    raise ValueError(f"unknown method {method!r}")
