"""Hubbard and t-J lattice Hamiltonians as per-site groups of Pauli terms.

Spinful site ``(i, j)`` (row ``i``, column ``j``, both 0-based) maps to the
spinless columns ``2j`` (spin up) and ``2j + 1`` (spin down) of row ``i``;
the spinless grid is then Jordan-Wigner ordered row-major.

Each site owns its on-site terms plus the bonds to its right and lower
neighbours.  Terms are merged only inside one bond/spin sector, so a site
group keeps exactly the per-site decomposition used for the commutator
bounds (12 terms for an interior Hubbard site, 64 for t-J).
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Literal

from trotterbound.jordan_wigner import FermionMonomial, FermionOp, JWOrdering, jw_transform_sum
from trotterbound.pauli import Coefficient, HamTerm, PauliString

__all__ = [
    "Boundary",
    "GoldenReport",
    "LatticeSpec",
    "ModelParams",
    "SiteTermGroup",
    "build_hubbard",
    "build_model",
    "build_tj",
    "load_golden_table",
    "pauli_depth",
    "relative_spec",
    "table_golden_check",
]

ModelName = Literal["hubbard", "tj"]
MODELS: tuple[str, ...] = ("hubbard", "tj")

T = Coefficient.monomial(1, t=1)
U = Coefficient.monomial(1, u=1)
J = Coefficient.monomial(1, j=1)
UP, DOWN = 0, 1


class Boundary(str, enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class LatticeSpec:
    """Rectangular lattice of ``n_x`` spinful sites per row and ``n_y`` rows."""

    n_x: int
    n_y: int = 1
    dimension: int = 2
    boundary: Boundary = Boundary.OPEN

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("lattice dimensions must be >= 1")
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        if self.dimension == 1 and self.n_y != 1:
            raise ValueError("a 1D lattice has n_y == 1")

    @classmethod
    def chain(cls, n: int, boundary: Boundary | str = Boundary.OPEN) -> LatticeSpec:
        return cls(n, 1, 1, Boundary(boundary))

    @classmethod
    def square(cls, n_x: int, n_y: int, boundary: Boundary | str = Boundary.OPEN) -> LatticeSpec:
        return cls(n_x, n_y, 2, Boundary(boundary))

    @property
    def n_sites(self) -> int:
        return self.n_x * self.n_y

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_sites

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    @property
    def ordering(self) -> JWOrdering:
        return JWOrdering(self.n_y, 2 * self.n_x, self.dimension)

    def qubit(self, i: int, j: int, spin: int) -> int:
        return self.ordering.index(i, 2 * j + spin)

    def sites(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n_y) for j in range(self.n_x)]

    def bonds(self, i: int, j: int) -> list[tuple[int, int]]:
        """Neighbours owned by site ``(i, j)``: right, then (2D only) down.

        Under periodic boundaries the neighbour index wraps.  Bonds form a set:
        a wrap that lands on the site itself (length-1 direction) or repeats an
        existing bond (length-2 direction) is skipped.
        """
        out = []
        if j + 1 < self.n_x or (self.periodic and self.n_x > 2):
            out.append((i, (j + 1) % self.n_x))
        if self.dimension == 2 and (i + 1 < self.n_y or (self.periodic and self.n_y > 2)):
            out.append(((i + 1) % self.n_y, j))
        return out


@dataclass(frozen=True)
class ModelParams:
    """Energy scales; ``j_derived`` pins ``j = 4 t**2 / u``."""

    t: float = 1.0
    u: float = 0.0
    j: float = 0.0
    j_derived: bool = False

    def __post_init__(self) -> None:
        if self.j_derived:
            if self.u == 0:
                raise ValueError("j_derived requires nonzero u")
            object.__setattr__(self, "j", 4 * self.t**2 / self.u)

    @classmethod
    def from_ratio(cls, t: float, u_over_t: float) -> ModelParams:
        return cls(t=t, u=u_over_t * t, j_derived=True)


@dataclass(frozen=True)
class SiteTermGroup:
    """All Pauli terms ``H_{i,j}^delta`` owned by one spinful site."""

    site: tuple[int, int]
    terms: tuple[HamTerm, ...]
    sectors: tuple[str, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def n_qubits(self) -> int:
        return self.terms[0].n_qubits if self.terms else 0


def _hop(a: int, b: int) -> list[FermionMonomial]:
    return [
        FermionMonomial([FermionOp.create(a), FermionOp.annihilate(b)], -T),
        FermionMonomial([FermionOp.create(b), FermionOp.annihilate(a)], -T),
    ]


def _hubbard_sectors(lat: LatticeSpec, i: int, j: int) -> list[tuple[str, list[FermionMonomial]]]:
    sectors = []
    for k, l in lat.bonds(i, j):
        tag = _bond_tag(i, j, k, l)
        for spin, name in ((UP, "up"), (DOWN, "down")):
            sectors.append((f"hop-{tag}-{name}", _hop(lat.qubit(i, j, spin), lat.qubit(k, l, spin))))
    up, dn = lat.qubit(i, j, UP), lat.qubit(i, j, DOWN)
    sectors.append(("onsite", [FermionMonomial([FermionOp.number(up), FermionOp.number(dn)], U)]))
    return sectors


def _bond_tag(i: int, j: int, k: int, l: int) -> str:
    return "h" if k == i else "v"


def _tj_sectors(lat: LatticeSpec, i: int, j: int) -> list[tuple[str, list[FermionMonomial]]]:
    sectors = []
    half_j = J * Fraction(1, 2)
    for k, l in lat.bonds(i, j):
        tag = _bond_tag(i, j, k, l)
        for spin, name in ((UP, "up"), (DOWN, "down")):
            a, b = lat.qubit(i, j, spin), lat.qubit(k, l, spin)
            a_bar, b_bar = lat.qubit(i, j, 1 - spin), lat.qubit(k, l, 1 - spin)
            monos = [
                FermionMonomial([FermionOp.hole(a_bar), *m.factors, FermionOp.hole(b_bar)], m.scalar)
                for m in _hop(a, b)
            ]
            sectors.append((f"hop-{tag}-{name}", monos))
        exchange, density = [], []
        for s in (UP, DOWN):
            a_s, a_sb = lat.qubit(i, j, s), lat.qubit(i, j, 1 - s)
            b_s, b_sb = lat.qubit(k, l, s), lat.qubit(k, l, 1 - s)
            exchange.append(FermionMonomial(
                [FermionOp.create(a_s), FermionOp.annihilate(a_sb),
                 FermionOp.create(b_sb), FermionOp.annihilate(b_s)],
                half_j,
            ))
            density.append(FermionMonomial(
                [FermionOp.hole(a_sb), FermionOp.number(a_s), FermionOp.number(b_sb), FermionOp.hole(b_s)],
                -half_j,
            ))
        sectors.append((f"exchange-{tag}", exchange))
        sectors.append((f"density-{tag}", density))
    return sectors


def _build(lat: LatticeSpec, sector_fn) -> list[SiteTermGroup]:
    groups = []
    ordering = lat.ordering
    for i, j in lat.sites():
        terms: list[HamTerm] = []
        labels: list[str] = []
        for name, monos in sector_fn(lat, i, j):
            sector_terms = jw_transform_sum(monos, ordering)
            terms.extend(sector_terms)
            labels.extend([name] * len(sector_terms))
        groups.append(SiteTermGroup((i, j), tuple(terms), tuple(labels)))
    return groups


def build_hubbard(lattice: LatticeSpec) -> list[SiteTermGroup]:
    """Jordan-Wigner Hubbard Hamiltonian grouped by owning site."""
    return _build(lattice, _hubbard_sectors)


def build_tj(lattice: LatticeSpec) -> list[SiteTermGroup]:
    """Jordan-Wigner t-J Hamiltonian with locally projected hopping, grouped by site."""
    return _build(lattice, _tj_sectors)


def build_model(model: str, lattice: LatticeSpec) -> list[SiteTermGroup]:
    if model == "hubbard":
        return build_hubbard(lattice)
    if model == "tj":
        return build_tj(lattice)
    raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")


def all_terms(groups: Iterable[SiteTermGroup]) -> list[HamTerm]:
    return [term for g in groups for term in g.terms]


def pauli_depth(groups: Iterable[SiteTermGroup]) -> int:
    """Maximum Pauli weight over all terms."""
    groups = list(groups)
    if not groups:
        raise ValueError("no site groups given")
    return max((term.pauli.weight for g in groups for term in g.terms), default=0)


# ---------------------------------------------------------------------------
# golden tables
# ---------------------------------------------------------------------------

_GOLDEN_FILES = {"hubbard": "table_hubbard.txt", "tj": "table_tj.txt"}
_PARAM_NAMES = {"t": (1, 0, 0), "U": (0, 1, 0), "J": (0, 0, 1)}


@dataclass(frozen=True)
class GoldenEntry:
    delta: int
    coeff: Coefficient
    spec: str  # canonical relative Pauli spec


def parse_monomial(text: str) -> Coefficient:
    """Parse ``"-1/8 t"`` style prefactors."""
    parts = text.split()
    if len(parts) != 2 or parts[1] not in _PARAM_NAMES:
        raise ValueError(f"bad coefficient field {text!r}")
    a, b, c = _PARAM_NAMES[parts[1]]
    return Coefficient.monomial(Fraction(parts[0]), a, b, c)


def _canonical_spec(tokens: Iterable[str]) -> str:
    toks = sorted(set(tokens) - {"I"}, key=lambda s: (s != "S", s[1:], s[0]))
    return " ".join(toks) if toks else "I"


def load_golden_table(model: str, text: str | None = None) -> list[GoldenEntry]:
    """Read a golden fixture: ``delta | coefficient | pauli_spec`` per line.

    ``pauli_spec`` lists factors ``P(dr,dc)`` relative to the site's spin-up
    qubit (``dr`` rows down, ``dc`` spinless columns right); the token ``S``
    stands for the vertical-hop parity string.  ``#`` starts a comment.
    """
    if text is None:
        text = resources.files("trotterbound.data").joinpath(_GOLDEN_FILES[model]).read_text()
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split("|")]
        if len(fields) != 3:
            raise ValueError(f"malformed golden line {raw!r}")
        entries.append(GoldenEntry(int(fields[0]), parse_monomial(fields[1]), _canonical_spec(fields[2].split())))
    return entries


def relative_spec(lattice: LatticeSpec, site: tuple[int, int], pauli: PauliString) -> str:
    """Describe ``pauli`` relative to ``site`` in golden-fixture notation.

    Z factors making up the vertical parity string between the site's row
    segment right of ``2j + 1`` and the next row left of ``2j`` collapse to ``S``.
    """
    i, j = site
    cols = 2 * lattice.n_x
    base = lattice.qubit(i, j, UP)
    string = 0
    if i + 1 < lattice.n_y:
        for q in range(base + 2, lattice.ordering.index(i + 1, 2 * j)):
            string |= 1 << q
    ops = pauli.sparse()
    tokens = []
    collapse = bool(string) and all(ops.get(q) == "Z" for q in range(pauli.n_qubits) if (string >> q) & 1)
    if collapse:
        tokens.append("S")
    for q, ch in ops.items():
        if collapse and (string >> q) & 1:
            continue
        r, c = divmod(q, cols)
        tokens.append(f"{ch}({r - i},{c - 2 * j})")
    return _canonical_spec(tokens)


@dataclass
class GoldenReport:
    model: str
    n_expected: int
    n_generated: int
    missing: list[str]
    extra: list[str]
    misweighted: list[str]

    @property
    def matched(self) -> int:
        return self.n_expected - len(self.missing) - len(self.misweighted)

    @property
    def ok(self) -> bool:
        return not (self.missing or self.extra or self.misweighted)

    def __bool__(self) -> bool:
        return self.ok

    def diff(self) -> str:
        lines = [f"{self.model}: {self.matched}/{self.n_expected} matched"]
        lines += [f"  missing     {s}" for s in self.missing]
        lines += [f"  extra       {s}" for s in self.extra]
        lines += [f"  misweighted {s}" for s in self.misweighted]
        return "\n".join(lines)


def table_golden_check(model: str, golden_text: str | None = None) -> GoldenReport:
    """Compare an interior-site decomposition with the golden table.

    Terms are compared as multisets of ``(relative Pauli string, |coeff|)``.
    The reference site is ``(0, 1)`` of a 3x2 open lattice, which has both
    neighbours and a parity string on each side.
    """
    golden = load_golden_table(model, golden_text)
    lattice = LatticeSpec.square(3, 2)
    site = (0, 1)
    group = next(g for g in build_model(model, lattice) if g.site == site)
    generated = Counter((relative_spec(lattice, site, h.pauli), abs(h.coeff)) for h in group.terms)
    expected = Counter((e.spec, abs(e.coeff)) for e in golden)
    missing, extra, misweighted = [], [], []
    gen_left = generated - expected
    exp_left = expected - generated
    gen_specs = Counter(spec for spec, _ in gen_left.elements())
    for spec, coeff in exp_left.elements():
        if gen_specs[spec]:
            gen_specs[spec] -= 1
            got = next(c for s, c in gen_left.elements() if s == spec)
            misweighted.append(f"{spec}: expected |{coeff}|, generated |{got}|")
        else:
            missing.append(f"{spec} |{coeff}|")
    bad_specs = {m.split(":")[0] for m in misweighted}
    for spec, coeff in gen_left.elements():
        if spec not in bad_specs:
            extra.append(f"{spec} |{coeff}|")
    return GoldenReport(model, sum(expected.values()), len(group.terms), missing, extra, misweighted)
