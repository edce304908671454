"""Jordan-Wigner mapping of spinless fermionic monomials onto Pauli strings.

Sites are linear indices on a row-major grid (``index = row * n_cols + col``).
With that ordering the two-dimensional parity string of site ``(row, col)``
(all earlier rows, then the earlier columns of its own row) is exactly the
one-dimensional string over linear indices, so one code path serves both.

Conventions: ``c^dag_k = Z_0 ... Z_{k-1} (X_k + iY_k)/2`` and
``n_k = (1 + Z_k)/2``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from trotterbound.pauli import Coefficient, HamTerm, PauliString, multiply

__all__ = [
    "FermionMonomial",
    "FermionOp",
    "JWOrdering",
    "OpKind",
    "TermAccumulator",
    "dense_fermion_ops",
    "jw_transform_monomial",
    "jw_transform_op",
    "jw_transform_sum",
    "string_support",
    "verify_car",
]


class OpKind(enum.Enum):
    CREATE = "create"
    ANNIHILATE = "annihilate"
    NUMBER = "number"
    ONE_MINUS_NUMBER = "one_minus_number"


@dataclass(frozen=True)
class FermionOp:
    kind: OpKind
    site: int

    @classmethod
    def create(cls, site: int) -> FermionOp:
        return cls(OpKind.CREATE, site)

    @classmethod
    def annihilate(cls, site: int) -> FermionOp:
        return cls(OpKind.ANNIHILATE, site)

    @classmethod
    def number(cls, site: int) -> FermionOp:
        return cls(OpKind.NUMBER, site)

    @classmethod
    def hole(cls, site: int) -> FermionOp:
        """``1 - n`` at ``site``."""
        return cls(OpKind.ONE_MINUS_NUMBER, site)


@dataclass(frozen=True)
class FermionMonomial:
    """Ordered product ``scalar * f_1 f_2 ... f_k``; no reordering is ever applied."""

    factors: tuple[FermionOp, ...]
    scalar: Coefficient = field(default_factory=lambda: Coefficient.constant(1))

    def __init__(self, factors: Iterable[FermionOp], scalar: Coefficient | int | Fraction = 1) -> None:
        object.__setattr__(self, "factors", tuple(factors))
        if not isinstance(scalar, Coefficient):
            scalar = Coefficient.constant(scalar)
        object.__setattr__(self, "scalar", scalar)


@dataclass(frozen=True)
class JWOrdering:
    """Row-major ordering of an ``n_rows x n_cols`` spinless grid."""

    n_rows: int
    n_cols: int
    dimension: int = 2

    def __post_init__(self) -> None:
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValueError("grid must be at least 1x1")
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        if self.dimension == 1 and self.n_rows != 1:
            raise ValueError("a 1D ordering has a single row")

    @classmethod
    def chain(cls, n_sites: int) -> JWOrdering:
        return cls(1, n_sites, dimension=1)

    @property
    def n_sites(self) -> int:
        return self.n_rows * self.n_cols

    def index(self, row: int, col: int) -> int:
        if not (0 <= row < self.n_rows and 0 <= col < self.n_cols):
            raise ValueError(f"site ({row}, {col}) outside {self.n_rows}x{self.n_cols} grid")
        return row * self.n_cols + col

    def coords(self, index: int) -> tuple[int, int]:
        self._check(index)
        return divmod(index, self.n_cols)

    def _check(self, site: int) -> None:
        if not 0 <= site < self.n_sites:
            raise ValueError(f"site {site} outside 0..{self.n_sites - 1}")


class TermAccumulator:
    """Merges ``coeff * i**k * P`` contributions keyed by Pauli masks.

    Real and imaginary parts are tracked as separate exact polynomials so that
    Hermitian-conjugate pairs cancel their ``i`` parts symbolically.
    """

    def __init__(self, n_qubits: int) -> None:
        self.n_qubits = n_qubits
        self._re: dict[tuple[int, int], Coefficient] = {}
        self._im: dict[tuple[int, int], Coefficient] = {}

    def add(self, coeff: Coefficient, pauli: PauliString) -> None:
        key = (pauli.x_mask, pauli.z_mask)
        target = self._re if pauli.phase % 2 == 0 else self._im
        c = coeff if pauli.phase in (0, 1) else -coeff
        target[key] = target.get(key, Coefficient()) + c

    def add_term(self, term: HamTerm) -> None:
        self.add(term.coeff, term.pauli)

    def terms(self, *, require_hermitian: bool = False) -> list[HamTerm]:
        out: list[HamTerm] = []
        for keys, phase in ((self._re, 0), (self._im, 1)):
            for (x, z), c in keys.items():
                if not c:
                    continue
                if phase and require_hermitian:
                    raise ValueError(
                        f"imaginary coefficient survives on {PauliString(self.n_qubits, x, z).label}"
                    )
                out.append(HamTerm(c, PauliString(self.n_qubits, x, z, phase)))
        out.sort(key=lambda h: (h.pauli.x_mask, h.pauli.z_mask, h.pauli.phase))
        return out


def string_support(site: int) -> int:
    """Mask of the Z parity string attached to ``site`` (all lower linear indices)."""
    return (1 << site) - 1


def jw_transform_op(op: FermionOp, ordering: JWOrdering) -> list[HamTerm]:
    """Expand one fermionic operator into Pauli terms (phases ``+-i`` kept)."""
    ordering._check(op.site)
    n = ordering.n_sites
    bit = 1 << op.site
    half = Coefficient.constant(Fraction(1, 2))
    if op.kind in (OpKind.NUMBER, OpKind.ONE_MINUS_NUMBER):
        sign = 1 if op.kind is OpKind.NUMBER else -1
        return [
            HamTerm(half, PauliString(n)),
            HamTerm(half * sign, PauliString(n, 0, bit)),
        ]
    string = string_support(op.site)
    # sigma^+ = (X + iY)/2, sigma^- = (X - iY)/2
    y_phase = 1 if op.kind is OpKind.CREATE else 3
    return [
        HamTerm(half, PauliString(n, bit, string)),
        HamTerm(half, multiply(PauliString(n, 0, string), PauliString(n, bit, bit, y_phase))),
    ]


def _product(left: list[HamTerm], right: list[HamTerm], n: int) -> list[HamTerm]:
    acc = TermAccumulator(n)
    for a in left:
        for b in right:
            acc.add(a.coeff * b.coeff, multiply(a.pauli, b.pauli))
    return acc.terms()


def jw_transform_monomial(m: FermionMonomial, ordering: JWOrdering) -> list[HamTerm]:
    """Multiply out the Pauli expansion of an ordered fermionic product."""
    n = ordering.n_sites
    terms = [HamTerm(m.scalar, PauliString(n))]
    for op in m.factors:
        terms = _product(terms, jw_transform_op(op, ordering), n)
    return terms


def jw_transform_sum(
    monomials: Sequence[FermionMonomial], ordering: JWOrdering, *, hermitian: bool = True
) -> list[HamTerm]:
    """Transform and merge a sum of monomials.

    With ``hermitian`` set, any surviving imaginary coefficient raises
    ``ValueError``.
    """
    acc = TermAccumulator(ordering.n_sites)
    for m in monomials:
        for term in jw_transform_monomial(m, ordering):
            acc.add_term(term)
    return acc.terms(require_hermitian=hermitian)


def dense_fermion_ops(n_sites: int) -> list[np.ndarray]:
    """Annihilation matrices built directly from occupation-number states.

    Independent of the Pauli machinery: basis state ``b`` has site ``k``
    occupied when bit ``k`` of ``b`` is *clear* (matching ``n = (1 + Z)/2``
    with qubit 0 the most significant tensor factor), and the fermionic sign
    is ``(-1)**(occupied sites below k)``.  Because ``Z = 2n - 1`` on the
    string, the Pauli-form ``c_k`` equals these matrices times ``(-1)**k``.
    """
    dim = 1 << n_sites
    ops = []
    for k in range(n_sites):
        mat = np.zeros((dim, dim))
        for b in range(dim):
            occ = [((b >> (n_sites - 1 - s)) & 1) == 0 for s in range(n_sites)]
            if not occ[k]:
                continue
            sign = (-1) ** sum(occ[:k])
            target = b ^ (1 << (n_sites - 1 - k))
            mat[target, b] = sign
        ops.append(mat)
    return ops


def verify_car(ordering: JWOrdering, max_sites: int = 6, atol: float = 1e-12) -> bool:
    """Check ``{c_a, c_b^dag} = delta_ab`` and ``{c_a, c_b} = 0`` on dense matrices."""
    from trotterbound.spectra import terms_to_dense

    n = ordering.n_sites
    if n > max_sites:
        raise ValueError(f"{n} sites exceeds max_sites={max_sites}")
    ann = [terms_to_dense(jw_transform_op(FermionOp.annihilate(k), ordering)) for k in range(n)]
    cre = [terms_to_dense(jw_transform_op(FermionOp.create(k), ordering)) for k in range(n)]
    eye = np.eye(1 << n)
    for a in range(n):
        for b in range(n):
            if not np.allclose(ann[a] @ cre[b] + cre[b] @ ann[a], eye if a == b else 0, atol=atol, rtol=0):
                return False
            if not np.allclose(ann[a] @ ann[b] + ann[b] @ ann[a], 0, atol=atol, rtol=0):
                return False
    return True
