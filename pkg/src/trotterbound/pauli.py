"""Exact algebra of Pauli strings and parameter polynomials.

Pauli strings use the symplectic encoding: qubit ``q`` carries X when only
bit ``q`` of ``x_mask`` is set, Z when only ``z_mask`` is set and Y when both
are.  The overall phase is stored as an exponent ``k`` of ``i**k``.

Polynomial prefactors (:class:`Coefficient`) are exact rational combinations
of monomials ``t**a * U**b * J**c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

__all__ = [
    "Coefficient",
    "HamTerm",
    "PauliString",
    "commutator_norm",
    "commutes",
    "multiply",
]

_LABELS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_PHASE_LABELS = {0: "+", 1: "+i", 2: "-", 3: "-i"}

Monomial = tuple[int, int, int]
PARAMS = ("t", "U", "J")


@dataclass(frozen=True, order=True)
class PauliString:
    """An ``n_qubits`` Pauli product ``i**phase * P_0 P_1 ... P_{n-1}``."""

    n_qubits: int
    x_mask: int = 0
    z_mask: int = 0
    phase: int = 0

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        full = (1 << self.n_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has bits beyond n_qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n_qubits: int) -> PauliString:
        return cls(n_qubits)

    @classmethod
    def from_label(cls, label: str, phase: int = 0) -> PauliString:
        """Build from a label such as ``"XIZY"``; character ``q`` acts on qubit ``q``."""
        x = z = 0
        for q, ch in enumerate(label.upper()):
            if ch in "XY":
                x |= 1 << q
            if ch in "ZY":
                z |= 1 << q
            if ch not in "IXYZ":
                raise ValueError(f"invalid Pauli label {ch!r}")
        return cls(len(label), x, z, phase)

    @classmethod
    def from_sparse(cls, n_qubits: int, ops: Mapping[int, str], phase: int = 0) -> PauliString:
        """Build from ``{qubit: 'X' | 'Y' | 'Z'}``."""
        chars = ["I"] * n_qubits
        for q, ch in ops.items():
            if not 0 <= q < n_qubits:
                raise ValueError(f"qubit {q} out of range")
            chars[q] = ch
        return cls.from_label("".join(chars), phase)

    @property
    def label(self) -> str:
        return "".join(
            _LABELS[((self.x_mask >> q) & 1, (self.z_mask >> q) & 1)] for q in range(self.n_qubits)
        )

    @property
    def support(self) -> int:
        """Bit mask of qubits carrying a non-identity factor."""
        return self.x_mask | self.z_mask

    @property
    def weight(self) -> int:
        return self.support.bit_count()

    @property
    def is_identity(self) -> bool:
        return self.support == 0

    def sparse(self) -> dict[int, str]:
        return {q: ch for q, ch in enumerate(self.label) if ch != "I"}

    def unsigned(self) -> PauliString:
        """The same string with phase ``+1``."""
        return PauliString(self.n_qubits, self.x_mask, self.z_mask)

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __str__(self) -> str:
        return f"{_PHASE_LABELS[self.phase]}{self.label}"


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Return the product ``p @ q`` with exact phase."""
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} != {q.n_qubits}")
    # sigma(x, z) = i**(x.z) X**x Z**z; reorder Z**z1 X**x2 at cost (-1)**(z1.x2)
    x = p.x_mask ^ q.x_mask
    z = p.z_mask ^ q.z_mask
    k = (
        p.phase
        + q.phase
        + (p.x_mask & p.z_mask).bit_count()
        + (q.x_mask & q.z_mask).bit_count()
        + 2 * (p.z_mask & q.x_mask).bit_count()
        - (x & z).bit_count()
    )
    return PauliString(p.n_qubits, x, z, k)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff ``[p, q] = 0`` (even symplectic inner product)."""
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} != {q.n_qubits}")
    return ((p.x_mask & q.z_mask).bit_count() + (p.z_mask & q.x_mask).bit_count()) % 2 == 0


class Coefficient:
    """Exact polynomial ``sum_k r_k t**a U**b J**c`` with rational weights.

    Keys are exponent triples ``(a, b, c)``.  Zero weights are never stored,
    so two equal polynomials always compare and hash equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Rational | int] | None = None) -> None:
        clean: dict[Monomial, Fraction] = {}
        for key, val in (terms or {}).items():
            if len(key) != 3 or any(int(e) != e or e < 0 for e in key):
                raise ValueError(f"invalid monomial key {key!r}")
            val = Fraction(val)
            if val:
                k = tuple(int(e) for e in key)
                clean[k] = clean.get(k, Fraction(0)) + val
        self._terms = {k: v for k, v in sorted(clean.items()) if v}
        self._hash: int | None = None

    @classmethod
    def constant(cls, value: Rational | int) -> Coefficient:
        return cls({(0, 0, 0): value})

    @classmethod
    def monomial(cls, weight: Rational | int, t: int = 0, u: int = 0, j: int = 0) -> Coefficient:
        return cls({(t, u, j): weight})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterable[tuple[Monomial, Fraction]]:
        return self._terms.items()

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Coefficient.constant(other)
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other: Coefficient | Rational | int) -> Coefficient:
        other = _as_coeff(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Coefficient(out)

    __radd__ = __add__

    def __neg__(self) -> Coefficient:
        return Coefficient({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: Coefficient | Rational | int) -> Coefficient:
        return self + (-_as_coeff(other))

    def __rsub__(self, other: Coefficient | Rational | int) -> Coefficient:
        return _as_coeff(other) - self

    def __mul__(self, other: Coefficient | Rational | int) -> Coefficient:
        if not isinstance(other, Coefficient):
            f = Fraction(other)
            return Coefficient({k: v * f for k, v in self._terms.items()})
        out: dict[Monomial, Fraction] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
                out[k] = out.get(k, Fraction(0)) + v1 * v2
        return Coefficient(out)

    __rmul__ = __mul__

    def __abs__(self) -> Coefficient:
        # monomial-wise |r| t^a U^b J^c, i.e. parameters taken sign-definite
        return Coefficient({k: abs(v) for k, v in self._terms.items()})

    def evaluate(self, t: float = 0.0, u: float = 0.0, j: float = 0.0, *, absolute: bool = True) -> float:
        """Numeric value; with ``absolute`` each parameter enters as its magnitude."""
        if absolute:
            t, u, j = abs(t), abs(u), abs(j)
        total = 0.0
        for (a, b, c), v in self._terms.items():
            total += float(v) * t**a * u**b * j**c
        return total

    def degree(self, param: str) -> int:
        """Highest exponent of ``param`` ('t', 'U' or 'J'); -1 for the zero polynomial."""
        idx = PARAMS.index(param)
        return max((k[idx] for k in self._terms), default=-1)

    def to_json(self) -> list[dict[str, int]]:
        return [
            {"a": a, "b": b, "c": c, "numerator": v.numerator, "denominator": v.denominator}
            for (a, b, c), v in self._terms.items()
        ]

    @classmethod
    def from_json(cls, rows: Iterable[Mapping[str, int]]) -> Coefficient:
        return cls({(r["a"], r["b"], r["c"]): Fraction(r["numerator"], r["denominator"]) for r in rows})

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key, v in self._terms.items():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(PARAMS, key) if e
            )
            w = str(v) if not mono or v != 1 else ""
            parts.append("*".join(s for s in (w, mono) if s) or "1")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Coefficient({self})"


def _as_coeff(value: Coefficient | Rational | int) -> Coefficient:
    return value if isinstance(value, Coefficient) else Coefficient.constant(value)


@dataclass(frozen=True)
class HamTerm:
    """One Hamiltonian term ``coeff * pauli``.

    Signs of the Pauli phase are folded into ``coeff``; a remaining phase of
    ``+i`` is only legal on intermediate, non-Hermitian expansions.
    """

    coeff: Coefficient
    pauli: PauliString

    def __post_init__(self) -> None:
        if self.pauli.phase >= 2:
            object.__setattr__(self, "coeff", -self.coeff)
            object.__setattr__(self, "pauli", PauliString(
                self.pauli.n_qubits, self.pauli.x_mask, self.pauli.z_mask, self.pauli.phase - 2
            ))

    @property
    def is_hermitian(self) -> bool:
        return self.pauli.phase == 0

    @property
    def n_qubits(self) -> int:
        return self.pauli.n_qubits

    def __str__(self) -> str:
        i = "i*" if self.pauli.phase else ""
        return f"({self.coeff}) {i}{self.pauli.label}"


def commutator_norm(a: HamTerm, b: HamTerm) -> Coefficient:
    """Spectral norm of ``[a, b]``: zero if the strings commute, else ``2|a||b|``."""
    if commutes(a.pauli, b.pauli):
        return Coefficient()
    return abs(a.coeff) * abs(b.coeff) * 2
