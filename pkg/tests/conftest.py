import numpy as np
import pytest
from hypothesis import strategies as st

from trotterbound.pauli import PauliString

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def label_matrix(label: str, phase: int = 0) -> np.ndarray:
    """Kronecker product with character 0 as the most significant factor."""
    mat = np.array([[1j**phase]], dtype=complex)
    for ch in label:
        mat = np.kron(mat, _SINGLE[ch])
    return mat


def pauli_strings(min_qubits=1, max_qubits=6, n_qubits=None):
    sizes = st.just(n_qubits) if n_qubits else st.integers(min_qubits, max_qubits)
    return sizes.flatmap(
        lambda n: st.builds(
            lambda lab, ph: PauliString.from_label(lab, ph),
            st.text(alphabet="IXYZ", min_size=n, max_size=n),
            st.integers(0, 3),
        )
    )


@pytest.fixture
def dense():
    return label_matrix
