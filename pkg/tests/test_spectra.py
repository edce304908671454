import numpy as np
import pytest

from trotterbound.models import LatticeSpec, ModelParams, build_model
from trotterbound.pauli import Coefficient, HamTerm, PauliString
from trotterbound.spectra import (
    DenseOperator,
    SectorFilter,
    eigenvalues,
    four_site_overlap,
    levels_to_csv,
    number_operator,
    sector_mask,
    spectrum_overlap,
    terms_to_dense,
    to_dense,
)

HALF_Z = [HamTerm(Coefficient.constant(0.5), PauliString.from_label("Z"))]


def test_single_z():
    assert np.allclose(terms_to_dense(HALF_Z), np.diag([0.5, -0.5]))
    assert list(eigenvalues(terms_to_dense(HALF_Z))) == [-0.5, 0.5]


def test_single_site_hubbard():
    op = to_dense(build_model("hubbard", LatticeSpec.square(1, 1)), ModelParams(t=1.0, u=1.0))
    # |00> is the doubly occupied state
    assert np.allclose(op.matrix, np.diag([1, 0, 0, 0]))
    assert sorted(eigenvalues(op)) == [0, 0, 0, 1]


def test_qubit_budget():
    with pytest.raises(ValueError):
        to_dense(build_model("hubbard", LatticeSpec.square(4, 2)), ModelParams(t=1.0, u=1.0))


def test_non_hermitian_rejected():
    with pytest.raises(ValueError):
        eigenvalues(np.array([[0, 1], [0, 0]], dtype=complex))


def test_four_site_hubbard_matrix():
    params = ModelParams(t=0.1, u=10.0)
    op = to_dense(build_model("hubbard", LatticeSpec.chain(4)), params)
    assert op.dimension == 256 and op.is_hermitian()
    # trace of U sum n_up n_down over the Fock space: 4 sites * U * 2**6
    assert np.trace(op.matrix).real == pytest.approx(4 * 10.0 * 2**6)


@pytest.mark.parametrize("model", ["hubbard", "tj"])
@pytest.mark.parametrize("lattice", [LatticeSpec.chain(4), LatticeSpec.square(2, 2), LatticeSpec.square(3, 2, "periodic")])
def test_particle_number_conserved(model, lattice):
    op = to_dense(build_model(model, lattice), ModelParams(t=0.4, u=3.0, j=0.9))
    n = np.diag(number_operator(lattice.n_qubits))
    # [H, N] for diagonal N, elementwise
    assert np.abs(op.matrix * (n[None, :] - n[:, None])).max() < 1e-10


def test_double_occupancy_block_invariant_for_tj():
    lat = LatticeSpec.chain(3)
    op = to_dense(build_model("tj", lat), ModelParams(t=0.4, j=0.9)).matrix
    keep = sector_mask(lat.n_qubits, SectorFilter(exclude_double_occupancy=True))
    assert np.abs(op[np.ix_(keep, ~keep)]).max() < 1e-12


def test_sector_sizes():
    assert sector_mask(8, SectorFilter(4)).sum() == 70
    assert sector_mask(8, SectorFilter(4, True)).sum() == 16
    with pytest.raises(ValueError):
        sector_mask(3, SectorFilter(exclude_double_occupancy=True))


def test_two_site_hubbard_analytic():
    t, u = 1.0, 4.0
    op = to_dense(build_model("hubbard", LatticeSpec.chain(2)), ModelParams(t=t, u=u))
    levels = eigenvalues(op, SectorFilter(2))
    assert levels[0] == pytest.approx((u - np.sqrt(u * u + 16 * t * t)) / 2)


def test_hopping_sign_gauge_leaves_spectrum():
    lat = LatticeSpec.chain(3)
    groups = build_model("hubbard", lat)
    plus = eigenvalues(to_dense(groups, ModelParams(t=0.7, u=2.0)))
    minus = eigenvalues(to_dense(groups, ModelParams(t=-0.7, u=2.0)))
    assert np.allclose(plus, minus)


def test_overlap_identical():
    r = spectrum_overlap([1.0, 2.0, 5.0], [1.0, 2.0], 0.5)
    assert r.deviation == 0 and r.n_levels == 2


def test_overlap_errors():
    with pytest.raises(ValueError):
        spectrum_overlap([], [1.0], 1.0)
    with pytest.raises(ValueError):
        spectrum_overlap([1.0], [1.0, 2.0], 1.0)


def test_low_band_on_exchange_scale():
    report, hub, _ = four_site_overlap(0.1, 100.0)
    j = 0.004
    band = hub[:16] - hub[0]
    assert band.max() < 3 * j
    assert hub[16] - hub[0] > 100 * j


def test_unfiltered_tj_spectrum_differs():
    report, _, tj = four_site_overlap(0.1, 100.0, exclude_double_occupancy=False)
    assert report.deviation > 1.0


def test_csv():
    text = levels_to_csv([-1.0, 0.5], "N=2")
    assert text == "index,eigenvalue,sector\n0,-1,N=2\n1,0.5,N=2\n"


def test_dense_operator_wrapper():
    op = DenseOperator(np.eye(2), 1)
    assert op.dimension == 2 and op.is_hermitian()
