import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rezqu.basis import (
    BASIS,
    DeviceParams,
    assemble_hamiltonian,
    bare_energies,
    block_indices,
    excitation_number,
    gd_coupling,
    ghz,
)

couplings = st.floats(0.0, 0.1)
freqs = st.floats(5.5, 7.5)


@st.composite
def devices(draw, include_gd=None):
    f_b = draw(st.floats(5.0, 6.5))
    f_m = draw(st.floats(f_b + 0.2, 8.0))
    gd = draw(st.booleans()) if include_gd is None else include_gd
    return DeviceParams(f_m=f_m, f_b=f_b, eta=draw(st.floats(0.0, 0.4)), g_m=draw(couplings), g_b=draw(couplings), include_gd=gd)


def test_basis_size_and_order():
    assert len(BASIS) == 10
    assert [s.n_exc for s in BASIS] == sorted(s.n_exc for s in BASIS)
    assert len(block_indices(0)) == 1 and len(block_indices(1)) == 3 and len(block_indices(2)) == 6


@given(devices(), freqs)
def test_hermitian(params, f_q):
    h = assemble_hamiltonian(params, ghz(f_q))
    assert np.max(np.abs(h - h.conj().T)) < 1e-14 * np.max(np.abs(h))


@given(devices(), freqs)
def test_block_structure_exact(params, f_q):
    h = assemble_hamiltonian(params, ghz(f_q))
    n = excitation_number()
    assert np.all(h[n[:, None] != n[None, :]] == 0.0)


@given(devices(include_gd=False), freqs, st.floats(0.1, 3.0))
def test_linear_in_couplings(params, f_q, lam):
    w = ghz(f_q)
    h00 = assemble_hamiltonian(params.replace(g_m=0.0, g_b=0.0), w)
    h = assemble_hamiltonian(params, w) - h00
    hm = assemble_hamiltonian(params.replace(g_b=0.0), w) - h00
    hb = assemble_hamiltonian(params.replace(g_m=0.0), w) - h00
    scaled = assemble_hamiltonian(params.replace(g_m=lam * params.g_m, g_b=lam * params.g_b), w) - h00
    assert np.allclose(h, hm + hb, atol=1e-13)
    assert np.allclose(scaled, lam * h, atol=1e-12)


@given(devices(include_gd=True), freqs, st.floats(0.25, 4.0))
def test_direct_coupling_scales_quadratically(params, f_q, lam):
    w = ghz(f_q)
    base = gd_coupling(params, w)
    scaled = gd_coupling(params.replace(g_m=lam * params.g_m, g_b=lam * params.g_b), w)
    assert scaled == pytest.approx(lam**2 * base, rel=1e-12, abs=1e-300)
    # the memory-bus element is exactly that coupling
    h = assemble_hamiltonian(params, w)
    i, j = BASIS.index((1, 0, 0)), BASIS.index((0, 0, 1))
    assert h[i, j] == pytest.approx(base, rel=1e-12, abs=1e-300)


def test_bare_limit():
    params = DeviceParams(g_m=0.0, g_b=0.0)
    w = ghz(6.5)
    h = assemble_hamiltonian(params, w)
    assert np.allclose(np.diag(h).real, bare_energies(params, w))
    assert np.allclose(h, np.diag(np.diag(h)))


@pytest.mark.parametrize(
    "kw",
    [dict(f_m=6.0, f_b=7.0), dict(g_m=-0.01), dict(eta=-0.1), dict(f_b=0.0, f_m=1.0)],
)
def test_invalid_params(kw):
    with pytest.raises(ValueError):
        DeviceParams(**kw)


def test_nonpositive_qubit_frequency():
    with pytest.raises(ValueError):
        assemble_hamiltonian(DeviceParams(), 0.0)
