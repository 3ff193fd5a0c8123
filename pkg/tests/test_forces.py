import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispersia import (CausalityViolation, IdealReflector, LayerStack, MaterialModel,
                       OscillatorPolarizability, QuadratureSpec, Susceptibility,
                       clausius_mosotti, cp_force_atom, cp_force_atom_nonretarded_check,
                       cp_force_medium_atom, lifshitz_pressure, micro_object_force,
                       mirror_pressure_limit, retarded_mirror_limit)

# [DERIVED] mpmath double quadrature, static alpha = 1, mirror, z = 1: equals -3/(8 pi^2)
CP_STATIC_MIRROR_Z1 = -0.0379954438658766642914547987036
# [DERIVED] mpmath double quadrature of the two-mirror pressure at d = 1: equals -pi^2/240
MIRROR_PRESSURE_D1 = -0.0411233516712056609118103791662
# [DERIVED] mpmath: int alpha (eps-1)/(eps+1) dxi for alpha = 1/(1+xi^2), eps(0) = 2 one-pole
NONRETARDED_INTEGRAL = 0.288246496633032523687285331969


def static_alpha(xi):
    return np.ones_like(np.asarray(xi, dtype=float))


def zero_alpha(xi):
    return np.zeros_like(np.asarray(xi, dtype=float))


def test_zero_polarizability_gives_zero(mirror):
    assert cp_force_atom(zero_alpha, mirror, 1.0).fz == 0.0


def test_vacuum_stack_gives_zero(atom):
    res = cp_force_atom(atom, LayerStack.vacuum(), 1.0)
    assert np.all(res.force == 0.0) and res.converged


def test_static_mirror_force_matches_oracle(mirror, tight):
    res = cp_force_atom(static_alpha, mirror, 1.0, tight)
    assert res.fz == pytest.approx(CP_STATIC_MIRROR_Z1, rel=1e-8)


def test_retarded_mirror_limit(atom, mirror):
    res = cp_force_atom(atom, mirror, 100.0)
    assert res.fz == pytest.approx(retarded_mirror_limit(1.0, 100.0), rel=1e-2)


def test_nonretarded_check_vanishes_without_contrast(atom):
    res = cp_force_atom_nonretarded_check(atom, LayerStack.halfspace(MaterialModel.constant(1.0)),
                                          0.1)
    assert res.fz == 0.0


def test_nonretarded_check_mirror_is_alpha_integral(atom, mirror, tight):
    z = 0.5
    res = cp_force_atom_nonretarded_check(atom, mirror, z, tight)
    assert res.fz == pytest.approx(-3.0 / (16 * np.pi**2 * z**4) * np.pi / 2, rel=1e-9)


def test_nonretarded_check_dielectric_oracle(atom, dielectric, tight):
    z = 0.2
    res = cp_force_atom_nonretarded_check(atom, dielectric, z, tight)
    assert res.fz == pytest.approx(-3 * NONRETARDED_INTEGRAL / (16 * np.pi**2 * z**4), rel=1e-9)


def test_nonretarded_limit_reached(atom, dielectric):
    full = cp_force_atom(atom, dielectric, 1e-3)
    asym = cp_force_atom_nonretarded_check(atom, dielectric, 1e-3)
    assert full.fz == pytest.approx(asym.fz, rel=2e-2)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.01, 50.0))
def test_cp_force_attractive_and_decaying(z):
    atom = OscillatorPolarizability.single(1.0, 1.0)
    stack = LayerStack.halfspace(MaterialModel.lorentz(3.0, 0.8))
    near = cp_force_atom(atom, stack, z).fz
    far = cp_force_atom(atom, stack, 1.5 * z).fz
    assert near < far < 0


def test_error_estimate_and_breakdown(atom, dielectric):
    res = cp_force_atom(atom, dielectric, 0.5)
    assert res.converged and 0 < res.error_estimate < 1e-5 * abs(res.fz)
    assert sum(res.breakdown.values()) == pytest.approx(res.fz, rel=1e-10)


def test_medium_atom_vacuum_is_zero(atom):
    assert cp_force_medium_atom(atom, None, LayerStack.vacuum(), 1.0).fz == 0.0


def test_medium_atom_equal_amplitudes_give_zero(atom):
    marker = LayerStack.halfspace(IdealReflector(r_s=0.4, r_p=0.4))
    assert cp_force_medium_atom(atom, None, marker, 0.7).fz == 0.0


@pytest.mark.parametrize("z", [0.05, 0.5, 3.0])
def test_medium_atom_two_paths_agree(atom, dielectric, z):
    a = cp_force_medium_atom(atom, None, dielectric, z, method="closed-form")
    b = cp_force_medium_atom(atom, None, dielectric, z, method="tensor")
    assert a.fz == pytest.approx(b.fz, rel=1e-6)


def test_medium_atom_enforces_gate(atom, dielectric):
    with pytest.raises(CausalityViolation):
        cp_force_medium_atom(atom, 3.5, dielectric, 1.0)


def test_medium_atom_is_screened_relative_to_vacuum_atom(atom, dielectric):
    screened = cp_force_medium_atom(atom, None, dielectric, 0.5).fz
    bare = cp_force_atom(atom, dielectric, 0.5).fz
    assert abs(screened) < abs(bare)


def test_micro_object_empty_medium(atom, mirror):
    empty = clausius_mosotti(0.0, atom)
    assert micro_object_force(empty, 1e-3, mirror, 1.0).fz == 0.0


def test_micro_object_weak_limit(atom, dielectric):
    medium = clausius_mosotti(3e-4, atom)   # eta alpha(0)/3 = 1e-4
    vol = 2e-3
    obj = micro_object_force(medium, vol, dielectric, 0.4)
    single = cp_force_atom(atom, dielectric, 0.4)
    assert obj.fz == pytest.approx(vol * medium.density * single.fz, rel=5e-4)


def test_micro_object_weak_flag_is_linear_superposition(atom, dielectric):
    medium = Susceptibility.with_static_chi(0.5, atom)
    obj = micro_object_force(medium, 1e-3, dielectric, 0.4, weak=True, spec=QuadratureSpec(1e-9))
    single = cp_force_atom(atom, dielectric, 0.4, QuadratureSpec(1e-9))
    assert obj.fz == pytest.approx(1e-3 * medium.density * single.fz, rel=1e-8)


@pytest.mark.parametrize("z", [0.05, 0.3, 2.0])
def test_local_field_enhances_isolated_object(atom, dielectric, z):
    medium = clausius_mosotti(0.6, atom)    # gate 0.2
    full = micro_object_force(medium, 1e-3, dielectric, z)
    weak = micro_object_force(medium, 1e-3, dielectric, z, weak=True)
    assert abs(full.fz) > abs(weak.fz)


def test_embedded_object_uses_screened_kernel(atom, dielectric):
    medium = Susceptibility.with_static_chi(0.2, atom)
    emb = micro_object_force(medium, 1e-3, dielectric, 0.5, shape="embedded")
    ref = cp_force_medium_atom(medium.chi, None, dielectric, 0.5)
    assert emb.fz == pytest.approx(1e-3 * ref.fz, rel=1e-6)


def test_lifshitz_vacuum_side_is_zero(mirror):
    assert lifshitz_pressure(mirror, 1.0, LayerStack.vacuum()).fz == 0.0


def test_lifshitz_mirror_oracle(mirror, tight):
    res = lifshitz_pressure(mirror, 1.0, mirror, tight)
    assert res.fz == pytest.approx(MIRROR_PRESSURE_D1, rel=1e-9)
    assert res.fz == pytest.approx(mirror_pressure_limit(1.0), rel=1e-9)


@pytest.mark.parametrize("d", [0.01, 1.0, 100.0])
def test_lifshitz_mirror_faster_than_cubic(mirror, d):
    assert abs(lifshitz_pressure(mirror, 2 * d, mirror).fz) < abs(
        lifshitz_pressure(mirror, d, mirror).fz) / 8


def test_lifshitz_dielectric_weaker_than_mirror(mirror, dielectric):
    p = lifshitz_pressure(dielectric, 0.5, dielectric).fz
    assert mirror_pressure_limit(0.5) < p < 0


def test_lifshitz_symmetric_in_walls(mirror, dielectric):
    a = lifshitz_pressure(mirror, 0.5, dielectric, QuadratureSpec(1e-9)).fz
    b = lifshitz_pressure(dielectric, 0.5, mirror, QuadratureSpec(1e-9)).fz
    assert a == pytest.approx(b, rel=1e-9)
