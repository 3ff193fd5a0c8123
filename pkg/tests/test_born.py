import numpy as np
import pytest

from dispersia import (PERFECT_MIRROR, CausalityViolation, FreeSpaceGreen, LayerStack,
                       MaterialModel, BulkGreen, PlanarGreen, QuadratureSpec,
                       SeparationTooSmall, Susceptibility, VoxelBody, body_force_exact,
                       body_force_linear, clausius_mosotti, cp_force_atom, crossing_force,
                       micro_object_force, solve_dyson, vdw_force)

SPEC = QuadratureSpec(rel_tol=1e-10)


@pytest.fixture
def host():
    return PlanarGreen(LayerStack.halfspace(PERFECT_MIRROR))


def medium(atom, chi0):
    return Susceptibility.with_static_chi(chi0, atom)


def random_body(rng, n, atom, chi0=0.5, z0=0.5):
    picked = set()
    while len(picked) < n:
        picked.add(tuple(rng.integers(0, 4, 3)))
    centers = np.array(sorted(picked)) * 0.1 + [0.0, 0.0, z0]
    return VoxelBody(centers, 0.1, medium(atom, chi0))


def test_zero_susceptibility_returns_host(host, atom):
    body = VoxelBody.box((2, 1, 1), 0.1, [0, 0, 0.5], clausius_mosotti(0.0, atom))
    sol = solve_dyson(host, body, 0.7)
    np.testing.assert_array_equal(sol.scaled, sol.rhs)


def test_single_voxel_one_point_identity(host, atom):
    m = medium(atom, 0.75)
    body = VoxelBody([[0, 0, 1.0]], 0.05, m)
    xi = 0.6
    sol = solve_dyson(host, body, xi)
    hs = host.scattering(body.centers, body.centers, xi)[0]
    chi = m.chi(xi)
    closed = np.linalg.solve((1 + chi / 3) * np.eye(3) + chi * body.voxel_volume * hs, hs)
    assert np.abs(sol.matrix - closed / xi**2).max() <= 1e-12 * np.abs(sol.matrix).max()


def test_single_voxel_bare_form_deviation_is_self_image_term(host, atom):
    # G_V^S = [1+chi/3]^-1 G^S up to the voxel's own image, O(chi dV |H^S|)
    m = medium(atom, 0.75)
    xi = 0.6
    chi = m.chi(xi)
    devs = []
    for pitch in (0.05, 0.025):
        body = VoxelBody([[0, 0, 1.0]], pitch, m)
        sol = solve_dyson(host, body, xi)
        hs = host.scattering(body.centers, body.centers, xi)[0]
        bare = hs / (1 + chi / 3) / xi**2
        dev = np.abs(sol.matrix - bare).max() / np.abs(bare).max()
        bound = chi * body.voxel_volume * np.abs(hs).max() / (1 + chi / 3)
        assert dev <= 1.01 * bound
        devs.append(dev)
    assert devs[0] / devs[1] == pytest.approx(8.0, rel=1e-3)


def test_single_voxel_free_space_local_field_factor(atom):
    m = medium(atom, 0.75)
    fs = FreeSpaceGreen()
    sol = solve_dyson(fs, VoxelBody([[0, 0, 0]], 0.05, m), 0.6)
    col = sol.column([[0.3, 0.1, 0.5]])[0, 0]
    g = fs.full([[0, 0, 0]], [[0.3, 0.1, 0.5]], 0.6)[0] / 0.36
    assert np.abs(col - g / (1 + m.chi(0.6) / 3)).max() <= 1e-12 * np.abs(g).max()


def test_random_body_reciprocity(host, atom):
    body = random_body(np.random.default_rng(3), 20, atom)
    sol = solve_dyson(host, body, 0.9)
    assert sol.asymmetry() < 1e-12
    assert sol.residual() < 1e-12


def test_external_green_reciprocal(host, atom):
    body = random_body(np.random.default_rng(4), 6, atom)
    sol = solve_dyson(host, body, 0.9)
    a = sol.green([0.7, 0.2, 0.4], [-0.5, 0.1, 0.9])
    b = sol.green([-0.5, 0.1, 0.9], [0.7, 0.2, 0.4])
    assert np.abs(a - b.T).max() <= 1e-12 * np.abs(a).max()


def test_exact_force_zero_susceptibility(host, atom):
    body = VoxelBody([[0, 0, 1.0]], 0.1, clausius_mosotti(0.0, atom))
    assert np.all(body_force_exact(host, body).force == 0.0)


def test_weak_voxel_linearization_slope(host, atom, mirror):
    z, vol = 1.0, 0.05**3
    cp = cp_force_atom(atom, mirror, z, SPEC).fz
    chis = np.array([1e-4, 1e-3, 1e-2])
    devs = []
    for c in chis:
        m = medium(atom, c)
        f = body_force_exact(host, VoxelBody([[0, 0, z]], 0.05, m), SPEC).fz
        ref = vol * m.density * cp
        devs.append(abs(f - ref) / abs(ref))
    slope = np.polyfit(np.log(chis), np.log(devs), 1)[0]
    assert slope == pytest.approx(1.0, abs=0.1)


def test_strong_voxel_matches_local_field_formula(host, atom, mirror):
    m = medium(atom, 0.75)
    body = VoxelBody([[0, 0, 1.0]], 0.05, m)
    exact = body_force_exact(host, body, SPEC).fz
    # one-point Dyson reduction: chi G^S/(1+chi/3) = eta alpha G^S
    formula = micro_object_force(m, body.volume, mirror, 1.0, weak=True, spec=SPEC).fz
    assert exact == pytest.approx(formula, rel=1e-3)


def test_linear_single_voxel_is_superposition(host, atom, mirror):
    m = medium(atom, 0.2)
    lin = body_force_linear(host, VoxelBody([[0, 0, 0.8]], 0.1, m), SPEC).fz
    ref = micro_object_force(m, 1e-3, mirror, 0.8, spec=SPEC).fz
    assert lin == pytest.approx(ref, rel=1e-8)


def test_linear_is_additive(host, atom):
    m = medium(atom, 0.2)
    a = body_force_linear(host, VoxelBody([[0, 0, 0.5]], 0.1, m), SPEC).fz
    b = body_force_linear(host, VoxelBody([[0, 0, 0.6]], 0.1, m), SPEC).fz
    ab = body_force_linear(host, VoxelBody([[0, 0, 0.5], [0, 0, 0.6]], 0.1, m), SPEC).fz
    assert ab == pytest.approx(a + b, rel=1e-10)


def test_free_space_body_has_no_net_self_force(atom):
    body = VoxelBody.box((2, 2, 2), 0.1, [0, 0, 0], medium(atom, 0.5))
    f = body_force_exact(FreeSpaceGreen(), body, SPEC)
    assert np.abs(f.force).max() < 1e-14


def test_exact_force_attractive_over_mirror(host, atom):
    body = VoxelBody.box((2, 2, 2), 0.1, [0, 0, 0.5], medium(atom, 0.5))
    f = body_force_exact(host, body)
    assert f.fz < 0 and f.converged


def test_crossing_with_empty_body_is_zero(atom):
    b1 = VoxelBody([[0, 0, 0]], 0.05, medium(atom, 1e-3))
    b2 = VoxelBody([[0.5, 0, 0]], 0.05, clausius_mosotti(0.0, atom))
    assert np.all(crossing_force(FreeSpaceGreen(), b1, b2).force == 0.0)


@pytest.mark.parametrize("host_kind", ["free", "bulk"])
def test_crossing_reduces_to_vdw(atom, host_kind):
    prov = FreeSpaceGreen() if host_kind == "free" else BulkGreen(MaterialModel.lorentz(2.0, 1.0))
    w = medium(atom, 1e-3)
    b1 = VoxelBody([[0, 0, 1.0]], 0.05, w)
    b2 = VoxelBody([[0.2, 0.1, 0.3]], 0.05, w)
    cross = crossing_force(prov, b1, b2, SPEC).force

    def alpha(xi):
        return w.chi(xi) * b1.voxel_volume

    pair = vdw_force(alpha, alpha, prov, [0, 0, 1.0], [0.2, 0.1, 0.3], SPEC).force
    assert np.abs(cross - pair).max() <= 1e-8 * np.abs(pair).max()


def test_crossing_lex_tertia(atom):
    w = medium(atom, 1e-3)
    b1 = VoxelBody.box((2, 1, 1), 0.05, [0, 0, 1.0], w)
    b2 = VoxelBody.box((1, 2, 1), 0.05, [0.4, 0.1, 0.3], w)
    f12 = crossing_force(FreeSpaceGreen(), b1, b2).force
    f21 = crossing_force(FreeSpaceGreen(), b2, b1).force
    assert np.abs(f12 + f21).max() <= 1e-10 * np.abs(f12).max()


def test_crossing_over_mirror_matches_vdw(host, atom):
    w = medium(atom, 1e-3)
    b1 = VoxelBody([[0, 0, 1.0]], 0.05, w)
    b2 = VoxelBody([[0.2, 0.1, 0.3]], 0.05, w)
    cross = crossing_force(host, b1, b2, SPEC).force

    def alpha(xi):
        return w.chi(xi) * b1.voxel_volume

    pair = vdw_force(alpha, alpha, host, [0, 0, 1.0], [0.2, 0.1, 0.3], SPEC).force
    np.testing.assert_allclose(cross, pair, rtol=1e-6, atol=1e-8 * np.abs(pair).max())


def test_crossing_requires_separation(atom):
    w = medium(atom, 1e-3)
    b1 = VoxelBody([[0, 0, 0]], 0.1, w)
    b2 = VoxelBody([[0.2, 0, 0]], 0.1, w)
    with pytest.raises(SeparationTooSmall):
        crossing_force(FreeSpaceGreen(), b1, b2)


def test_body_validation(atom):
    m = medium(atom, 0.1)
    with pytest.raises(ValueError):
        VoxelBody([[0, 0, 0], [0.05, 0, 0]], 0.1, m)
    with pytest.raises(ValueError):
        VoxelBody(np.zeros((0, 3)), 0.1, m)
    with pytest.raises(CausalityViolation):
        VoxelBody([[0, 0, 0]], 0.1, Susceptibility(3.5, atom))


def test_generative_shapes(atom):
    m = medium(atom, 0.1)
    assert len(VoxelBody.box((2, 3, 4), 0.1, [0, 0, 1], m)) == 24
    ball = VoxelBody.sphere(0.25, 0.1, [0, 0, 1], m)
    assert np.all(np.linalg.norm(ball.centers - [0, 0, 1], axis=1) <= 0.25)
    assert len(ball) == 81


def test_voxel_text_format(atom):
    text = """# two voxels
pitch 0.1
material gas
0 0 0.5
0 0 0.6  # second
"""
    body = VoxelBody.from_text(text, {"gas": medium(atom, 0.1)})
    assert len(body) == 2 and body.pitch == 0.1
    with pytest.raises(KeyError):
        VoxelBody.from_text(text, {})
    with pytest.raises(ValueError):
        VoxelBody.from_text("pitch 0.1\nmaterial gas\n1 2\n", {"gas": medium(atom, 0.1)})


def test_grid_convergence_ratio(host, atom):
    m = medium(atom, 1.0)
    forces = [body_force_exact(host, VoxelBody.box((n, n, n), 0.4 / n, [0, 0, 0.6], m),
                               QuadratureSpec(rel_tol=1e-8)).fz for n in (1, 2, 4)]
    ratio = (forces[2] - forces[1]) / (forces[1] - forces[0])
    assert 0.15 <= ratio <= 0.6


def test_halving_chi_keeps_sign_over_dielectric(atom):
    host = PlanarGreen(LayerStack.halfspace(MaterialModel.lorentz(3.0, 1.0)))
    centers = [[0, 0, 0.4], [0.1, 0, 0.4]]
    forces = [body_force_exact(host, VoxelBody(centers, 0.1, medium(atom, c))).fz
              for c in (2.0, 1.0, 0.5, 0.25)]
    assert all(f < 0 for f in forces)
    assert all(abs(a) > abs(b) for a, b in zip(forces, forces[1:]))
