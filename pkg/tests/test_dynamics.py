"""Stepper, frozen coefficients, trajectory records, and the composed map."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tslattice.dynamics import (
    ModelConfig,
    NonlinearitySpec,
    TrajectoryRecord,
    TrajectoryStep,
    compose_map,
    evolve,
    free_field,
    linear_config,
    nonlinear_coefficient,
    step_generator,
    ts_step,
)
from tslattice.quantum_core import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    SiteOperator,
    StateVector,
    TwoSiteOperator,
    bell_pair_state,
    entanglement_entropy,
    expectation,
    plus_state,
    product_state,
    state_distance,
    zero_state,
)
from tslattice.spacetime import (
    LinkApply,
    SiteAdvance,
    apply_deformation,
    canonical_foliation,
    deformation_sites,
    enabled_deformations,
    initial_surface,
    random_foliation,
)


def make_config(**kw):
    nl_kw = {}
    for key in ("kind", "lam", "source_site", "partner_site", "active_sites"):
        if key in kw:
            nl_kw[key] = kw.pop(key)
    if nl_kw:
        kw["nonlinearity"] = NonlinearitySpec(**nl_kw)
    return ModelConfig(**kw)


ALL_KINDS = [
    {"kind": "none"},
    {"kind": "local", "lam": 0.5},
    {"kind": "coefficient_nonlocal", "lam": 0.5, "source_site": 0},
    {"kind": "operator_nonlocal", "lam": 0.5, "partner_site": 3},
]


class TestFreeField:
    def test_zero_time_is_base(self):
        cfg = make_config(n_sites=2, horizon=2, base_operator="x")
        assert_allclose(free_field(1, 0, cfg).matrix, PAULI_X)

    def test_half_turn_flips_sigma_x(self):
        # conjugation by exp(+i pi sigma_z / 2): 2x2 product oracle
        cfg = make_config(n_sites=2, horizon=2, omega=math.pi, base_operator="x")
        p = np.diag([np.exp(1j * math.pi / 2), np.exp(-1j * math.pi / 2)])
        oracle = p @ PAULI_X @ p.conj().T
        got = free_field(0, 1, cfg).matrix
        assert_allclose(got, oracle, atol=1e-15)
        assert_allclose(got, -PAULI_X, atol=1e-12)

    def test_sigma_z_commutes_with_precession(self):
        cfg = make_config(n_sites=2, horizon=3, omega=1.3, base_operator="z")
        for tau in range(4):
            assert_allclose(free_field(0, tau, cfg).matrix, PAULI_Z, atol=1e-15)

    def test_rotation_in_xy_plane(self):
        cfg = make_config(n_sites=2, horizon=2, omega=0.9, base_operator="x")
        got = free_field(0, 1, cfg).matrix
        assert_allclose(
            got, math.cos(0.9) * PAULI_X - math.sin(0.9) * PAULI_Y, atol=1e-14
        )

    def test_always_hermitian(self):
        cfg = make_config(n_sites=2, horizon=4, omega=0.7, base_operator="y")
        for tau in range(5):
            assert free_field(0, tau, cfg).is_hermitian()


class TestNonlinearCoefficient:
    def test_kind_none_is_zero(self):
        cfg = make_config(n_sites=2, horizon=1)
        s = initial_surface(2, 1)
        assert nonlinear_coefficient(zero_state(2), s, 0, cfg) == 0.0

    def test_local_eigenstate(self):
        cfg = make_config(n_sites=2, horizon=1, base_operator="z", kind="local", lam=0.5)
        s = initial_surface(2, 1)
        assert nonlinear_coefficient(zero_state(2), s, 0, cfg) == pytest.approx(0.5)

    def test_local_bell_marginal_is_zero(self):
        cfg = make_config(n_sites=3, horizon=1, base_operator="z", kind="local", lam=0.7)
        s = initial_surface(3, 1)
        psi = bell_pair_state(3, 0, 1)
        assert nonlinear_coefficient(psi, s, 0, cfg) == pytest.approx(0.0, abs=1e-14)

    def test_nonlocal_reads_source_height(self):
        cfg = make_config(
            n_sites=2, horizon=2, omega=math.pi, base_operator="x",
            kind="coefficient_nonlocal", lam=1.0, source_site=1,
        )
        psi = plus_state(2)
        s0 = initial_surface(2, 2)
        assert nonlinear_coefficient(psi, s0, 0, cfg) == pytest.approx(1.0)
        # after raising the source, the free field there has flipped sign
        s1 = apply_deformation(s0, LinkApply((0, 1), 0))
        s1 = apply_deformation(s1, SiteAdvance(1))
        assert nonlinear_coefficient(psi, s1, 0, cfg) == pytest.approx(-1.0)

    def test_source_equal_to_advancing_site_rejected(self):
        cfg = make_config(n_sites=2, horizon=1, kind="coefficient_nonlocal", lam=0.5, source_site=0)
        s = initial_surface(2, 1)
        with pytest.raises(ValueError, match="coincides"):
            nonlinear_coefficient(zero_state(2), s, 0, cfg)

    def test_site_out_of_range(self):
        cfg = make_config(n_sites=2, horizon=1)
        s = initial_surface(2, 1)
        with pytest.raises(ValueError, match="out of range"):
            nonlinear_coefficient(zero_state(2), s, 5, cfg)

    def test_inactive_site_masked_to_zero(self):
        cfg = make_config(
            n_sites=2, horizon=1, base_operator="z",
            kind="local", lam=0.5, active_sites=frozenset({1}),
        )
        s = initial_surface(2, 1)
        assert nonlinear_coefficient(zero_state(2), s, 0, cfg) == 0.0
        assert nonlinear_coefficient(zero_state(2), s, 1, cfg) == pytest.approx(0.5)


class TestStepGenerator:
    def test_zero_couplings_zero_generator(self):
        cfg = make_config(n_sites=2, horizon=2, mu=0.0, link_coupling=0.0)
        s = apply_deformation(initial_surface(2, 2), LinkApply((0, 1), 0))
        gen, c = step_generator(zero_state(2), s, SiteAdvance(0), cfg)
        assert c == 0.0
        assert_allclose(gen.matrix, np.zeros((2, 2)))

    def test_local_composition(self):
        cfg = make_config(
            n_sites=2, horizon=1, mu=0.0, base_operator="z", kind="local", lam=1.0
        )
        s = apply_deformation(initial_surface(2, 1), LinkApply((0, 1), 0))
        gen, c = step_generator(zero_state(2), s, SiteAdvance(0), cfg)
        assert c == pytest.approx(1.0)
        assert_allclose(gen.matrix, PAULI_Z, atol=1e-14)

    def test_link_generator_definition(self):
        cfg = make_config(n_sites=2, horizon=1, link_coupling=0.3, base_operator="x")
        gen, c = step_generator(zero_state(2), initial_surface(2, 1), LinkApply((0, 1), 0), cfg)
        assert c == 0.0
        assert_allclose(gen.matrix, 0.3 * np.kron(PAULI_X, PAULI_X), atol=1e-14)

    def test_operator_nonlocal_two_site_generator(self):
        cfg = make_config(
            n_sites=4, horizon=1, mu=0.7, base_operator="x",
            kind="operator_nonlocal", lam=0.5, partner_site=3,
        )
        s = initial_surface(4, 1)
        # site 1 advances freely at t=0 only if its parity link gate is done;
        # link (1,2) gates at odd t, link (0,1) at even t -> apply (0,1)@0 first
        s = apply_deformation(s, LinkApply((0, 1), 0))
        gen, c = step_generator(plus_state(4), s, SiteAdvance(1), cfg)
        assert isinstance(gen, TwoSiteOperator)
        assert gen.sites == (1, 3)
        assert c == pytest.approx(0.5)
        expected = 0.7 * np.kron(PAULI_X, np.eye(2)) + 0.5 * np.kron(PAULI_X, PAULI_X)
        assert_allclose(gen.matrix, expected, atol=1e-14)

    def test_partner_advance_stays_linear(self):
        cfg = make_config(
            n_sites=2, horizon=2, mu=0.7, base_operator="x",
            kind="operator_nonlocal", lam=0.5, partner_site=1,
        )
        s = apply_deformation(initial_surface(2, 2), LinkApply((0, 1), 0))
        gen, c = step_generator(plus_state(2), s, SiteAdvance(1), cfg)
        assert isinstance(gen, SiteOperator)
        assert c == 0.0


class TestTsStep:
    def test_zero_couplings_identity(self):
        cfg = make_config(n_sites=3, horizon=2, omega=0.9, mu=0.0, link_coupling=0.0)
        psi = plus_state(3)
        s = initial_surface(3, 2)
        for d in enabled_deformations(s):
            out, _, _ = ts_step(psi, s, d, cfg)
            assert_allclose(out.amplitudes, psi.amplitudes, atol=1e-15)

    def test_quarter_turn_phases(self):
        # generator sigma_z with dt = pi/2 on |+>: amplitudes (e^{-i pi/2}, e^{+i pi/2})/sqrt 2
        cfg = make_config(
            n_sites=2, horizon=1, mu=1.0, link_coupling=0.0, dt=math.pi / 2,
            base_operator="z",
        )
        psi = product_state([(1 / math.sqrt(2), 1 / math.sqrt(2)), (1, 0)])
        s = apply_deformation(initial_surface(2, 1), LinkApply((0, 1), 0))
        out, s2, entry = ts_step(psi, s, SiteAdvance(0), cfg)
        expected_site0 = np.array([np.exp(-1j * math.pi / 2), np.exp(1j * math.pi / 2)]) / math.sqrt(2)
        assert_allclose(out.amplitudes[[0b00, 0b10]], expected_site0, atol=1e-14)
        assert s2.heights == (1, 0)
        assert entry.coefficient == 0.0

    @pytest.mark.parametrize("nl", ALL_KINDS)
    def test_norm_preserved_every_kind(self, nl):
        cfg = make_config(n_sites=4, horizon=3, **dict(nl))
        psi = plus_state(4)
        s = initial_surface(4, 3)
        fol = random_foliation(4, 3, 12)
        for d in fol.steps:
            psi, s, _ = ts_step(psi, s, d, cfg)
            assert abs(np.linalg.norm(psi.amplitudes) - 1.0) <= 1e-12

    def test_rejects_disabled_deformation(self):
        cfg = make_config(n_sites=2, horizon=1)
        from tslattice.spacetime import NotEnabledError

        with pytest.raises(NotEnabledError):
            ts_step(zero_state(2), initial_surface(2, 1), SiteAdvance(0), cfg)


class TestSpacelikeInvariance:
    @pytest.mark.parametrize(
        "nl",
        [
            {"kind": "none"},
            {"kind": "local", "lam": 0.5},
            {"kind": "coefficient_nonlocal", "lam": 0.5, "source_site": 0},
        ],
    )
    def test_local_kinds_never_disturb_spacelike_expectations(self, nl):
        cfg = make_config(n_sites=4, horizon=3, **dict(nl))
        psi = plus_state(4)
        s = initial_surface(4, 3)
        for d in canonical_foliation(4, 3, "synchronous").steps:
            support = set(deformation_sites(d))
            before = {
                j: expectation(psi, free_field(j, s.heights[j], cfg))
                for j in range(4)
                if j not in support
            }
            psi, s_next, _ = ts_step(psi, s, d, cfg)
            for j, e in before.items():
                after = expectation(psi, free_field(j, s.heights[j], cfg))
                assert abs(after - e) <= 1e-12
            s = s_next

    def test_operator_nonlocal_disturbs_spacelike_marginals(self):
        # The two-site generator's partner factor is exactly O(j, tau_j), so
        # that particular expectation is conserved by commutation; the
        # spacelike disturbance shows up in the partner's reduced state.
        from tslattice.quantum_core import reduced_density, trace_distance

        cfg = make_config(
            n_sites=4, horizon=3, kind="operator_nonlocal", lam=0.5, partner_site=3
        )
        psi = plus_state(4)
        s = initial_surface(4, 3)
        worst = 0.0
        for d in canonical_foliation(4, 3, "synchronous").steps:
            support = set(deformation_sites(d))
            before = {
                j: reduced_density(psi, j) for j in range(4) if j not in support
            }
            psi, s_next, _ = ts_step(psi, s, d, cfg)
            for j, rho in before.items():
                worst = max(worst, trace_distance(reduced_density(psi, j), rho))
            s = s_next
        assert worst > 1e-6


class TestEvolve:
    def test_zero_couplings_fixed_point(self):
        cfg = make_config(n_sites=3, horizon=2, omega=0.0, mu=0.0, link_coupling=0.0)
        psi0 = plus_state(3)
        final, record = evolve(psi0, canonical_foliation(3, 2, "synchronous"), cfg)
        assert_allclose(final.amplitudes, psi0.amplitudes, atol=1e-14)
        assert len(record) == len(canonical_foliation(3, 2, "synchronous"))

    def test_deterministic(self):
        cfg = make_config(n_sites=4, horizon=3, kind="local", lam=0.5)
        fol = random_foliation(4, 3, 3)
        a, _ = evolve(plus_state(4), fol, cfg)
        b, _ = evolve(plus_state(4), fol, cfg)
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_local_kind_foliation_independent(self):
        cfg = make_config(n_sites=4, horizon=3, kind="local", lam=0.5)
        sync, _ = evolve(plus_state(4), canonical_foliation(4, 3, "synchronous"), cfg)
        stair, _ = evolve(plus_state(4), canonical_foliation(4, 3, "staircase"), cfg)
        assert state_distance(sync, stair) <= 1e-10

    def test_record_captures_coefficients_and_expectations(self):
        cfg = make_config(n_sites=3, horizon=2, kind="local", lam=0.5)
        _, record = evolve(plus_state(3), canonical_foliation(3, 2, "synchronous"), cfg)
        for entry in record.steps:
            assert len(entry.pre_expectations) == 3
            assert np.isfinite(entry.coefficient)

    def test_product_structure_preserved_without_links(self):
        for nl in (
            {"kind": "none"},
            {"kind": "local", "lam": 0.5},
            {"kind": "coefficient_nonlocal", "lam": 0.5, "source_site": 2},
        ):
            cfg = make_config(n_sites=4, horizon=3, link_coupling=0.0, **dict(nl))
            psi = plus_state(4)
            s = initial_surface(4, 3)
            for d in canonical_foliation(4, 3, "synchronous").steps:
                psi, s, _ = ts_step(psi, s, d, cfg)
                for k in range(1, 4):
                    assert entanglement_entropy(psi, set(range(k))) <= 1e-12


class TestComposeMap:
    def test_empty_record_is_identity(self):
        cfg = make_config(n_sites=2, horizon=1)
        u = compose_map(TrajectoryRecord((), 2), cfg)
        assert_allclose(u, np.eye(4))

    def test_single_gate_embedding(self):
        cfg = make_config(n_sites=2, horizon=1)
        step = TrajectoryStep(
            deformation=SiteAdvance(0),
            coefficient=0.0,
            sites=(0,),
            unitary=PAULI_X,
            pre_expectations=(0.0, 0.0),
        )
        u = compose_map(TrajectoryRecord((step,), 2), cfg)
        assert_allclose(u, np.kron(PAULI_X, np.eye(2)))

    @pytest.mark.parametrize("nl", ALL_KINDS)
    def test_unitary_and_consistent_for_every_kind(self, nl):
        cfg = make_config(n_sites=4, horizon=2, **dict(nl))
        psi0 = plus_state(4)
        final, record = evolve(psi0, canonical_foliation(4, 2, "synchronous"), cfg)
        u = compose_map(record, cfg)
        assert np.max(np.abs(u.conj().T @ u - np.eye(16))) <= 1e-10
        mapped = u @ psi0.amplitudes
        mapped = StateVector(mapped / np.linalg.norm(mapped), 4)
        assert state_distance(mapped, final) <= 1e-10

    def test_dimension_guard(self):
        cfg = make_config(n_sites=11, horizon=1)
        with pytest.raises(ValueError, match="<= 10"):
            compose_map(TrajectoryRecord((), 11), cfg)


class TestStateMapNonlinearity:
    def test_superposition_broken_at_finite_coupling(self):
        cfg = make_config(n_sites=4, horizon=3, kind="local", lam=0.5)
        fol = canonical_foliation(4, 3, "synchronous")
        psi1 = zero_state(4)
        psi2 = StateVector(np.roll(zero_state(4).amplitudes, 8), 4)  # |1000>
        summed = StateVector(
            (psi1.amplitudes + psi2.amplitudes) / math.sqrt(2), 4
        )
        f_sum, _ = evolve(summed, fol, cfg)
        f1, _ = evolve(psi1, fol, cfg)
        f2, _ = evolve(psi2, fol, cfg)
        lin = f1.amplitudes + f2.amplitudes
        lin = StateVector(lin / np.linalg.norm(lin), 4)
        assert state_distance(f_sum, lin) > 1e-3

    def test_linear_at_zero_coupling(self):
        cfg = linear_config(make_config(n_sites=4, horizon=3, kind="local", lam=0.5))
        fol = canonical_foliation(4, 3, "synchronous")
        psi1 = zero_state(4)
        psi2 = StateVector(np.roll(zero_state(4).amplitudes, 8), 4)
        summed = StateVector((psi1.amplitudes + psi2.amplitudes) / math.sqrt(2), 4)
        f_sum, _ = evolve(summed, fol, cfg)
        f1, _ = evolve(psi1, fol, cfg)
        f2, _ = evolve(psi2, fol, cfg)
        lin = f1.amplitudes + f2.amplitudes
        lin = StateVector(lin / np.linalg.norm(lin), 4)
        assert state_distance(f_sum, lin) <= 1e-12


class TestConfigValidation:
    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            make_config(n_sites=1, horizon=2)
        with pytest.raises(ValueError):
            make_config(n_sites=4, horizon=0)
        with pytest.raises(ValueError):
            make_config(n_sites=4, horizon=2, dt=0.0)

    def test_rejects_unknown_kind_and_base(self):
        with pytest.raises(ValueError, match="kind"):
            NonlinearitySpec(kind="frobnicate")
        with pytest.raises(ValueError):
            make_config(n_sites=4, horizon=2, base_operator="w")

    def test_nonlocal_kinds_require_sites(self):
        with pytest.raises(ValueError, match="source_site"):
            NonlinearitySpec(kind="coefficient_nonlocal", lam=0.5)
        with pytest.raises(ValueError, match="partner_site"):
            NonlinearitySpec(kind="operator_nonlocal", lam=0.5)

    def test_nonlocal_site_in_range(self):
        with pytest.raises(ValueError, match="out of range"):
            make_config(n_sites=3, horizon=2, kind="operator_nonlocal", lam=0.5, partner_site=7)
