"""Machine-checkable experiments probing covariance, signaling, and map structure.

Every experiment returns an ExperimentReport carrying the resolved
configuration, named scalar metrics, the thresholds used for the verdict, and
per-sample detail rows. Each one embeds its lambda = 0 control; the verdict
is a pure function of metrics and thresholds. Reports are deterministic for a
fixed configuration and seed.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .dynamics import (
    BASE_OPERATORS,
    ModelConfig,
    NonlinearitySpec,
    compose_map,
    evolve,
    free_field,
    linear_config,
    ts_step,
)
from .quantum_core import (
    DensityMatrix,
    SiteOperator,
    StateVector,
    basis_state,
    bell_pair_state,
    entanglement_entropy,
    expectation,
    plus_state,
    reduced_density,
    state_distance,
    trace_distance,
    zero_state,
)
from .spacetime import (
    Foliation,
    canonical_foliation,
    enabled_deformations,
    foliation_to_text,
    initial_surface,
    random_foliation,
)

# Verdict bounds shared with the acceptance suite. The inequality direction
# depends on the nonlinearity kind: local kinds must stay covariant, nonlocal
# kinds must visibly break.
COVARIANT_SWAP_BOUND = 1e-12
LINEAR_SWAP_BOUND = 1e-13
COVARIANT_SWEEP_BOUND = 1e-10
LINEAR_SWEEP_BOUND = 1e-11
BREAKAGE_FLOOR = 1e-3
SIGNAL_CONTROL_BOUND = 1e-12
SIGNAL_FLOOR = 10.0 * SIGNAL_CONTROL_BOUND
DRIFT_BOUND = 1e-10
ZERO_COUPLING_BOUND = 1e-13
IPV_FLOOR = 0.05
UNITARITY_BOUND = 1e-10
SUPERPOSITION_LINEAR_BOUND = 1e-12
SUPERPOSITION_FLOOR = 1e-3
ENTROPY_LOCAL_BOUND = 1e-12
ENTROPY_NONLOCAL_FLOOR = 0.01

LOCAL_KINDS = ("none", "local")
NONLOCAL_KINDS = ("coefficient_nonlocal", "operator_nonlocal")


@dataclass(frozen=True)
class ExperimentReport:
    """Config echo, metrics, thresholds, verdict, and detail rows."""

    name: str
    config: tuple[tuple[str, str], ...]
    metrics: tuple[tuple[str, float], ...]
    thresholds: tuple[tuple[str, str, float], ...]
    verdict: str
    detail_header: tuple[str, ...]
    details: tuple[tuple, ...]
    foliation_text: str | None = None

    def metric(self, name: str) -> float:
        for key, value in self.metrics:
            if key == name:
                return value
        raise KeyError(f"report has no metric {name!r}")


def verdict_from(metrics, thresholds) -> str:
    """pass/fail purely from the metric values and declared thresholds."""
    values = dict(metrics)
    for name, op, bound in thresholds:
        v = values[name]
        if not math.isfinite(v):
            return "fail"
        if op == "<=" and not v <= bound:
            return "fail"
        if op == ">=" and not v >= bound:
            return "fail"
    return "pass"


def config_echo(config: ModelConfig, **extras) -> tuple[tuple[str, str], ...]:
    nl = config.nonlinearity
    items = [
        ("n_sites", str(config.n_sites)),
        ("horizon", str(config.horizon)),
        ("omega", f"{config.omega:.15g}"),
        ("mu", f"{config.mu:.15g}"),
        ("link_coupling", f"{config.link_coupling:.15g}"),
        ("dt", f"{config.dt:.15g}"),
        ("base_operator", config.base_operator),
        ("kind", nl.kind),
        ("lambda", f"{nl.lam:.15g}"),
        ("source_site", "" if nl.source_site is None else str(nl.source_site)),
        ("partner_site", "" if nl.partner_site is None else str(nl.partner_site)),
        (
            "active_sites",
            "" if nl.active_sites is None else ",".join(map(str, sorted(nl.active_sites))),
        ),
    ]
    items.extend((k, str(v)) for k, v in extras.items())
    return tuple(items)


def default_initial_state(config: ModelConfig) -> StateVector:
    """|+>^n: a product state with a nontrivial transverse expectation."""
    return plus_state(config.n_sites)


def _expects_breakage(config: ModelConfig) -> bool:
    return config.nonlinearity.kind in NONLOCAL_KINDS and config.nonlinearity.lam != 0.0


def _fmt_deformation(d) -> str:
    from .spacetime import SiteAdvance

    if isinstance(d, SiteAdvance):
        return f"A{d.site}"
    return f"G{d.link[0]}@{d.time}"


# -- order-swap exactness -------------------------------------------------------


def _swap_scan(config: ModelConfig, budget: int):
    """BFS over reachable surfaces; order-swap every enabled pair at each.

    Returns (max residue, witness row, surfaces visited, pairs checked,
    exhausted flag). The state attached to a surface is the one reached along
    the breadth-first discovery path.
    """
    surface = initial_surface(config.n_sites, config.horizon)
    state = default_initial_state(config)
    seen = {surface}
    queue = deque([(surface, state)])
    max_residue = 0.0
    witness = ("", "", "", 0.0)
    visited = 0
    pairs = 0
    while queue and visited < budget:
        s, psi = queue.popleft()
        visited += 1
        enabled = enabled_deformations(s)
        for d1, d2 in itertools.combinations(enabled, 2):
            psi_a, s_a, _ = ts_step(psi, s, d1, config)
            psi_ab, s_ab, _ = ts_step(psi_a, s_a, d2, config)
            psi_b, s_b, _ = ts_step(psi, s, d2, config)
            psi_ba, s_ba, _ = ts_step(psi_b, s_b, d1, config)
            if s_ab != s_ba:
                raise AssertionError(
                    f"diamond property violated at {s.heights} for {d1}, {d2}"
                )
            r = state_distance(psi_ab, psi_ba)
            pairs += 1
            if r > max_residue:
                max_residue = r
                witness = (
                    " ".join(map(str, s.heights)),
                    _fmt_deformation(d1),
                    _fmt_deformation(d2),
                    r,
                )
        for d in enabled:
            nxt_state, nxt_surface, _ = ts_step(psi, s, d, config)
            if nxt_surface not in seen:
                seen.add(nxt_surface)
                queue.append((nxt_surface, nxt_state))
    return max_residue, witness, visited, pairs, not queue


def integrability_check(config: ModelConfig, exploration_budget: int = 2000) -> ExperimentReport:
    """Order-swap residues of simultaneously enabled deformation pairs.

    The second leg of each ordering recomputes its frozen coefficient after
    the first leg, so a nonzero residue is a genuine integrability defect and
    not a bookkeeping artifact.
    """
    control, _, _, _, _ = _swap_scan(linear_config(config), exploration_budget)
    residue, witness, visited, pairs, exhausted = _swap_scan(config, exploration_budget)
    metrics = (
        ("max_swap_residue", residue),
        ("control_max_swap_residue", control),
        ("surfaces_visited", float(visited)),
        ("pairs_checked", float(pairs)),
        ("exhaustive", 1.0 if exhausted else 0.0),
    )
    if _expects_breakage(config):
        main = ("max_swap_residue", ">=", BREAKAGE_FLOOR)
    else:
        main = ("max_swap_residue", "<=", COVARIANT_SWAP_BOUND)
    thresholds = (main, ("control_max_swap_residue", "<=", LINEAR_SWAP_BOUND))
    return ExperimentReport(
        name="integrability",
        config=config_echo(config, exploration_budget=exploration_budget),
        metrics=metrics,
        thresholds=thresholds,
        verdict=verdict_from(metrics, thresholds),
        detail_header=("surface_heights", "first", "second", "residue"),
        details=(witness,),
    )


# -- foliation sweep ------------------------------------------------------------


def _sweep_finals(config: ModelConfig, foliations, psi0: StateVector):
    finals = []
    for _, fol in foliations:
        final, _ = evolve(psi0, fol, config)
        finals.append(final)
    return finals


def _max_pairwise(finals) -> float:
    worst = 0.0
    for a, b in itertools.combinations(finals, 2):
        worst = max(worst, state_distance(a, b))
    return worst


def foliation_sweep(
    config: ModelConfig,
    n_foliations: int = 50,
    seed: int = 42,
    extra_foliation: Foliation | None = None,
) -> ExperimentReport:
    """Evolve one initial state along many foliations and compare the endpoints."""
    n, t = config.n_sites, config.horizon
    foliations: list[tuple[str, Foliation]] = [
        ("canonical-synchronous", canonical_foliation(n, t, "synchronous")),
        ("canonical-staircase", canonical_foliation(n, t, "staircase")),
    ]
    foliations.extend(
        (f"random-{k}", random_foliation(n, t, seed + k)) for k in range(n_foliations)
    )
    if extra_foliation is not None:
        foliations.append(("replayed", extra_foliation))
    psi0 = default_initial_state(config)

    control_finals = _sweep_finals(linear_config(config), foliations, psi0)
    finals = _sweep_finals(config, foliations, psi0)

    max_pair = _max_pairwise(finals)
    control_pair = _max_pairwise(control_finals)
    metrics = (
        ("max_pairwise_distance", max_pair),
        ("control_max_pairwise_distance", control_pair),
        ("n_foliations_total", float(len(foliations))),
    )
    if _expects_breakage(config):
        main = ("max_pairwise_distance", ">=", BREAKAGE_FLOOR)
    else:
        main = ("max_pairwise_distance", "<=", COVARIANT_SWEEP_BOUND)
    thresholds = (main, ("control_max_pairwise_distance", "<=", LINEAR_SWEEP_BOUND))

    reference = finals[0]
    rows = []
    for (label, fol), final in zip(foliations, finals):
        exps = tuple(
            expectation(final, free_field(i, t, config)) for i in range(n)
        )
        rows.append(
            (label, "" if fol.seed is None else str(fol.seed), state_distance(final, reference))
            + exps
        )
    header = ("foliation", "seed", "distance_to_reference") + tuple(
        f"final_expectation_site_{i}" for i in range(n)
    )
    return ExperimentReport(
        name="sweep",
        config=config_echo(config, n_foliations=n_foliations, seed=seed),
        metrics=metrics,
        thresholds=thresholds,
        verdict=verdict_from(metrics, thresholds),
        detail_header=header,
        details=tuple(rows),
    )


# -- measurement-driven signaling ------------------------------------------------


_SETTING_OPS = {"Z": "z", "X": "x"}


def _measurement_branches(state: StateVector, site: int, setting: str):
    """Exact Born-rule branching: [(outcome label, probability, collapsed state)]."""
    op = BASE_OPERATORS[_SETTING_OPS[setting]]
    evals, evecs = np.linalg.eigh(op)
    branches = []
    for k in range(2):
        v = evecs[:, k]
        proj = np.outer(v, v.conj())
        amps = _kernels.apply_1q(state.amplitudes, proj, site, state.n_sites)
        p = float(np.vdot(amps, amps).real)
        if p < 1e-15:
            continue
        branches.append(
            (f"{setting}{'+' if evals[k] > 0 else '-'}", p, StateVector(amps / math.sqrt(p), state.n_sites))
        )
    return branches


def _bob_ensemble(
    initial: StateVector,
    config: ModelConfig,
    foliation: Foliation,
    alice_site: int,
    bob_site: int,
    setting: str,
):
    """Collapse Alice, evolve every branch, average Bob's reduced state."""
    rho = np.zeros((2, 2), dtype=complex)
    rows = []
    for label, p, branch in _measurement_branches(initial, alice_site, setting):
        final, _ = evolve(branch, foliation, config)
        r = reduced_density(final, bob_site)
        rho += p * r.matrix
        rows.append((label, p, r))
    return DensityMatrix(rho), rows


def signaling_experiment(
    config: ModelConfig,
    alice_site: int = 0,
    bob_site: int | None = None,
    settings: tuple[str, str] = ("Z", "X"),
    foliation: Foliation | None = None,
) -> ExperimentReport:
    """Remote measurement-choice detectability under Bob-local nonlinearity.

    Starts from a Bell pair on (alice, bob) with |0> elsewhere, branches
    Alice's measurement exactly (both outcomes, Born weights), evolves every
    branch, and compares Bob's ensemble-averaged reduced states between the
    two settings. Defaults put alice and bob outside each other's horizon-T
    light cones, so the lambda = 0 control isolates the collapse mechanism
    from ordinary causal influence.
    """
    n, t = config.n_sites, config.horizon
    if bob_site is None:
        bob_site = n - 1
    if alice_site == bob_site:
        raise ValueError("alice and bob must be distinct sites")
    for s in (alice_site, bob_site):
        if not 0 <= s < n:
            raise ValueError(f"site {s} out of range for {n} sites")
    if foliation is None:
        foliation = canonical_foliation(n, t, "synchronous")
    lam = config.nonlinearity.lam
    bob_local = replace(
        config,
        nonlinearity=NonlinearitySpec(
            kind="local", lam=lam, active_sites=frozenset({bob_site})
        ),
    )

    def signal_for(cfg: ModelConfig, initial: StateVector):
        rhos = []
        all_rows = []
        for setting in settings:
            rho, rows = _bob_ensemble(initial, cfg, foliation, alice_site, bob_site, setting)
            rhos.append(rho)
            all_rows.extend(rows)
        return trace_distance(rhos[0], rhos[1]), all_rows

    bell = bell_pair_state(n, alice_site, bob_site)
    signal, rows = signal_for(bob_local, bell)
    control_linear, _ = signal_for(linear_config(bob_local), bell)
    control_product, _ = signal_for(bob_local, zero_state(n))

    metrics = (
        ("signal", signal),
        ("control_lambda0_signal", control_linear),
        ("control_product_signal", control_product),
    )
    if lam != 0.0:
        main = ("signal", ">=", SIGNAL_FLOOR)
    else:
        main = ("signal", "<=", SIGNAL_CONTROL_BOUND)
    thresholds = (
        main,
        ("control_lambda0_signal", "<=", SIGNAL_CONTROL_BOUND),
        ("control_product_signal", "<=", SIGNAL_CONTROL_BOUND),
    )
    details = tuple(
        (
            label,
            p,
            float(rho.matrix[0, 0].real),
            float(rho.matrix[1, 1].real),
            float(rho.matrix[0, 1].real),
            float(rho.matrix[0, 1].imag),
        )
        for label, p, rho in rows
    )
    return ExperimentReport(
        name="signal",
        config=config_echo(
            config, alice_site=alice_site, bob_site=bob_site, settings="".join(settings)
        ),
        metrics=metrics,
        thresholds=thresholds,
        verdict=verdict_from(metrics, thresholds),
        detail_header=("branch", "probability", "bob_rho00", "bob_rho11", "bob_rho01_re", "bob_rho01_im"),
        details=details,
        foliation_text=foliation_to_text(foliation),
    )


# -- co-evolved degeneracy --------------------------------------------------------


def _degeneracy_metrics(config: ModelConfig, foliation: Foliation, probe_site: int):
    n = config.n_sites
    dim = 2**n
    psi = default_initial_state(config)
    surface = initial_surface(n, config.horizon)
    base = BASE_OPERATORS[config.base_operator]
    e0 = expectation(psi, SiteOperator(base, probe_site))
    m = np.eye(dim, dtype=complex).ravel()
    drift = 0.0
    variation = 0.0
    rows = [(0, "-", 0, e0, e0)]
    for k, d in enumerate(foliation.steps, start=1):
        psi, surface, entry = ts_step(psi, surface, d, config)
        if len(entry.sites) == 1:
            m = _kernels.apply_1q(m, entry.unitary, entry.sites[0], 2 * n)
        else:
            m = _kernels.apply_2q(m, entry.unitary, entry.sites[0], entry.sites[1], 2 * n)
        # <psi_k| U_k O U_k^dag |psi_k> evaluated as <U^dag psi| O |U^dag psi>.
        u = m.reshape(dim, dim)
        phi = u.conj().T @ psi.amplitudes
        e_co = float(
            _kernels.expect_1q(phi, base, probe_site, n).real
        )
        tau = surface.heights[probe_site]
        e_ip = expectation(psi, free_field(probe_site, tau, config))
        drift = max(drift, abs(e_co - e0))
        variation = max(variation, abs(e_ip - e0))
        rows.append((k, _fmt_deformation(d), tau, e_co, e_ip))
    return drift, variation, rows


def degeneracy_experiment(
    config: ModelConfig,
    probe_site: int | None = None,
    foliation: Foliation | None = None,
) -> ExperimentReport:
    """Constancy of the co-evolved expectation versus the physical one.

    Co-evolving the probe field with the composed state map freezes its
    expectation at the initial value, while the interaction-picture
    expectation at the probe site genuinely moves.
    """
    n, t = config.n_sites, config.horizon
    if n > 10:
        raise ValueError(f"degeneracy experiment needs n_sites <= 10, got {n}")
    if probe_site is None:
        probe_site = n // 2
    if foliation is None:
        foliation = canonical_foliation(n, t, "synchronous")

    frozen = replace(
        config,
        omega=0.0,
        mu=0.0,
        link_coupling=0.0,
        nonlinearity=replace(config.nonlinearity, lam=0.0),
    )
    control_drift, control_variation, _ = _degeneracy_metrics(frozen, foliation, probe_site)
    drift, variation, rows = _degeneracy_metrics(config, foliation, probe_site)

    metrics = (
        ("coevolved_drift", drift),
        ("interaction_picture_variation", variation),
        ("control_coevolved_drift", control_drift),
        ("control_interaction_picture_variation", control_variation),
    )
    thresholds = (
        ("coevolved_drift", "<=", DRIFT_BOUND),
        ("interaction_picture_variation", ">=", IPV_FLOOR),
        ("control_coevolved_drift", "<=", ZERO_COUPLING_BOUND),
        ("control_interaction_picture_variation", "<=", ZERO_COUPLING_BOUND),
    )
    return ExperimentReport(
        name="degeneracy",
        config=config_echo(config, probe_site=probe_site),
        metrics=metrics,
        thresholds=thresholds,
        verdict=verdict_from(metrics, thresholds),
        detail_header=("step", "deformation", "probe_height", "coevolved_expectation", "surface_expectation"),
        details=tuple(rows),
        foliation_text=foliation_to_text(foliation),
    )


# -- composed-map structure --------------------------------------------------------


def map_nonlinearity_check(
    config: ModelConfig, foliation: Foliation | None = None
) -> ExperimentReport:
    """Unitarity of the composed map versus nonlinearity of the state map."""
    n, t = config.n_sites, config.horizon
    if n > 10:
        raise ValueError(f"composed-map check needs n_sites <= 10, got {n}")
    if foliation is None:
        foliation = canonical_foliation(n, t, "synchronous")
    psi1 = zero_state(n)
    psi2 = basis_state(n, 1 << (n - 1))  # |1> at site 0, |0> elsewhere
    sum_amps = (psi1.amplitudes + psi2.amplitudes) / math.sqrt(2.0)
    psi_sum = StateVector(sum_amps, n)

    final_sum, record = evolve(psi_sum, foliation, config)
    final_1, _ = evolve(psi1, foliation, config)
    final_2, _ = evolve(psi2, foliation, config)
    u = compose_map(record, config)
    unitarity_defect = float(np.max(np.abs(u.conj().T @ u - np.eye(2**n))))
    mapped = u @ psi_sum.amplitudes
    mapped = mapped / np.linalg.norm(mapped)
    compose_consistency = state_distance(StateVector(mapped, n), final_sum)
    lin_amps = final_1.amplitudes + final_2.amplitudes
    lin = StateVector(lin_amps / np.linalg.norm(lin_amps), n)
    superposition_defect = state_distance(final_sum, lin)

    control_cfg = linear_config(config)
    c_final_sum, _ = evolve(psi_sum, foliation, control_cfg)
    c_final_1, _ = evolve(psi1, foliation, control_cfg)
    c_final_2, _ = evolve(psi2, foliation, control_cfg)
    c_lin_amps = c_final_1.amplitudes + c_final_2.amplitudes
    c_lin = StateVector(c_lin_amps / np.linalg.norm(c_lin_amps), n)
    control_defect = state_distance(c_final_sum, c_lin)

    lam = config.nonlinearity.lam
    metrics = (
        ("unitarity_defect", unitarity_defect),
        ("superposition_defect", superposition_defect),
        ("compose_consistency", compose_consistency),
        ("control_superposition_defect", control_defect),
    )
    if lam != 0.0:
        super_threshold = ("superposition_defect", ">=", SUPERPOSITION_FLOOR)
    else:
        super_threshold = ("superposition_defect", "<=", SUPERPOSITION_LINEAR_BOUND)
    thresholds = (
        ("unitarity_defect", "<=", UNITARITY_BOUND),
        super_threshold,
        ("compose_consistency", "<=", UNITARITY_BOUND),
        ("control_superposition_defect", "<=", SUPERPOSITION_LINEAR_BOUND),
    )
    return ExperimentReport(
        name="nonlinearity",
        config=config_echo(config),
        metrics=metrics,
        thresholds=thresholds,
        verdict=verdict_from(metrics, thresholds),
        detail_header=("quantity", "value"),
        details=(
            ("unitarity_defect", unitarity_defect),
            ("superposition_defect", superposition_defect),
            ("compose_consistency", compose_consistency),
            ("control_superposition_defect", control_defect),
        ),
        foliation_text=foliation_to_text(foliation),
    )


# -- entanglement bookkeeping -------------------------------------------------------


def _monitored_cuts(n: int, cut: frozenset[int]):
    cuts = [tuple(sorted(cut))]
    for k in range(n - 1):
        cuts.append(tuple(range(k + 1)))
    for i in range(n):
        cuts.append((i,))
    # dedupe, preserve order
    seen = set()
    out = []
    for c in cuts:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def _max_entropy_over_run(config: ModelConfig, foliation: Foliation, cuts):
    psi = default_initial_state(config)
    surface = initial_surface(config.n_sites, config.horizon)
    worst = 0.0
    arg = (0, cuts[0])
    for k, d in enumerate(foliation.steps, start=1):
        psi, surface, _ = ts_step(psi, surface, d, config)
        for c in cuts:
            s = entanglement_entropy(psi, c)
            if s > worst:
                worst = s
                arg = (k, c)
    return worst, arg


def entanglement_monitor(config: ModelConfig, cut: frozenset[int] | None = None) -> ExperimentReport:
    """Entropy growth from a product state, per nonlinearity kind, at J = 0.

    Local kinds apply only single-site unitaries and must keep every cut at
    zero entropy; the operator-nonlocal kind pairs advancing sites with a
    partner across the cut and must entangle.
    """
    n, t = config.n_sites, config.horizon
    if cut is None:
        cut = frozenset(range(max(1, n // 2)))
    cut = frozenset(int(s) for s in cut)
    if not cut or len(cut) >= n:
        raise ValueError("cut must be a nonempty proper subset of the sites")
    cuts = _monitored_cuts(n, cut)
    foliation = canonical_foliation(n, t, "synchronous")
    lam = config.nonlinearity.lam
    source = config.nonlinearity.source_site
    partner = config.nonlinearity.partner_site
    outside = max(set(range(n)) - cut)
    if source is None:
        source = outside
    if partner is None or partner in cut:
        partner = outside

    variants = {
        "none": NonlinearitySpec(kind="none"),
        "local": NonlinearitySpec(kind="local", lam=lam),
        "coefficient_nonlocal": NonlinearitySpec(
            kind="coefficient_nonlocal", lam=lam, source_site=source
        ),
        "operator_nonlocal": NonlinearitySpec(
            kind="operator_nonlocal", lam=lam, partner_site=partner
        ),
    }
    metrics = []
    rows = []
    for kind, nl in variants.items():
        cfg = replace(config, link_coupling=0.0, nonlinearity=nl)
        worst, (step, argcut) = _max_entropy_over_run(cfg, foliation, cuts)
        metrics.append((f"max_entropy_{kind}", worst))
        rows.append((kind, worst, step, " ".join(map(str, argcut))))
    thresholds = (
        ("max_entropy_none", "<=", ENTROPY_LOCAL_BOUND),
        ("max_entropy_local", "<=", ENTROPY_LOCAL_BOUND),
        ("max_entropy_coefficient_nonlocal", "<=", ENTROPY_LOCAL_BOUND),
        ("max_entropy_operator_nonlocal", ">=", ENTROPY_NONLOCAL_FLOOR),
    )
    metrics = tuple(metrics)
    return ExperimentReport(
        name="entanglement",
        config=config_echo(config, cut=",".join(map(str, sorted(cut)))),
        metrics=metrics,
        thresholds=thresholds,
        verdict=verdict_from(metrics, thresholds),
        detail_header=("kind", "max_entropy", "argmax_step", "argmax_cut"),
        details=tuple(rows),
        foliation_text=foliation_to_text(foliation),
    )
