"""Per-deformation nonlinear stepping in the interaction picture.

Local fields carry the free on-site precession (omega * sigma_z / 2 per site,
Heisenberg picture), so they stay strictly on-site and commute at any two
different sites. The state carries the interaction: each site advance applies
exp(-i*dt*(mu + c) * O(i, tau)) where the coefficient c is frozen from the
pre-step state, making every finite step an exact unitary. Link gates are
linear two-site rotations generated by J * O(i,t) ⊗ O(i+1,t).

Nonlinearity kinds:
  none                   c = 0
  local                  c = lambda * <O(i, tau_i)> at the advancing site
  coefficient_nonlocal   c = lambda * <O(j, tau_j)> read at a fixed remote site
  operator_nonlocal      two-site generator mu*O(i) ⊗ 1 + lambda*O(i) ⊗ O(j)
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .quantum_core import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    IDENTITY_2,
    SiteOperator,
    StateVector,
    TwoSiteOperator,
    apply_on_link,
    apply_on_site,
    expectation,
    expm_hermitian,
)
from .spacetime import (
    Deformation,
    Foliation,
    Hypersurface,
    LinkApply,
    SiteAdvance,
    apply_deformation,
)

BASE_OPERATORS = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}

NONLINEARITY_KINDS = ("none", "local", "coefficient_nonlocal", "operator_nonlocal")


@dataclass(frozen=True)
class NonlinearitySpec:
    """Kind and coupling of the state-dependent Hamiltonian term.

    ``active_sites`` restricts where the nonlinearity acts (None = everywhere);
    the linear mu/J terms are never masked.
    """

    kind: str = "none"
    lam: float = 0.0
    source_site: int | None = None
    partner_site: int | None = None
    active_sites: frozenset[int] | None = None

    def __post_init__(self):
        if self.kind not in NONLINEARITY_KINDS:
            raise ValueError(
                f"nonlinearity kind {self.kind!r} not in {'|'.join(NONLINEARITY_KINDS)}"
            )
        if self.kind == "coefficient_nonlocal" and self.source_site is None:
            raise ValueError("coefficient_nonlocal requires source_site")
        if self.kind == "operator_nonlocal" and self.partner_site is None:
            raise ValueError("operator_nonlocal requires partner_site")
        if self.active_sites is not None:
            object.__setattr__(self, "active_sites", frozenset(self.active_sites))

    def active_at(self, site: int) -> bool:
        return self.active_sites is None or site in self.active_sites


@dataclass(frozen=True)
class ModelConfig:
    """Lattice sizes, couplings, and the nonlinearity choice."""

    n_sites: int = 6
    horizon: int = 4
    omega: float = 1.0
    mu: float = 0.7
    link_coupling: float = 0.4
    dt: float = 0.15
    base_operator: str = "x"
    nonlinearity: NonlinearitySpec = field(default_factory=NonlinearitySpec)

    def __post_init__(self):
        if not 2 <= self.n_sites <= 14:
            raise ValueError(f"n_sites must be in [2, 14], got {self.n_sites}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.base_operator not in BASE_OPERATORS:
            raise ValueError(
                f"base_operator {self.base_operator!r} not in x|y|z"
            )
        nl = self.nonlinearity
        for label, site in (("source_site", nl.source_site), ("partner_site", nl.partner_site)):
            if site is not None and not 0 <= site < self.n_sites:
                raise ValueError(f"{label} {site} out of range for {self.n_sites} sites")


@dataclass(frozen=True)
class TrajectoryStep:
    """One applied deformation with its frozen coefficient and unitary."""

    deformation: Deformation
    coefficient: float
    sites: tuple[int, ...]
    unitary: np.ndarray
    pre_expectations: tuple[float, ...]


@dataclass(frozen=True)
class TrajectoryRecord:
    """Everything needed to rebuild the composed map of one evolution."""

    steps: tuple[TrajectoryStep, ...]
    n_sites: int

    def __len__(self) -> int:
        return len(self.steps)


def free_field(site: int, tau: int, config: ModelConfig) -> SiteOperator:
    """Heisenberg-picture local field O(site, tau) under the free precession."""
    base = BASE_OPERATORS[config.base_operator]
    half = 0.5 * config.omega * tau
    phases = np.array([np.exp(1j * half), np.exp(-1j * half)])
    m = (phases[:, None] * base) * phases.conj()[None, :]
    return SiteOperator(m, site)


def nonlinear_coefficient(
    state: StateVector, surface: Hypersurface, site: int, config: ModelConfig
) -> float:
    """Frozen scalar coefficient of the nonlinear term for advancing ``site``."""
    nl = config.nonlinearity
    if not 0 <= site < config.n_sites:
        raise ValueError(f"site {site} out of range for {config.n_sites} sites")
    if not nl.active_at(site) or nl.kind == "none":
        return 0.0
    if nl.kind == "local":
        o = free_field(site, surface.heights[site], config)
        return nl.lam * expectation(state, o)
    if nl.kind == "coefficient_nonlocal":
        j = nl.source_site
        if j == site:
            raise ValueError(
                f"coefficient source site {j} coincides with the advancing site"
            )
        o = free_field(j, surface.heights[j], config)
        return nl.lam * expectation(state, o)
    # operator_nonlocal: the coefficient is the bare coupling; the
    # nonlocality lives in the generator.
    if nl.partner_site == site:
        raise ValueError(f"partner site {site} coincides with the advancing site")
    return nl.lam


def step_generator(
    state: StateVector, surface: Hypersurface, d: Deformation, config: ModelConfig
):
    """Hermitian generator for one deformation plus its frozen coefficient.

    Returns ``(SiteOperator | TwoSiteOperator, c)``. When a nonlocal kind
    would pair the advancing site with itself, the nonlinear term is dropped
    for that step and the generator stays linear.
    """
    nl = config.nonlinearity
    base = BASE_OPERATORS[config.base_operator]
    if isinstance(d, LinkApply):
        i, j = d.link
        oi = free_field(i, d.time, config).matrix
        oj = free_field(j, d.time, config).matrix
        gen = config.link_coupling * np.kron(oi, oj)
        return TwoSiteOperator(gen, (i, j)), 0.0
    i = d.site
    tau = surface.heights[i]
    oi = free_field(i, tau, config).matrix
    if nl.kind == "operator_nonlocal" and nl.active_at(i) and nl.partner_site != i:
        j = nl.partner_site
        oj = free_field(j, surface.heights[j], config).matrix
        gen = config.mu * np.kron(oi, IDENTITY_2) + nl.lam * np.kron(oi, oj)
        return TwoSiteOperator(gen, (i, j)), nl.lam
    if nl.kind in ("coefficient_nonlocal", "operator_nonlocal") and (
        nl.source_site == i or nl.partner_site == i
    ):
        c = 0.0
    else:
        c = nonlinear_coefficient(state, surface, i, config)
    return SiteOperator((config.mu + c) * oi, i), c


def _pre_expectations(
    state: StateVector, surface: Hypersurface, config: ModelConfig
) -> tuple[float, ...]:
    return tuple(
        expectation(state, free_field(k, surface.heights[k], config))
        for k in range(config.n_sites)
    )


def ts_step(
    state: StateVector, surface: Hypersurface, d: Deformation, config: ModelConfig
):
    """Apply one deformation: returns (state', surface', TrajectoryStep).

    Site advances integrate over ``dt``; link gates fold the unit step into
    the link coupling.
    """
    surface_next = apply_deformation(surface, d)  # validates enabledness
    gen, c = step_generator(state, surface, d, config)
    step_dt = config.dt if isinstance(d, SiteAdvance) else 1.0
    u = expm_hermitian(gen.matrix, step_dt)
    if isinstance(gen, SiteOperator):
        state_next = apply_on_site(state, SiteOperator(u, gen.site))
        sites = (gen.site,)
    else:
        state_next = apply_on_link(state, TwoSiteOperator(u, gen.sites))
        sites = gen.sites
    entry = TrajectoryStep(
        deformation=d,
        coefficient=c,
        sites=sites,
        unitary=u,
        pre_expectations=_pre_expectations(state, surface, config),
    )
    return state_next, surface_next, entry


def evolve(state0: StateVector, foliation: Foliation, config: ModelConfig):
    """Fold ``ts_step`` over a foliation; returns (final state, record)."""
    from .spacetime import initial_surface

    state = state0
    surface = initial_surface(config.n_sites, config.horizon)
    steps: list[TrajectoryStep] = []
    for d in foliation.steps:
        state, surface, entry = ts_step(state, surface, d, config)
        steps.append(entry)
    return state, TrajectoryRecord(tuple(steps), config.n_sites)


def compose_map(record: TrajectoryRecord, config: ModelConfig) -> np.ndarray:
    """Dense product of the recorded per-step unitaries, in application order.

    The result acts on state-independent objects; it is unitary even though
    the state map that produced the record is not linear.
    """
    n = config.n_sites
    if n > 10:
        raise ValueError(f"composed map needs n_sites <= 10, got {n}")
    dim = 2**n
    m = np.eye(dim, dtype=complex).ravel()
    # A (dim x dim) matrix in C order is a statevector on 2n sites whose first
    # n axes are the row index, so row-side gates reuse the state kernels.
    for step in record.steps:
        if len(step.sites) == 1:
            m = _kernels.apply_1q(m, step.unitary, step.sites[0], 2 * n)
        else:
            m = _kernels.apply_2q(m, step.unitary, step.sites[0], step.sites[1], 2 * n)
    return m.reshape(dim, dim)


def linear_config(config: ModelConfig) -> ModelConfig:
    """The lambda = 0 control twin of a configuration."""
    return replace(config, nonlinearity=replace(config.nonlinearity, lam=0.0))
