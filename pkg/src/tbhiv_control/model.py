"""TB-HIV/AIDS coinfection dynamics: parameters, state layout, forces of
infection, and the right-hand side of the eleven-compartment ODE system.

States are plain numpy arrays of length 11 (or batches with trailing axis 11),
indexed by the module-level constants below. All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

import numpy as np

# Compartment order used everywhere in this package.
COMPARTMENTS = ("S", "L_T", "I_T", "R", "I_H", "A", "C_H", "L_TH", "I_TH", "R_H", "A_T")
N_COMPARTMENTS = len(COMPARTMENTS)

S, L_T, I_T, R, I_H, A, C_H, L_TH, I_TH, R_H, A_T = range(N_COMPARTMENTS)

# Upper bound on each control and on their sum (admissible set).
U_MAX = 0.95


class ZeroPopulationError(ValueError):
    """Raised when a force of infection is evaluated at total population 0."""


@dataclass(frozen=True)
class Parameters:
    """Model constants. Defaults reproduce the published baseline table
    (rates per year; k2 = 1.3*k1, d_N = 1/70, d_T = 1/10).

    T is the study horizon in years and N0 the population scaling constant
    used by the initial conditions.
    """

    beta1: float = 0.6       # TB transmission rate
    beta2: float = 0.1       # HIV transmission rate
    gamma1: float = 0.9      # TB reinfection modification (recovered)
    gamma2: float = 1.1      # TB reinfection modification (HIV-recovered)
    etaC: float = 0.9        # infectiousness modification, treated HIV
    etaA: float = 1.05       # infectiousness modification, AIDS
    delta: float = 1.03      # HIV acquisition modification for active TB
    psi: float = 1.07        # TB acquisition modification for HIV-infected
    mu: float = 430.0        # recruitment, individuals/year
    k1: float = 0.5          # L_T -> I_T progression
    k2: float = 1.3 * 0.5    # L_TH -> I_TH progression (1.3*k1)
    k3: float = 2.0          # L_TH exit rate
    rho1: float = 0.1        # I_H -> A progression
    rho2: float = 1.0        # I_TH exit rate
    omega1: float = 0.09     # C_H return rate
    omega2: float = 0.15     # R_H return rate
    tau1: float = 2.0        # TB treatment rate, L_T
    tau2: float = 1.0        # TB treatment rate, I_T
    phi: float = 1.0         # HIV treatment rate, I_H
    alpha1: float = 0.33     # AIDS treatment rate
    alpha2: float = 0.33     # HIV treatment rate, A_T
    r: float = 0.3           # fraction of L_TH on combined treatment
    dN: float = 1.0 / 70.0   # natural death rate
    dT: float = 1.0 / 10.0   # TB-induced death rate
    dA: float = 0.3          # AIDS-induced death rate
    dTA: float = 0.33        # AIDS-TB-induced death rate
    T: float = 10.0          # horizon, years
    N0: float = 30000.0      # initial-condition scaling population

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not np.isfinite(v):
                raise ValueError(f"parameter {f.name} must be finite, got {v}")
            if f.name not in ("T", "N0") and v < 0:
                raise ValueError(f"parameter {f.name} must be nonnegative, got {v}")
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [0, 1], got {self.r}")
        if self.T <= 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if self.N0 <= 0:
            raise ValueError(f"N0 must be positive, got {self.N0}")

    def with_overrides(self, **overrides: float) -> "Parameters":
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise ValueError(f"unknown parameter(s): {sorted(unknown)}")
        return replace(self, **overrides)


@dataclass(frozen=True)
class ControlValue:
    """A pointwise admissible control pair: 0 <= u1, u2 and u1 + u2 <= 0.95."""

    u1: float
    u2: float

    def __post_init__(self):
        if not is_admissible(self.u1, self.u2):
            raise ValueError(
                f"control ({self.u1}, {self.u2}) outside the admissible set "
                f"0 <= u1, u2 <= {U_MAX}, u1 + u2 <= {U_MAX}"
            )


def is_admissible(u1, u2, tol: float = 0.0) -> bool:
    """Check the admissible-set constraints, optionally with slack."""
    u1 = np.asarray(u1)
    u2 = np.asarray(u2)
    return bool(
        np.all(u1 >= -tol)
        and np.all(u2 >= -tol)
        and np.all(u1 <= U_MAX + tol)
        and np.all(u2 <= U_MAX + tol)
        and np.all(u1 + u2 <= U_MAX + tol)
    )


def total(state: np.ndarray) -> np.ndarray:
    """Total population N: the sum over the 11 compartments."""
    return np.asarray(state)[..., :].sum(axis=-1)


def _population(state: np.ndarray) -> np.ndarray:
    n = total(state)
    if np.any(n == 0.0):
        raise ZeroPopulationError("total population is zero")
    return n


def force_of_infection_tb(state: np.ndarray, params: Parameters) -> np.ndarray:
    """TB force of infection: beta1 * (I_T + I_TH + A_T) / N."""
    state = np.asarray(state, dtype=float)
    n = _population(state)
    return params.beta1 * (state[..., I_T] + state[..., I_TH] + state[..., A_T]) / n


def force_of_infection_hiv(state: np.ndarray, params: Parameters) -> np.ndarray:
    """HIV force of infection:
    beta2 * [I_H + I_TH + L_TH + R_H + etaC*C_H + etaA*(A + A_T)] / N.
    """
    state = np.asarray(state, dtype=float)
    n = _population(state)
    infectious = (
        state[..., I_H]
        + state[..., I_TH]
        + state[..., L_TH]
        + state[..., R_H]
        + params.etaC * state[..., C_H]
        + params.etaA * (state[..., A] + state[..., A_T])
    )
    return params.beta2 * infectious / n


def rhs(state: np.ndarray, control, params: Parameters) -> np.ndarray:
    """Time derivative of the 11 compartments under controls (u1, u2).

    `state` may be a single state of shape (11,) or a batch (..., 11);
    `control` is any (u1, u2) pair, each a scalar or an array broadcastable
    against the batch shape. No clamping is applied to negative inputs.
    """
    state = np.asarray(state, dtype=float)
    u1, u2 = control[0], control[1]
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    p = params

    lam_t = force_of_infection_tb(state, p)
    lam_h = force_of_infection_hiv(state, p)

    s, lt, it, rec = state[..., S], state[..., L_T], state[..., I_T], state[..., R]
    ih, a, ch = state[..., I_H], state[..., A], state[..., C_H]
    lth, ith, rh, at = state[..., L_TH], state[..., I_TH], state[..., R_H], state[..., A_T]

    out = np.empty_like(state)
    out[..., S] = p.mu - lam_t * s - lam_h * s - p.dN * s
    out[..., L_T] = lam_t * s + p.gamma1 * lam_t * rec - (p.k1 + p.tau1 + p.dN) * lt
    out[..., I_T] = p.k1 * lt - (p.tau2 + p.dT + p.dN + p.delta * lam_h) * it
    out[..., R] = p.tau1 * lt + p.tau2 * it - (p.gamma1 * lam_t + lam_h + p.dN) * rec
    out[..., I_H] = (
        lam_h * s
        - (p.rho1 + p.phi + p.psi * lam_t + p.dN) * ih
        + p.alpha1 * a
        + lam_h * rec
        + p.omega1 * ch
    )
    out[..., A] = p.rho1 * ih + p.omega2 * rh - p.alpha1 * a - (p.dN + p.dA) * a
    out[..., C_H] = p.phi * ih + u1 * p.rho2 * ith + p.r * p.k3 * lth - (p.omega1 + p.dN) * ch
    out[..., L_TH] = p.gamma2 * lam_t * rh - (p.k2 + p.k3 + p.dN) * lth
    out[..., I_TH] = (
        p.delta * lam_h * it
        + p.psi * lam_t * ih
        + p.alpha2 * at
        + p.k2 * lth
        - (p.rho2 + p.dN + p.dT) * ith
    )
    out[..., R_H] = (
        u2 * p.rho2 * ith
        + (1.0 - p.r) * p.k3 * lth
        - (p.gamma2 * lam_t + p.omega2 + p.dN) * rh
    )
    out[..., A_T] = (1.0 - (u1 + u2)) * p.rho2 * ith - (p.alpha2 + p.dN + p.dTA) * at
    return out


# Initial-condition numerators over a common denominator of 120, in
# compartment order. They sum to 191, so the initial total is 191*N0/120;
# the dynamics always use the compartment sum as N(t).
_INIT_NUMERATORS = np.array([66, 37, 5, 37, 2, 37, 1, 2, 2, 1, 1], dtype=float)
_INIT_DENOMINATOR = 120.0


def initial_state(params: Parameters) -> np.ndarray:
    """Baseline initial compartment values: published fractions of N0."""
    return _INIT_NUMERATORS * (params.N0 / _INIT_DENOMINATOR)
