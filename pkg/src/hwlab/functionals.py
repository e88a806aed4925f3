"""Conserved quantities and variational functionals.

The model is the focusing half-wave-Schroedinger equation

    i dt psi + dxx psi - |D_y| psi + |psi|^{p-1} psi = 0,   1 < p < 5,

on the periodic box.  This module evaluates mass, Hamiltonian, the
action S_{omega,v} and its Nehari derivative pairing, the anisotropic
Sobolev X norm, and the Gagliardo-Nirenberg quotient, all through the
multiplier calculus of `spectral`.  Nonlinear powers are computed as
(|u|^2)^{(p+1)/2} in physical space with the square clipped at zero so
fractional p never sees a negative base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectral as sp
from .spectral import Field, Grid


@dataclass(frozen=True)
class ModelParams:
    """Exponent p, frequency omega, velocity v, with derived exponents."""

    p: float
    omega: float = 1.0
    v: float = 0.0

    def __post_init__(self):
        if not (1.0 < self.p <= 5.0):
            raise ValueError(f"p must lie in (1, 5], got {self.p}")
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not abs(self.v) < 1.0:
            raise ValueError(f"|v| must be < 1, got {self.v}")

    @property
    def s_p(self) -> float:
        """Scaling-critical index 3/2 - 2/(p-1); zero at p = 7/3."""
        return 1.5 - 2.0 / (self.p - 1.0)

    @property
    def mass_map_exponent(self) -> float:
        """Exponent of the mass -> omega map, -1/s_p; undefined at p = 7/3."""
        # 1.5 - 2/(p-1) does not hit zero exactly in floats at p = 7/3
        if abs(self.s_p) < 1e-12:
            raise ValueError("mass-critical exponent p = 7/3 has no mass->omega map")
        return -1.0 / self.s_p


def _density(u: np.ndarray) -> np.ndarray:
    return np.clip(u.real ** 2 + u.imag ** 2, 0.0, None)


def mass(u: Field) -> float:
    """M(u) = 1/2 ||u||_{L2}^2."""
    return 0.5 * sp.l2_norm_sq(u)


def lp1_power(u: Field, p: float) -> float:
    """int |u|^{p+1}, via (|u|^2)^{(p+1)/2} in physical space."""
    vals = sp.to_physical(u).values
    return float(np.sum(_density(vals) ** ((p + 1.0) / 2.0))) * u.grid.cell_area


def lp1_norm(u: Field, p: float) -> float:
    return lp1_power(u, p) ** (1.0 / (p + 1.0))


def dx_norm_sq(u: Field) -> float:
    g = u.grid
    return sp.quadratic_form(u, np.broadcast_to(g.xi[:, None] ** 2, g.shape))


def dy_half_norm_sq(u: Field) -> float:
    """|| |D_y|^{1/2} u ||^2 = <|D_y| u, u>."""
    g = u.grid
    return sp.quadratic_form(u, np.broadcast_to(np.abs(g.eta)[None, :], g.shape))


def quadratic_action_form(u: Field, params: ModelParams) -> float:
    """<(-dxx + |D_y| + i v dy + omega) u, u>, the action's quadratic part."""
    mult = sp.action_quadratic(params.omega, params.v).values(u.grid)
    return sp.quadratic_form(u, mult)


def hamiltonian(u: Field, p: float) -> float:
    """H(u) = 1/2 (||dx u||^2 + <|D_y| u, u>) - 1/(p+1) int |u|^{p+1}."""
    return 0.5 * (dx_norm_sq(u) + dy_half_norm_sq(u)) - lp1_power(u, p) / (p + 1.0)


def action(u: Field, params: ModelParams) -> float:
    """S_{omega,v}(u) = 1/2 quadratic form - 1/(p+1) int |u|^{p+1}."""
    return 0.5 * quadratic_action_form(u, params) - lp1_power(u, params.p) / (params.p + 1.0)


def nehari(u: Field, params: ModelParams) -> float:
    """N(u) = <S'(u), u> = quadratic form - int |u|^{p+1}."""
    return quadratic_action_form(u, params) - lp1_power(u, params.p)


def i_value(u: Field, params: ModelParams) -> float:
    """I(u) = S(u) - N(u)/(p+1) = (1/2 - 1/(p+1)) * quadratic form."""
    return (0.5 - 1.0 / (params.p + 1.0)) * quadratic_action_form(u, params)


def x_norm_sq(u: Field) -> float:
    return dx_norm_sq(u) + dy_half_norm_sq(u) + sp.l2_norm_sq(u)


def x_norm(u: Field) -> float:
    """Anisotropic energy norm {||dx u||^2 + |||D_y|^{1/2} u||^2 + ||u||^2}^{1/2}."""
    return math.sqrt(x_norm_sq(u))


def x_weight(grid: Grid) -> np.ndarray:
    """Spectral weight 1 + xi^2 + |eta| of the X inner product."""
    return grid.xi[:, None] ** 2 + np.abs(grid.eta)[None, :] + 1.0


def x_inner(u: Field, w: Field):
    """X inner product <u, w>_X as a complex number."""
    if u.grid != w.grid:
        raise ValueError("fields live on different grids")
    uh = sp.to_spectral(u).values
    wh = sp.to_spectral(w).values
    return complex(np.sum(x_weight(u.grid) * uh * np.conj(wh)) * u.grid.cell_area)


def gn_quotient(u: Field, p: float) -> float:
    """Anisotropic Gagliardo-Nirenberg quotient

        int |u|^{p+1}
        -------------------------------------------------------------
        ||dx u||^{(p-1)/2} |||D_y|^{1/2} u||^{p-1} ||u||^{(5-p)/2}

    maximized exactly by the ground states.
    """
    a = dx_norm_sq(u) ** 0.5
    b = dy_half_norm_sq(u) ** 0.5
    c = sp.l2_norm(u)
    if a == 0.0 or b == 0.0 or c == 0.0:
        raise ValueError("Gagliardo-Nirenberg quotient needs nonzero norm factors")
    denom = a ** ((p - 1.0) / 2.0) * b ** (p - 1.0) * c ** ((5.0 - p) / 2.0)
    return lp1_power(u, p) / denom


def action_gradient(u: Field, params: ModelParams, dealias: bool = False) -> Field:
    """L2 gradient of the action under the real pairing re int f conj(g).

    grad S(u) = (-dxx + |D_y| + i v dy + omega) u - |u|^{p-1} u.
    """
    lin = sp.apply_symbol(sp.to_spectral(u), sp.action_quadratic(params.omega, params.v))
    phys = sp.to_physical(u).values
    nl = _density(phys) ** ((params.p - 1.0) / 2.0) * phys
    nl_field = Field(u.grid, nl, sp.PHYSICAL)
    if dealias:
        nl_field = sp.apply_dealias(nl_field)
    out = sp.to_physical(lin).values - nl_field.values
    return Field(u.grid, out, sp.PHYSICAL)


@dataclass(frozen=True)
class FunctionalReport:
    """One-stop evaluation of every functional on a field."""

    mass: float
    hamiltonian: float
    action: float
    nehari: float
    i_value: float
    x_norm: float
    lp1_norm: float
    gn_quotient: float


def functional_report(u: Field, params: ModelParams) -> FunctionalReport:
    return FunctionalReport(
        mass=mass(u),
        hamiltonian=hamiltonian(u, params.p),
        action=action(u, params),
        nehari=nehari(u, params),
        i_value=i_value(u, params),
        x_norm=x_norm(u),
        lp1_norm=lp1_norm(u, params.p),
        gn_quotient=gn_quotient(u, params.p),
    )
