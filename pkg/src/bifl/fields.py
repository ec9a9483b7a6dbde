"""Pointwise algebra of Born-Infeld nonlinear electrostatics.

Gaussian units throughout.  The state variable at a spatial point is the
pair (B, D) of magnetic induction and electric displacement; the medium
responds with (E, H) through the Born-Infeld constitutive law

    E = [D - B x (B x D) / b^2] / S,   H = [B - D x (D x B) / b^2] / S,

    S = sqrt(1 + (|B|^2 + |D|^2)/b^2 + |B x D|^2/b^4),

where b is Born's field strength.  Dropping every B x D cross term gives
the Maxwell-Born variant, whose energy density is jointly convex in
(B, D).  The functions below also provide the Hamiltonian (energy) and
Lagrangian densities, their scaling derivative, and the B.H / E.D
products that control uniqueness of stationary solutions.

All field arguments are arrays of shape (..., 3); every function
broadcasts over the leading axes and is a pure function of its inputs.
Square roots of the form sqrt(1+q)-1 are evaluated as q/(sqrt(1+q)+1)
so weak fields do not lose precision to cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FOUR_PI = 4.0 * np.pi

#: Model selector values: full Born-Infeld law, or the Maxwell-Born
#: simplification with the B x D cross terms dropped.
MBI = "MBI"
MB = "MB"

_MODELS = (MBI, MB)


class InfeasiblePointError(ValueError):
    """Lagrangian density evaluated where its radicand is negative (|E| too large)."""


class ModelMismatchError(ValueError):
    """Operation called with a model it is not defined for."""


def _as_vec3(v, name: str) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape[-1:] != (3,):
        raise ValueError(f"{name} must have shape (..., 3), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite components")
    return a


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters: Born constant b > 0, model selector, light speed c.

    b is always a runtime parameter; closed forms in this package rescale
    with it.  c only enters the source coupling j/c and defaults to 1.
    """

    b: float = 1.0
    model: str = MBI
    c: float = 1.0

    def __post_init__(self):
        if not (self.b > 0.0 and np.isfinite(self.b)):
            raise ValueError("ModelParams.b must be a positive finite real")
        if not (self.c > 0.0 and np.isfinite(self.c)):
            raise ValueError("ModelParams.c must be a positive finite real")
        if self.model not in _MODELS:
            raise ValueError(f"ModelParams.model must be one of {_MODELS}")

    @property
    def is_mbi(self) -> bool:
        return self.model == MBI


@dataclass(frozen=True)
class FieldPoint:
    """A (B, D) pair; arrays of shape (..., 3) represent batches of points."""

    B: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "B", _as_vec3(self.B, "B"))
        object.__setattr__(self, "D", _as_vec3(self.D, "D"))

    def swapped(self) -> "FieldPoint":
        """The point with B and D exchanged (the duality of the constitutive law)."""
        return FieldPoint(B=self.D, D=self.B)


@dataclass(frozen=True)
class AuxPoint:
    """The (E, H) pair produced by the constitutive map.

    For the Born-Infeld law both magnitudes satisfy |E| < b and |H| < b
    strictly: each numerator is dominated by the shared denominator.
    """

    E: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "E", _as_vec3(self.E, "E"))
        object.__setattr__(self, "H", _as_vec3(self.H, "H"))


def _sq(v: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", v, v)


def _dot(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", u, v)


def _invariants(B: np.ndarray, D: np.ndarray, m: ModelParams):
    """Shared scalars of the constitutive law.

    Returns (Bsq, Dsq, Xsq, q, S): squared magnitudes, |B x D|^2 (zero
    array for Maxwell-Born), q = (Bsq+Dsq)/b^2 + Xsq/b^4 and the common
    denominator S = sqrt(1 + q).  Computing these once is what makes the
    E, H, B.H and E.D expressions agree identically to round-off.
    """
    b2 = m.b * m.b
    Bsq = _sq(B)
    Dsq = _sq(D)
    if m.is_mbi:
        Xsq = _sq(np.cross(B, D))
    else:
        Xsq = np.zeros(np.broadcast_shapes(Bsq.shape, Dsq.shape))
    q = (Bsq + Dsq) / b2 + Xsq / (b2 * b2)
    S = np.sqrt(1.0 + q)
    return Bsq, Dsq, Xsq, q, S


def e_of_bd(p: FieldPoint, m: ModelParams) -> np.ndarray:
    """Electric field E(B, D) of the constitutive law.

    Born-Infeld: E = [D - B x (B x D)/b^2] / S.  Maxwell-Born: E = D / S
    with the cross terms dropped from numerator and denominator.  Total
    map; reduces to E = D in the weak-field limit.
    """
    B, D = p.B, p.D
    _, _, _, _, S = _invariants(B, D, m)
    if m.is_mbi:
        num = D - np.cross(B, np.cross(B, D)) / (m.b * m.b)
    else:
        num = D
    return num / S[..., None]


def h_of_bd(p: FieldPoint, m: ModelParams) -> np.ndarray:
    """Magnetic field H(B, D); the exact B <-> D mirror of :func:`e_of_bd`."""
    return e_of_bd(p.swapped(), m)


def constitutive(p: FieldPoint, m: ModelParams) -> AuxPoint:
    """Both constitutive outputs bundled as an :class:`AuxPoint`."""
    return AuxPoint(E=e_of_bd(p, m), H=h_of_bd(p, m))


def energy_density(p: FieldPoint, m: ModelParams) -> np.ndarray:
    """Field-energy density (b^2/4pi) [sqrt(1 + q) - 1] >= 0, zero iff B = D = 0.

    q = (|B|^2+|D|^2)/b^2 + |B x D|^2/b^4 for Born-Infeld; the cross term
    is absent for Maxwell-Born, so the Maxwell-Born density never exceeds
    the Born-Infeld one.
    """
    _, _, _, q, S = _invariants(p.B, p.D, m)
    return (m.b * m.b / FOUR_PI) * q / (S + 1.0)


def lagrangian_density(E, B, m: ModelParams) -> np.ndarray:
    """Lagrangian density (b^2/4pi) [1 - sqrt(1 - qL)] of the potentials.

    Born-Infeld: qL = (|E|^2 - |B|^2)/b^2 + (E.B)^2/b^4.  Maxwell-Born:
    the convex dual of its energy density, which replaces (E.B)^2 by
    |E|^2 |B|^2 (equivalently 1 - qL = (1 - |E|^2/b^2)(1 + |B|^2/b^2)).

    Raises :class:`InfeasiblePointError` where qL > 1, i.e. where |E| is
    too large relative to b; solvers must never evaluate there.
    """
    E = _as_vec3(E, "E")
    B = _as_vec3(B, "B")
    b2 = m.b * m.b
    Esq = _sq(E)
    Bsq = _sq(B)
    if m.is_mbi:
        cross = _dot(E, B) ** 2
    else:
        cross = Esq * Bsq
    qL = (Esq - Bsq) / b2 + cross / (b2 * b2)
    radicand = 1.0 - qL
    if np.any(radicand < 0.0):
        worst = float(np.min(radicand))
        raise InfeasiblePointError(
            f"Lagrangian radicand negative (min {worst:.3e}); |E| exceeds the feasible ball"
        )
    return (b2 / FOUR_PI) * qL / (1.0 + np.sqrt(radicand))


def bh_dot(p: FieldPoint, m: ModelParams) -> np.ndarray:
    """B . H(B, D) in closed form: (|B|^2 + |B x D|^2/b^2) / S.

    Nonnegative for every input and zero exactly when B = 0; this is the
    quantity whose vanishing integral forces stationary solutions with
    j = 0 to be electrostatic.
    """
    Bsq, _, Xsq, _, S = _invariants(p.B, p.D, m)
    return (Bsq + Xsq / (m.b * m.b)) / S


def ed_dot(p: FieldPoint, m: ModelParams) -> np.ndarray:
    """E(B, D) . D in closed form; the B <-> D mirror of :func:`bh_dot`.

    Vanishes exactly when D = 0, forcing rho = 0 solutions to be
    magnetostatic.
    """
    return bh_dot(p.swapped(), m)


def scaling_derivative_density(p: FieldPoint, m: ModelParams) -> np.ndarray:
    """d/dlambda of the energy density of (lambda B, lambda D) at lambda = 1.

    Closed form (b^2/4pi) [(|B|^2+|D|^2)/b^2 + 2|B x D|^2/b^4] / S:
    manifestly >= 0 and zero only for the vacuum point, which is why no
    nontrivial source-free stationary solution can exist.
    """
    Bsq, Dsq, Xsq, _, S = _invariants(p.B, p.D, m)
    b2 = m.b * m.b
    return (b2 / FOUR_PI) * ((Bsq + Dsq) / b2 + 2.0 * Xsq / (b2 * b2)) / S


# --- Lagrangian-side (E, B) -> (D, H) maps used by the potential solvers ---


def lagrangian_radicand(E, B, m: ModelParams) -> np.ndarray:
    """Radicand 1 - qL of the Lagrangian density, without raising.

    Feasibility means radicand > 0 everywhere; the solvers' line searches
    backtrack until the minimum over cells clears their margin.
    """
    E = _as_vec3(E, "E")
    B = _as_vec3(B, "B")
    b2 = m.b * m.b
    Esq = _sq(E)
    Bsq = _sq(B)
    if m.is_mbi:
        cross = _dot(E, B) ** 2
    else:
        cross = Esq * Bsq
    return 1.0 - (Esq - Bsq) / b2 - cross / (b2 * b2)


def _lagrangian_invariants(E: np.ndarray, B: np.ndarray, m: ModelParams):
    """Radicand R and the numerator vectors P = D*sqrt(R), Q = H*sqrt(R)."""
    b2 = m.b * m.b
    Esq = _sq(E)
    Bsq = _sq(B)
    if m.is_mbi:
        s = _dot(E, B)
        R = 1.0 - (Esq - Bsq) / b2 - (s * s) / (b2 * b2)
        P = E + (s / b2)[..., None] * B
        Q = B - (s / b2)[..., None] * E
    else:
        R = (1.0 - Esq / b2) * (1.0 + Bsq / b2)
        P = (1.0 + Bsq / b2)[..., None] * E
        Q = (1.0 - Esq / b2)[..., None] * B
    if np.any(R <= 0.0):
        raise InfeasiblePointError(
            f"constitutive inversion outside the feasible ball (min radicand {float(np.min(R)):.3e})"
        )
    return R, P, Q


def d_of_eb(E, B, m: ModelParams) -> np.ndarray:
    """Displacement D(E, B): inverse constitutive map on the Lagrangian side.

    Born-Infeld: D = [E + (E.B) B/b^2] / sqrt(R); for B = 0 this is the
    familiar D = E / sqrt(1 - |E|^2/b^2).
    """
    E = _as_vec3(E, "E")
    B = _as_vec3(B, "B")
    R, P, _ = _lagrangian_invariants(E, B, m)
    return P / np.sqrt(R)[..., None]


def h_of_eb(E, B, m: ModelParams) -> np.ndarray:
    """Magnetic field H(E, B) = [B - (E.B) E/b^2] / sqrt(R) on the Lagrangian side."""
    E = _as_vec3(E, "E")
    B = _as_vec3(B, "B")
    R, _, Q = _lagrangian_invariants(E, B, m)
    return Q / np.sqrt(R)[..., None]


def constitutive_jacobian_apply(E, B, dE, dB, m: ModelParams):
    """Differentials (dD, dH) of the (E, B) -> (D, H) maps along (dE, dB).

    This is the exact second derivative of the Lagrangian density (times
    4pi), arranged so that (dD, -dH) is the symmetric Hessian action the
    saddle solvers need.  Vectorized over leading axes.
    """
    E = _as_vec3(E, "E")
    B = _as_vec3(B, "B")
    dE = _as_vec3(dE, "dE")
    dB = _as_vec3(dB, "dB")
    b2 = m.b * m.b
    R, P, Q = _lagrangian_invariants(E, B, m)
    rsqrt = 1.0 / np.sqrt(R)
    r32 = rsqrt / R

    if m.is_mbi:
        s = _dot(E, B)
        # dP = dE + [(dE.B + E.dB) B + s dB]/b^2, dQ mirrored
        dsdot = _dot(dE, B) + _dot(E, dB)
        dP = dE + (dsdot[..., None] * B + s[..., None] * dB) / b2
        dQ = dB - (dsdot[..., None] * E + s[..., None] * dE) / b2
        # dR = -2 (P.dE - Q.dB)/b^2
        dR = -2.0 * (_dot(P, dE) - _dot(Q, dB)) / b2
    else:
        Esq = _sq(E)
        Bsq = _sq(B)
        dP = (1.0 + Bsq / b2)[..., None] * dE + (2.0 * _dot(B, dB) / b2)[..., None] * E
        dQ = (1.0 - Esq / b2)[..., None] * dB - (2.0 * _dot(E, dE) / b2)[..., None] * B
        dR = 2.0 * (-_dot(E, dE) * (1.0 + Bsq / b2) + _dot(B, dB) * (1.0 - Esq / b2)) / b2

    dD = dP * rsqrt[..., None] - 0.5 * (dR * r32)[..., None] * P
    dH = dQ * rsqrt[..., None] - 0.5 * (dR * r32)[..., None] * Q
    return dD, dH


def d_of_eb_series(E, B, m: ModelParams, order: int):
    """Expansion of D(E, B) - E and H(E, B) - B in powers of 1/b^2.

    Returns (dD, dH) containing the correction terms through the given
    order (1 or 2); order 0 returns zeros.  Used by the perturbative
    solver, which feeds these as effective sources to linear solves.
    """
    E = _as_vec3(E, "E")
    B = _as_vec3(B, "B")
    if order not in (0, 1, 2):
        raise ValueError("series order must be 0, 1 or 2")
    dD = np.zeros(np.broadcast_shapes(E.shape, B.shape))
    dH = np.zeros_like(dD)
    if order == 0:
        return dD, dH
    eps = 1.0 / (m.b * m.b)
    Esq = _sq(E)
    Bsq = _sq(B)
    u = Esq - Bsq
    if m.is_mbi:
        s = _dot(E, B)
        s2 = s * s
    else:
        # cross terms dropped: (E.B)^2 -> |E|^2 |B|^2 in the radicand,
        # (E.B) B -> |B|^2 E and (E.B) E -> |E|^2 B in the numerators
        s = None
        s2 = Esq * Bsq
    # first order: D - E = eps [s B + u E / 2], H - B = eps [u B / 2 - s E]
    if m.is_mbi:
        sB = s[..., None] * B
        sE = s[..., None] * E
    else:
        sB = Bsq[..., None] * E
        sE = Esq[..., None] * B
    dD += eps * (sB + 0.5 * u[..., None] * E)
    dH += eps * (0.5 * u[..., None] * B - sE)
    if order == 2:
        w = 0.5 * s2 + 0.375 * u * u
        dD += eps * eps * (0.5 * u[..., None] * sB + w[..., None] * E)
        dH += eps * eps * (w[..., None] * B - 0.5 * u[..., None] * sE)
    return dD, dH
