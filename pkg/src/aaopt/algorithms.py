"""Fixed-point maps for nonsmooth first-order algorithms.

Each step function implements one application x -> H(x) of the underlying
iteration, so any of them can be driven plainly or through the Anderson
engine.  Prox callables follow the convention ``prox(v, t)`` = argmin
g(y) + ||y - v||^2 / (2 t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .problems import RegularizerPhi, phi_deriv
from .prox import weighted_soft_threshold

__all__ = [
    "FixedPointOperator",
    "ppa_step",
    "pga_step",
    "FistaState",
    "fista_init",
    "fista_step",
    "pla_step",
    "pcd_sweep",
    "DrsParams",
    "drs_parts",
    "drs_step",
    "admm_step",
    "Irl1State",
    "irl1_step",
    "irl1_beta_window",
]

Prox = Callable[[np.ndarray, float], np.ndarray]
Grad = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FixedPointOperator:
    """A fixed-point map together with optional run-time diagnostics.

    ``apply`` must be deterministic.  ``objective`` (if given) evaluates the
    merit function being minimized at an iterate; ``monitor`` maps an iterate
    to the vector whose sign/activity pattern identifies the active manifold
    (defaults to the iterate itself).
    """

    dimension: int
    apply: Callable[[np.ndarray], np.ndarray]
    objective: Callable[[np.ndarray], float] | None = None
    monitor: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.apply(x) - x

    def monitor_vector(self, x: np.ndarray) -> np.ndarray:
        return x if self.monitor is None else self.monitor(x)


def _require_finite(v: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(v)):
        raise FloatingPointError("%s is non-finite" % what)
    return v


def ppa_step(g_prox: Prox, beta: float, x: np.ndarray) -> np.ndarray:
    """Proximal-point step: H(x) = prox_{beta g}(x)."""
    if beta <= 0:
        raise ValueError("ppa_step: beta must be positive")
    return g_prox(x, beta)


def pga_step(grad_f: Grad, g_prox: Prox, beta: float, x: np.ndarray) -> np.ndarray:
    """Proximal-gradient step: H(x) = prox_{beta g}(x - beta grad f(x))."""
    if beta <= 0:
        raise ValueError("pga_step: beta must be positive")
    g = _require_finite(np.asarray(grad_f(x), dtype=float), "pga_step: gradient")
    return g_prox(x - beta * g, beta)


@dataclass(frozen=True)
class FistaState:
    """Momentum state (x, y, t) of the accelerated proximal gradient method."""

    x: np.ndarray
    y: np.ndarray
    t: float


def fista_init(x0: np.ndarray) -> FistaState:
    x0 = np.asarray(x0, dtype=float)
    return FistaState(x=x0, y=x0, t=1.0)


def fista_step(state: FistaState, grad_f: Grad, g_prox: Prox, beta: float) -> FistaState:
    """One FISTA update; the first step from fista_init equals pga_step.

    This comparator is driven on its own momentum sequence and is never fed
    to the Anderson engine.
    """
    x_new = pga_step(grad_f, g_prox, beta, state.y)
    t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * state.t**2))
    y_new = x_new + ((state.t - 1.0) / t_new) * (x_new - state.x)
    return FistaState(x=x_new, y=y_new, t=t_new)


def pla_step(
    f_prox: Prox | None,
    h_value: Callable[[np.ndarray], np.ndarray] | None,
    h_jac: Callable[[np.ndarray], np.ndarray] | None,
    g_prox: Prox | None,
    beta: float,
    x: np.ndarray,
    inner_tol: float = 1e-10,
    max_inner: int | None = None,
) -> np.ndarray:
    """Prox-linear step: minimize f(h(x) + Jh(x)(y-x)) + g(y) + ||y-x||^2/(2 beta).

    The convex inner subproblem is solved by Douglas--Rachford splitting with
    the composed term handled through the prox of f (this needs J J^T to be a
    multiple of the identity, which holds in particular whenever f is a
    function of a single scalar residual).  Pass ``f_prox=None`` for f == 0
    (the step reduces to prox_{beta g}, evaluated directly) and
    ``g_prox=None`` for g == 0.

    Returns the g-side prox output, whose inner optimality residual is at
    most ``inner_tol``.
    """
    if beta <= 0:
        raise ValueError("pla_step: beta must be positive")
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if g_prox is None:
        g_prox = lambda v, t: v
    if f_prox is None:
        return g_prox(x, beta)  # exact reduction to the proximal-point step
    if h_value is None or h_jac is None:
        raise ValueError("pla_step: h_value and h_jac are required when f is present")

    b0 = np.asarray(h_value(x), dtype=float)
    J = np.atleast_2d(np.asarray(h_jac(x), dtype=float))
    if J.shape[1] != n:
        raise ValueError("pla_step: Jacobian has %d columns, expected %d" % (J.shape[1], n))
    G = J @ J.T
    c = float(np.trace(G)) / G.shape[0]
    if np.linalg.norm(G - c * np.eye(G.shape[0])) > 1e-8 * max(1.0, abs(c)):
        raise ValueError("pla_step: composed prox needs J J^T proportional to the identity")
    offset = b0 - J @ x  # ell(y) = J y + offset

    t = beta  # inner DRS stepsize
    s = beta * t / (beta + t)

    def prox_composed(v: np.ndarray) -> np.ndarray:
        # prox of y -> f(ell(y)); identity when the linearization is constant
        if c <= 0:
            return v
        lv = J @ v + offset
        return v + (J.T @ (f_prox(lv, c * t) - lv)) / c

    def prox_quad_g(v: np.ndarray) -> np.ndarray:
        # prox of y -> g(y) + ||y - x||^2/(2 beta)
        return g_prox((t * x + beta * v) / (t + beta), s)

    if max_inner is None:
        max_inner = max(200, 10 * n)
    z = x.copy()
    y = x
    for _ in range(max_inner):
        xf = prox_composed(z)
        y = prox_quad_g(2.0 * xf - z)
        z = z + (y - xf)
        if np.linalg.norm(xf - y) <= inner_tol * t:
            break
    return y


def pcd_sweep(
    grad_f_coord: Callable[[int, np.ndarray], float],
    g_prox_coord: Callable[[int, float, float], float],
    beta: float,
    x: np.ndarray,
) -> np.ndarray:
    """One full cyclic sweep of proximal coordinate descent.

    Coordinate i is updated to prox of its separable term at
    x_i - beta * grad_f_coord(i, x) with the coordinates 0..i-1 already at
    their new values (grad_f_coord sees the partially updated vector).
    """
    if beta <= 0:
        raise ValueError("pcd_sweep: beta must be positive")
    x = np.array(x, dtype=float, copy=True)
    for i in range(x.shape[0]):
        v = x[i] - beta * grad_f_coord(i, x)
        if not np.isfinite(v):
            raise FloatingPointError("pcd_sweep: non-finite gradient at coordinate %d" % i)
        x[i] = g_prox_coord(i, v, beta)
    return x


@dataclass(frozen=True)
class DrsParams:
    """Stepsize beta and relaxation delta in (0, 2) for Douglas--Rachford."""

    beta: float
    delta: float = 1.0

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("DrsParams: beta must be positive")
        if not (0.0 < self.delta < 2.0):
            raise ValueError("DrsParams: delta must lie in (0, 2)")


def drs_parts(
    f_prox: Prox, g_prox: Prox, params: DrsParams, z: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One DRS update, returning (x, y, z_next).

    x = prox_{beta f}(z), y = prox_{beta g}(2x - z), z_next = z + delta(y - x).
    """
    x = f_prox(z, params.beta)
    y = g_prox(2.0 * x - z, params.beta)
    return x, y, z + params.delta * (y - x)


def drs_step(f_prox: Prox, g_prox: Prox, params: DrsParams, z: np.ndarray) -> np.ndarray:
    """The governing fixed-point map z -> z + delta*(R_beta(z) - prox_{beta f}(z))."""
    return drs_parts(f_prox, g_prox, params, z)[2]


def admm_step(
    phi1_min: Callable[[np.ndarray, np.ndarray], np.ndarray],
    phi2_min: Callable[[np.ndarray, np.ndarray], np.ndarray],
    A: np.ndarray,
    B: np.ndarray,
    b: np.ndarray,
    lam: float,
    state: tuple[np.ndarray, np.ndarray, np.ndarray],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One ADMM cycle for min phi1(u) + phi2(w) s.t. A u + B w = b.

    The updates run in the order u, then the multiplier v, then w:

        u+ = argmin_u phi1(u) + <v, A u> + lam/2 ||A u + B w - b||^2
        v+ = v + lam (A u+ + B w - b)
        w+ = argmin_w phi2(w) + <v+, B w> + lam/2 ||A u+ + B w - b||^2

    ``phi1_min(w, v)`` and ``phi2_min(u, v)`` solve the two subproblems.
    With this order the iterates track DRS on the image functions exactly
    (x = A u, y = b - B w, z = A u - v/lam).
    """
    if lam <= 0:
        raise ValueError("admm_step: lam must be positive")
    u, v, w = state
    u_new = phi1_min(w, v)
    v_new = v + lam * (A @ u_new + B @ w - b)
    w_new = phi2_min(u_new, v_new)
    return u_new, v_new, w_new


@dataclass(frozen=True)
class Irl1State:
    """Primal iterate and smoothing vector of the reweighted-l1 iteration."""

    x: np.ndarray
    eps: np.ndarray

    def __post_init__(self):
        if self.x.shape != self.eps.shape:
            raise ValueError("Irl1State: x and eps must have the same shape")
        if np.any(self.eps < 0):
            raise ValueError("Irl1State: eps must be nonnegative")


def irl1_step(
    grad_f: Grad,
    phi: RegularizerPhi,
    lam: float,
    beta: float,
    mu: float,
    state: Irl1State,
) -> Irl1State:
    """One iteratively-reweighted-l1 step on the extended variable (x, eps).

    Weights are w_i = phi'(|x_i| + eps_i); the x-update is the closed-form
    weighted shrinkage of the gradient step, and eps shrinks geometrically,
    eps+ = mu * eps.  A weight that is undefined (e.g. the power penalty at
    |x_i| + eps_i = 0) raises with the offending coordinate named.
    """
    if beta <= 0:
        raise ValueError("irl1_step: beta must be positive")
    if not (0.0 < mu < 1.0):
        raise ValueError("irl1_step: mu must lie in (0, 1)")
    if lam < 0:
        raise ValueError("irl1_step: lam must be nonnegative")
    w = phi_deriv(phi, np.abs(state.x) + state.eps)
    g = _require_finite(np.asarray(grad_f(state.x), dtype=float), "irl1_step: gradient")
    x_new = weighted_soft_threshold(state.x - beta * g, w, beta * lam)
    return Irl1State(x=x_new, eps=mu * state.eps)


def irl1_beta_window(kappa: float, lam: float, l_omega: float, mu: float) -> tuple[float, float]:
    """Admissible stepsize interval endpoints for the reweighted-l1 iteration.

    Returns the two roots (ascending) of

        (kappa^2 + lam^2 L^2) beta^2 - 2 kappa beta + 2 mu - mu^2 = 0,

    where L bounds the weight-map Lipschitz constant and kappa the strong
    monotonicity modulus.  A negative discriminant means the smoothing decay
    mu is incompatible with (kappa, lam*L) and raises.
    """
    if kappa <= 0:
        raise ValueError("irl1_beta_window: kappa must be positive")
    if lam < 0 or l_omega < 0:
        raise ValueError("irl1_beta_window: lam and l_omega must be nonnegative")
    if not (0.0 < mu < 1.0):
        raise ValueError("irl1_beta_window: mu outside admissible window (needs 0 < mu < 1)")
    a = kappa**2 + (lam * l_omega) ** 2
    disc = 4.0 * kappa**2 - 4.0 * a * (2.0 * mu - mu**2)
    if disc < 0:
        raise ValueError(
            "irl1_beta_window: mu outside admissible window (discriminant %.6g < 0)" % disc
        )
    root = math.sqrt(disc)
    return ((2.0 * kappa - root) / (2.0 * a), (2.0 * kappa + root) / (2.0 * a))
