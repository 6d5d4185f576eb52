"""Optimal entanglement and squeezing rates for infinitesimal interaction use.

Given a pure state and a bilinear coupling, instantaneous local rotations can
be applied before each infinitesimal interaction window.  The largest
achievable growth rate of the two-mode squeezing parameter is

    rate_E = s1 * exp(l) - s2 * exp(-l),

where ``(s1, s2)`` are the restricted singular values of the coupling and
``l`` is the local squeezing parameter of the state (zero for unsqueezed
states, in which case the rate reduces to ``s1 - s2``).  The largest growth
rate of ``Q = log(squeezing)`` factorises into a state part and a coupling
part:

    rate_S = g_S(state) * C_S(coupling),    C_S = s1 - s2,
    g_S = 2 ||x1|| ||x2||,

with ``(x1, x2)`` the mode split of the unit eigenvector of the smallest CM
eigenvalue.  Both optima come with the explicit rotations that achieve them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    J,
    SIGMA_Z,
    LocalRotationPair,
    _as_k,
    _rotation_diagonalising,
    cm_blocks,
    assert_pure,
    assert_valid_cm,
    generator,
    pure_standard_form,
    restricted_svd,
)
from .measures import DEGENERACY_TOL

__all__ = [
    "EntanglementRatePlan",
    "SqueezingRatePlan",
    "local_squeezing_parameter",
    "optimal_entanglement_rate",
    "entanglement_rate",
    "squeezing_capability",
    "optimal_squeezing_rate",
]

#: Below this value of ``-det(C)`` the cross block counts as vanishing and the
#: first-order rate formulas switch to the standard-form path.
_DETC_TOL = 1e-14


def local_squeezing_parameter(gamma) -> float:
    """Local squeezing parameter ``l >= 0`` of a pure state.

    Determined by ``cosh(2l) = tr[(S1^T S1)^-1 sz (S2^T S2) sz] / 2`` from the
    local parts of the pure-state standard form.  For product states the
    local parts are only fixed up to rotations and the canonical orientation
    gives the maximal value ``l = d1 + d2`` (sum of the single-mode squeezing
    exponents).
    """
    form = pure_standard_form(gamma)
    if form.is_product:
        d1 = 0.5 * math.log(float(np.linalg.svd(form.S1, compute_uv=False)[0]) ** 2)
        d2 = 0.5 * math.log(float(np.linalg.svd(form.S2, compute_uv=False)[0]) ** 2)
        return d1 + d2
    p1 = form.S1.T @ form.S1
    p2 = form.S2.T @ form.S2
    x = 0.5 * float(np.trace(np.linalg.inv(p1) @ SIGMA_Z @ p2 @ SIGMA_Z))
    return 0.5 * math.acosh(max(x, 1.0))


@dataclass(frozen=True)
class EntanglementRatePlan:
    """Optimal entanglement rate together with the rotations achieving it.

    ``rate = s1*exp(l) - s2*exp(-l)``.  Applying ``rotations`` to the state
    (CM -> R gamma R^T) and then evolving under the coupling grows the
    two-mode squeezing parameter at ``rate`` to first order.  ``Y`` is the
    determinant-(-1) matrix ``sqrt(det A / -det C) C^T A^-1`` whose restricted
    singular values are ``(exp(l), -exp(-l))``; it is None for product
    states, where ``l`` comes from the standard form instead.
    """

    rate: float
    l: float
    rotations: LocalRotationPair
    Y: np.ndarray | None
    s1: float
    s2: float

    def to_dict(self) -> dict:
        return {
            "rate": self.rate,
            "l": self.l,
            "phi1": float(self.rotations.phi1),
            "phi2": float(self.rotations.phi2),
            "s1": self.s1,
            "s2": self.s2,
        }


def _y_matrix(gamma) -> np.ndarray | None:
    a, _, c = cm_blocks(np.asarray(gamma, dtype=float))
    det_c = float(np.linalg.det(c))
    if -det_c < _DETC_TOL:
        return None
    det_a = float(np.linalg.det(a))
    return math.sqrt(det_a / -det_c) * (c.T @ np.linalg.inv(a))


def optimal_entanglement_rate(gamma, k) -> EntanglementRatePlan:
    """Best achievable growth rate of the two-mode squeezing parameter.

    The optimal pre-rotations align the restricted SVD frames of the flow
    generator ``L = J^T K`` and of the state matrix ``Y``; for (near-)product
    states, where ``Y`` degenerates, they instead align the local squeezing
    axes of the two modes against the generator frame.
    """
    k = _as_k(k)
    gamma = assert_valid_cm(gamma)
    assert_pure(gamma)
    gen = generator(k)
    lbar1, svals, lbar2 = restricted_svd(gen.L)
    s1, s2 = svals.s1, svals.s2

    y = _y_matrix(gamma)
    if y is not None:
        ry, ys, sy = restricted_svd(y)
        l = math.log(max(ys.s1, 1.0))
        o1 = lbar1 @ sy
        o2 = lbar2.T @ ry.T
    else:
        form = pure_standard_form(gamma)
        l = local_squeezing_parameter(gamma)
        g1, _ = _rotation_diagonalising(form.S1 @ form.S1.T, descending=False)
        g2, _ = _rotation_diagonalising(form.S2 @ form.S2.T, descending=True)
        o1 = lbar1 @ g1.T
        o2 = lbar2.T @ g2.T
    rate = s1 * math.exp(l) - s2 * math.exp(-l)
    return EntanglementRatePlan(
        rate=rate,
        l=l,
        rotations=LocalRotationPair.from_matrices(o1, o2),
        Y=y,
        s1=s1,
        s2=s2,
    )


def entanglement_rate(gamma, k, o1, o2) -> float:
    """Entanglement rate for arbitrary (generally suboptimal) pre-rotations.

    ``o1`` and ``o2`` are the SO(2) rotations applied to the state before the
    interaction; the rate is ``tr(o1^T L o2 Y)``.  Requires an entangled pure
    state (the formula is singular for product states).
    """
    k = _as_k(k)
    gamma = assert_valid_cm(gamma)
    assert_pure(gamma)
    y = _y_matrix(gamma)
    if y is None:
        raise ValueError("entanglement_rate needs an entangled state (det C < 0)")
    gen = generator(k)
    o1 = np.asarray(o1, dtype=float)
    o2 = np.asarray(o2, dtype=float)
    return float(np.trace(o1.T @ gen.L @ o2 @ y))


def squeezing_capability(k) -> float:
    """``C_S = s1 - s2``: the largest achievable growth rate of ``log S``."""
    _, svals, _ = restricted_svd(k)
    return svals.s1 - svals.s2


@dataclass(frozen=True)
class SqueezingRatePlan:
    """Optimal squeezing rate and the mode-1 rotation achieving it.

    ``rate = capability * squeezability``.  Applying ``rotation`` to mode 1
    (identity on mode 2) orients the minimal-variance direction so the
    coupling compresses it fastest; ``o_tilde`` is the orthogonal,
    determinant-(-1) matrix satisfying ``-o_tilde x2 || x1``.  For degenerate
    smallest eigenvalues the eigenvector is chosen inside the eigenspace to
    maximise ``||x1|| ||x2||``.
    """

    rate: float
    capability: float
    squeezability: float
    rotation: np.ndarray
    o_tilde: np.ndarray
    x: np.ndarray
    lambda_min: float
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "rate": self.rate,
            "C_S": self.capability,
            "g_S": self.squeezability,
            "phi1": float(math.atan2(self.rotation[1, 0], self.rotation[0, 0])),
            "lambda_min": self.lambda_min,
            "degenerate": self.degenerate,
        }


def _balanced_min_eigenvector(gamma) -> tuple[np.ndarray, float, bool]:
    """Unit vector of the smallest eigenspace maximising ``||x1|| ||x2||``.

    Within the (possibly degenerate) eigenspace the weight
    ``mu = ||x1||^2`` is a quadratic form; the product ``||x1|| ||x2||`` is
    maximised at ``mu`` as close to 1/2 as the eigen-range of that form
    allows.
    """
    gamma = np.asarray(gamma, dtype=float)
    w, v = np.linalg.eigh(gamma)
    lam = float(w[0])
    idx = np.nonzero(w - lam < DEGENERACY_TOL)[0]
    if idx.size == 1:
        return v[:, 0], lam, False
    basis = v[:, idx]
    p = basis[:2, :].T @ basis[:2, :]
    mu, e = np.linalg.eigh(p)
    if mu[0] >= 0.5:
        coeff = e[:, 0]
    elif mu[-1] <= 0.5:
        coeff = e[:, -1]
    else:
        b = int(np.searchsorted(mu, 0.5))
        a = b - 1
        frac = (mu[b] - 0.5) / (mu[b] - mu[a])
        coeff = math.sqrt(frac) * e[:, a] + math.sqrt(1.0 - frac) * e[:, b]
    x = basis @ coeff
    return x / np.linalg.norm(x), lam, True


def optimal_squeezing_rate(gamma, k) -> SqueezingRatePlan:
    """Best achievable growth rate of ``Q = log(squeezing)`` under ``K``."""
    k = _as_k(k)
    gamma = assert_valid_cm(gamma)
    rk, svals, sk = restricted_svd(k)
    cap = svals.s1 - svals.s2

    x, lam, degenerate = _balanced_min_eigenvector(gamma)
    x1, x2 = x[:2], x[2:]
    n1, n2 = float(np.linalg.norm(x1)), float(np.linalg.norm(x2))
    g_s = 2.0 * n1 * n2

    w_mat = rk @ J.T @ SIGMA_Z @ sk
    if n1 < 1e-12 or n2 < 1e-12:
        o1 = np.eye(2)
    else:
        u = w_mat @ (x2 / n2)
        a = -x1 / n1
        # Rotation taking a to u; both are unit vectors.
        o1 = np.outer(u, a) + np.outer(J @ u, J @ a)
    return SqueezingRatePlan(
        rate=cap * g_s,
        capability=cap,
        squeezability=g_s,
        rotation=o1,
        o_tilde=o1.T @ w_mat,
        x=x,
        lambda_min=lam,
        degenerate=degenerate,
    )
