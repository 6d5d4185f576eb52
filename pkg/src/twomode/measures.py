"""Entanglement and squeezing quantifiers for two-mode Gaussian states.

Entanglement of a pure state is fully captured by the two-mode squeezing
parameter ``r`` of its standard form; ``r`` equals the logarithmic
negativity.  The negativity itself is computed from the partially transposed
CM, which also works for mixed states.  Squeezing is the inverse smallest
eigenvalue of the CM.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import J2, assert_pure, assert_valid_cm, cm_blocks, pure_standard_form

__all__ = [
    "EntanglementReport",
    "SqueezingReport",
    "negativity",
    "entanglement",
    "squeezing",
    "ENTROPY_CONVENTION_NOTE",
]

#: diag(1, 1, 1, -1): sign flip of P2 implementing partial transposition.
_LAMBDA = np.diag([1.0, 1.0, 1.0, -1.0])

#: Gap below which the two smallest CM eigenvalues count as degenerate.
DEGENERACY_TOL = 1e-10

ENTROPY_CONVENTION_NOTE = (
    "entropy uses cosh(r) = sqrt(det A); entropy_alt uses the alternative "
    "parameterisation r = acosh(sqrt(det A))/2 — the two conventions do not "
    "agree and both values are reported"
)


def negativity(gamma) -> float:
    """Inverse smallest symplectic eigenvalue of the partially transposed CM.

    Computed as ``[min spec(J2^T gt J2 gt)]^(-1/2)`` with ``gt = L gamma L``
    and ``L = diag(1, 1, 1, -1)``.  The product has real positive spectrum
    (the squared symplectic eigenvalues of ``gt``), but it is not a normal
    matrix, so the spectrum rather than the singular values must be used.
    Values above 1 witness entanglement; for pure states
    ``negativity = exp(r)``.
    """
    gamma = assert_valid_cm(gamma)
    gt = _LAMBDA @ gamma @ _LAMBDA
    spec = np.abs(np.linalg.eigvals(J2.T @ gt @ J2 @ gt))
    return float(np.min(spec)) ** -0.5


def _entropy_of(rr: float) -> float:
    ch2 = math.cosh(rr) ** 2
    sh2 = math.sinh(rr) ** 2
    if sh2 <= 0.0:
        return 0.0
    return ch2 * math.log(ch2) - sh2 * math.log(sh2)


@dataclass(frozen=True)
class EntanglementReport:
    """Entanglement quantifiers of a pure two-mode Gaussian state.

    ``r`` is the standard-form two-mode squeezing parameter and equals the
    log-negativity; ``det_a = cosh(r)^2`` is the determinant of the reduced
    CM (an inverse-purity measure); ``negativity = exp(r)``.  ``entropy`` is
    the entropy of entanglement with ``cosh(r) = sqrt(det A)``;
    ``entropy_alt`` uses the halved parameterisation (see
    ``ENTROPY_CONVENTION_NOTE``).
    """

    r: float
    negativity: float
    det_a: float
    entropy: float
    entropy_alt: float
    convention_warning: str = ENTROPY_CONVENTION_NOTE

    @property
    def log_negativity(self) -> float:
        return self.r

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "E0": self.r,
            "Ep": self.det_a,
            "negativity": self.negativity,
            "entropy": self.entropy,
            "entropy_alt": self.entropy_alt,
        }


def entanglement(gamma) -> EntanglementReport:
    """Full entanglement report for a pure CM.

    Raises
    ------
    NotPureError
        If ``det(gamma)`` deviates from 1; use :func:`negativity` for mixed
        states.
    """
    gamma = assert_valid_cm(gamma)
    assert_pure(gamma)
    a, _, _ = cm_blocks(gamma)
    det_a = max(float(np.linalg.det(a)), 1.0)
    r = pure_standard_form(gamma).r
    return EntanglementReport(
        r=r,
        negativity=negativity(gamma),
        det_a=det_a,
        entropy=_entropy_of(r),
        entropy_alt=_entropy_of(math.acosh(math.sqrt(det_a)) / 2.0),
    )


@dataclass(frozen=True)
class SqueezingReport:
    """Squeezing of a CM: inverse smallest eigenvalue and its direction.

    ``x1``/``x2`` are the mode-1 and mode-2 components of the unit
    eigenvector belonging to ``lambda_min``.  When the smallest eigenvalue is
    (near-)degenerate the eigenvector is not unique; ``degenerate`` flags
    this and callers needing a specific representative must pick their own
    (the rate optimiser does).
    """

    lambda_min: float
    squeezing: float
    q: float
    x1: np.ndarray
    x2: np.ndarray
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "lambda_min": self.lambda_min,
            "S": self.squeezing,
            "Q": self.q,
            "x1": [float(v) for v in self.x1],
            "x2": [float(v) for v in self.x2],
            "degenerate": self.degenerate,
        }


def squeezing(gamma) -> SqueezingReport:
    """Squeezing report ``S = 1/lambda_min``, ``Q = log S`` for a valid CM."""
    gamma = assert_valid_cm(gamma)
    w, v = np.linalg.eigh(gamma)
    lam = float(w[0])
    x = v[:, 0]
    return SqueezingReport(
        lambda_min=lam,
        squeezing=1.0 / lam,
        q=-math.log(lam) + 0.0,
        x1=x[:2].copy(),
        x2=x[2:].copy(),
        degenerate=bool(w[1] - w[0] < DEGENERACY_TOL),
    )
