"""Shared random generators and independent oracles for the test suite."""

import numpy as np

from twomode.core import LocalRotationPair, apply_symplectic, evolve, vacuum_cm


def random_coupling(rng, scale=1.0):
    """Random 2x2 coupling matrix with N(0, scale) entries."""
    return scale * rng.normal(size=(2, 2))


def random_rotation_pair(rng):
    phi = rng.uniform(0.0, 2.0 * np.pi, size=2)
    return LocalRotationPair(float(phi[0]), float(phi[1]))


def random_symplectic(rng, factors=3, tmax=1.0):
    """Product of random coupling flows and local rotations."""
    s = np.eye(4)
    for _ in range(factors):
        s = evolve(random_coupling(rng), rng.uniform(-tmax, tmax)) @ s
        s = random_rotation_pair(rng).matrix @ s
    return s


def random_pure_cm(rng, factors=3, tmax=0.8):
    """Random pure two-mode CM with moderate squeezing."""
    return apply_symplectic(random_symplectic(rng, factors=factors, tmax=tmax), vacuum_cm())


def haar_unitary(n, rng):
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_passive(n_modes, rng):
    """Haar-random orthogonal symplectic matrix on ``n_modes`` modes."""
    u = haar_unitary(n_modes, rng)
    o = np.zeros((2 * n_modes, 2 * n_modes))
    for j in range(n_modes):
        for k in range(n_modes):
            o[2 * j : 2 * j + 2, 2 * k : 2 * k + 2] = [
                [u[j, k].real, -u[j, k].imag],
                [u[j, k].imag, u[j, k].real],
            ]
    return o


def two_mode_r(gamma):
    """Two-mode squeezing parameter from the reduced determinant (oracle path)."""
    det_a = np.linalg.det(np.asarray(gamma)[:2, :2])
    return float(np.arccosh(np.sqrt(max(det_a, 1.0))))


def _rotation_stack(n_grid):
    angles = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    c, s = np.cos(angles), np.sin(angles)
    rots = np.zeros((n_grid, 2, 2))
    rots[:, 0, 0] = c
    rots[:, 0, 1] = -s
    rots[:, 1, 0] = s
    rots[:, 1, 1] = c
    return rots


def grid_entanglement_rate(gamma, k, n_grid=360, dt=1e-6):
    """Brute-force oracle: max finite-difference rate of the two-mode
    squeezing parameter over an ``n_grid x n_grid`` grid of pre-rotations.

    Independent of the closed-form optimum: uses the exact flow for a short
    step and differentiates ``r = acosh(sqrt(det A))`` numerically.
    """
    gamma = np.asarray(gamma, dtype=float)
    a = gamma[:2, :2]
    b = gamma[2:, 2:]
    c = gamma[:2, 2:]
    rots = _rotation_stack(n_grid)

    a_rot = np.einsum("nij,jk,nlk->nil", rots, a, rots)  # (n, 2, 2)
    b_rot = np.einsum("nij,jk,nlk->nil", rots, b, rots)
    c_rot = np.einsum("nij,jk,mlk->nmil", rots, c, rots)  # (n, m, 2, 2)

    s = evolve(k, dt)
    s11, s12 = s[:2, :2], s[:2, 2:]
    a_dt = (
        np.einsum("ij,njk,lk->nil", s11, a_rot, s11)[:, None]
        + np.einsum("ij,nmjk,lk->nmil", s11, c_rot, s12)
        + np.einsum("ij,nmkj,lk->nmil", s12, c_rot, s11)
        + np.einsum("ij,njk,lk->nil", s12, b_rot, s12)[None, :]
    )
    det = a_dt[..., 0, 0] * a_dt[..., 1, 1] - a_dt[..., 0, 1] * a_dt[..., 1, 0]
    r0 = np.arccosh(np.sqrt(max(np.linalg.det(a), 1.0)))
    r_dt = np.arccosh(np.sqrt(np.maximum(det, 1.0)))
    return float(np.max(r_dt - r0)) / dt


def grid_squeezing_rate(gamma, k, n_grid=720, dt=1e-6):
    """Brute-force oracle: max finite-difference rate of ``Q = -log lambda_min``
    over mode-1 pre-rotations."""
    gamma = np.asarray(gamma, dtype=float)
    rots = _rotation_stack(n_grid)
    pairs = np.tile(np.eye(4), (n_grid, 1, 1))
    pairs[:, :2, :2] = rots
    rotated = np.einsum("nij,jk,nlk->nil", pairs, gamma, pairs)
    s = evolve(k, dt)
    evolved = np.einsum("ij,njk,lk->nil", s, rotated, s)
    lam = np.linalg.eigvalsh(evolved)[:, 0]
    q0 = -np.log(np.linalg.eigvalsh(gamma)[0])
    return float(np.max(-np.log(lam) - q0)) / dt
