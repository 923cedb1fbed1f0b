"""Seeded random generators for self-tests, the test suite and experiment scripts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from crownkit.crown import SymPoint, TubeCoordinates


def random_sl(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Gaussian matrix rescaled to determinant one."""
    while True:
        g = scale * rng.standard_normal((n, n))
        d = np.linalg.det(g)
        if abs(d) > 1e-3:
            break
    if d < 0:
        g[0] *= -1
        d = -d
    return g / d ** (1.0 / n)


def random_well_conditioned(n: int, rng: np.random.Generator, max_cond: float = 100.0) -> np.ndarray:
    while True:
        P = np.eye(n) + 0.5 * rng.standard_normal((n, n))
        if np.linalg.cond(P) <= max_cond:
            return P


def random_cell_angles(rng: np.random.Generator, shrink: float = 0.95) -> np.ndarray:
    """(l1, l2, l3) in radians, sum zero, uniform in shrink * cell."""
    bound = shrink * math.pi / 2
    while True:
        l2, l3 = rng.uniform(-math.pi / 3, math.pi / 3, size=2) * shrink
        lam = np.array([-l2 - l3, l2, l3])
        if np.ptp(lam) < bound:
            return lam


def random_moduli(rng: np.random.Generator, low: float = 0.25, high: float = 4.0) -> np.ndarray:
    """Three moduli in [low, high] (log-uniform), rescaled to product one."""
    rho = np.exp(rng.uniform(math.log(low), math.log(high), size=3))
    return rho / np.prod(rho) ** (1 / 3)


def random_tube_coordinates(rng: np.random.Generator, shrink: float = 0.95) -> TubeCoordinates:
    lam = random_cell_angles(rng, shrink)
    rho = random_moduli(rng)
    alpha, beta, gamma = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    zeta = rho * np.exp(1j * lam)
    zeta[0] = 1 / (zeta[1] * zeta[2])
    return TubeCoordinates(alpha, beta, gamma, tuple(zeta))


def random_e_member(rng: np.random.Generator, shrink: float = 0.95) -> SymPoint:
    """A unimodular symmetric matrix satisfying the membership inequalities.

    Built directly from the entries: a33 and D = a22 a33 - a23^2 are chosen
    with arguments twice a cell point, a12, a13, a23 freely, and a22, a11
    solved from D and det = 1.
    """
    lam = random_cell_angles(rng, shrink)
    rho = random_moduli(rng)
    a33 = rho[2] ** 2 * np.exp(2j * lam[2])
    D = (rho[1] * rho[2]) ** 2 * np.exp(2j * (lam[1] + lam[2]))
    a12, a13, a23 = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    a22 = (D + a23 * a23) / a33
    a11 = (1 + a12 * (a12 * a33 - a23 * a13) - a13 * (a12 * a23 - a22 * a13)) / D
    return SymPoint((a11, a12, a13, a22, a23, a33))


@dataclass(frozen=True)
class JordanSample:
    g: np.ndarray
    unipotent: np.ndarray
    hyperbolic: np.ndarray
    elliptic: np.ndarray


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def synth_jordan_sample(rng: np.random.Generator, kind: int | None = None) -> JordanSample:
    """Conjugated commuting product of unipotent, positive diagonal and rotation blocks.

    kind 0: SL(3), a 2 x 2 Jordan block with negative eigenvalue c plus c^{-2}.
    kind 1: SL(5), r [[R, R X], [0, R]] plus r^{-4}, R a rotation, X commuting with R.
    All three factors are nontrivial in both kinds.
    """
    if kind is None:
        kind = int(rng.integers(2))
    if kind == 0:
        c = -rng.uniform(0.5, 2.0)
        while abs(abs(c) - 1) < 0.05:
            c = -rng.uniform(0.5, 2.0)
        x = rng.uniform(0.5, 2.0) * rng.choice([-1, 1])
        u = np.eye(3)
        u[0, 1] = x
        h = np.diag([abs(c), abs(c), c ** -2])
        e = np.diag([-1.0, -1.0, 1.0])
        n = 3
    else:
        theta = rng.uniform(0.3, math.pi - 0.3)
        r = rng.uniform(1.2, 2.0)
        a, b = rng.uniform(0.5, 1.5), rng.uniform(-1.0, 1.0)
        X = a * np.eye(2) + b * np.array([[0, -1], [1, 0]])
        R = _rotation(theta)
        u = np.eye(5)
        u[:2, 2:4] = X
        h = np.diag([r, r, r, r, r ** -4])
        e = np.eye(5)
        e[:2, :2] = R
        e[2:4, 2:4] = R
        n = 5
    P = random_well_conditioned(n, rng)
    Pinv = np.linalg.inv(P)
    conj = lambda M: P @ M @ Pinv
    U, H, E = conj(u), conj(h), conj(e)
    return JordanSample(U @ H @ E, U, H, E)
