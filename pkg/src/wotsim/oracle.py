"""Brute-force verifiers for the closed forms used elsewhere.

Every oracle here is a lower-bound estimator built from explicit states and
exhaustive or random search, with no reliance on the formula it checks:
``cks_alice_oracle`` grid-searches cheating preparations for the qutrit
protocol, ``helstrom_oracle`` tries random projective measurements, and
``uhlmann_oracle`` tries random unitaries on the purifying system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import RangeError
from .qcore import (
    DensityOp,
    StateVector,
    bipartition_matrix,
    guess_prob,
    haar_unitary,
    hermitize,
)

# Fixed stream for the oracle's random ancilla configurations; the oracle
# takes no seed parameter and must be deterministic.
_ANCILLA_SEED = 20131011


def grid_tolerance(grid: int) -> float:
    """Honest error bar for a grid-search maximum: 2 / grid."""
    return 2.0 / grid


@dataclass(frozen=True, eq=False)
class CheatState:
    """A cheating preparation for the qutrit protocol.

    The qutrit Alice keeps is replaced by a 3-dim ancilla carrying three
    unit vectors (not necessarily orthogonal); the joint state is
    alpha |e0>|0> + beta |e1>|1> + gamma |e2>|2| with nonnegative weights.
    """

    alpha: float
    beta: float
    gamma: float
    ancilla_vectors: tuple[np.ndarray, np.ndarray, np.ndarray]

    def __post_init__(self):
        vecs = tuple(np.asarray(v, dtype=complex).reshape(3) for v in self.ancilla_vectors)
        object.__setattr__(self, "ancilla_vectors", vecs)
        for w in (self.alpha, self.beta, self.gamma):
            if w < 0:
                raise RangeError(f"weights must be nonnegative, got {w}")
        norm2 = self.alpha**2 + self.beta**2 + self.gamma**2
        if abs(norm2 - 1.0) > 1e-9:
            raise RangeError(f"weights have squared norm {norm2}, need 1")
        for v in vecs:
            if abs(np.linalg.norm(v) - 1.0) > 1e-9:
                raise RangeError("ancilla vectors must be unit vectors")


def orthonormal_ancillas() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The computational-basis ancilla configuration."""
    e = np.eye(3, dtype=complex)
    return (e[0], e[1], e[2])


def _frame(ancillas) -> np.ndarray:
    """The three joint vectors |e_c>|c> as rows of a (3, 9) array.

    They are orthonormal for every ancilla configuration because the qutrit
    parts are distinct basis states.
    """
    frame = np.zeros((3, 9), dtype=complex)
    for c, e in enumerate(ancillas):
        frame[c] = np.kron(e, np.eye(3)[c])
    return frame


def _post_interaction_states(alphas, betas, gammas, ancillas) -> np.ndarray:
    """Stacked states psi[x0, x1] for batches of weights: shape (n, 2, 2, 9)."""
    frame = _frame(ancillas)
    alphas, betas, gammas = (np.asarray(v, dtype=float) for v in (alphas, betas, gammas))
    n = alphas.shape[0]
    out = np.empty((n, 2, 2, 9), dtype=complex)
    for x0 in (0, 1):
        for x1 in (0, 1):
            coeff = np.stack(
                [alphas * (-1) ** x0, betas * (-1) ** x1, gammas], axis=1
            )
            out[:, x0, x1, :] = coeff @ frame
    return out


def _success_batch(alphas, betas, gammas, ancillas, target: int) -> np.ndarray:
    """Optimal guessing probability for the target bit, for a batch of
    cheating preparations, computed via explicit trace norms."""
    psi = _post_interaction_states(alphas, betas, gammas, ancillas)
    outer = np.einsum("nxyi,nxyj->nxyij", psi, psi.conj())
    if target == 0:
        rho_v = outer.mean(axis=2)  # average over x1; index 1 is x0
    else:
        rho_v = outer.mean(axis=1)  # average over x0; index 1 is x1
    diff = rho_v[:, 0] - rho_v[:, 1]
    diff = (diff + np.conj(np.swapaxes(diff, -1, -2))) / 2
    tn = np.abs(np.linalg.eigvalsh(diff)).sum(axis=-1)
    return 0.5 + 0.25 * tn


def cks_alice_success(cs: CheatState, target: int) -> float:
    """Probability that the cheating preparation guesses the target bit.

    Builds the four post-interaction states explicitly, averages them into
    the two conditional mixed states, and evaluates the optimal guessing
    probability through the trace-norm machinery; no closed form is used.
    """
    if target not in (0, 1):
        raise RangeError(f"target must be 0 or 1, got {target}")
    psi = _post_interaction_states(
        np.array([cs.alpha]), np.array([cs.beta]), np.array([cs.gamma]),
        cs.ancilla_vectors,
    )[0]
    rhos = []
    for value in (0, 1):
        if target == 0:
            members = (psi[value, 0], psi[value, 1])
        else:
            members = (psi[0, value], psi[1, value])
        acc = sum(np.outer(v, v.conj()) for v in members) / 2.0
        rhos.append(DensityOp(hermitize(acc)))
    return guess_prob(rhos[0], rhos[1])


def _candidate_weights(delta: float, grid: int) -> tuple[np.ndarray, np.ndarray]:
    """(alpha, gamma) candidates: the feasibility boundary alpha*gamma =
    1/2 - delta traced along a gamma grid, a coarse interior grid, and the
    honest preparation."""
    threshold = 0.5 - delta
    alphas, gammas = [1.0 / np.sqrt(2.0)], [1.0 / np.sqrt(2.0)]
    for j in range(1, grid + 1):
        g = j / grid
        if g <= 0:
            continue
        a = threshold / g
        if a <= 1.0 and a * a + g * g <= 1.0:
            alphas.append(a)
            gammas.append(g)
    step = max(1, grid // 100)
    for i in range(0, grid + 1, step):
        for j in range(0, grid + 1, step):
            a, g = i / grid, j / grid
            if a * a + g * g <= 1.0 and a * g >= threshold - 1e-12:
                alphas.append(a)
                gammas.append(g)
    return np.asarray(alphas), np.asarray(gammas)


def cks_alice_oracle(delta: float, grid: int) -> float:
    """Grid-search the best cheating preparation for the qutrit protocol.

    Maximizes the probability of guessing x1 over preparations whose
    probability of guessing x0 is at least 1 - delta, sweeping (alpha,
    gamma) candidates with beta fixed by normalization, under both the
    orthonormal and seeded random ancilla configurations.  All successes
    are evaluated through the explicit trace-norm route.  The result is a
    lower-bound estimate of the true maximum with grid error about
    ``grid_tolerance(grid)``.
    """
    if not 0.0 <= delta <= 0.5:
        raise RangeError(f"delta must be in [0, 1/2], got {delta}")
    if grid < 50:
        raise RangeError(f"grid must be >= 50, got {grid}")
    alphas, gammas = _candidate_weights(delta, grid)
    betas = np.sqrt(np.clip(1.0 - alphas**2 - gammas**2, 0.0, None))
    rng = np.random.default_rng(_ANCILLA_SEED)
    configs = [orthonormal_ancillas()]
    for _ in range(2):
        configs.append(tuple(haar_unitary(3, rng)[:, 0] for _ in range(3)))
    best = 0.5
    for ancillas in configs:
        p_x0 = _success_batch(alphas, betas, gammas, ancillas, target=0)
        feasible = p_x0 >= 1.0 - delta - 1e-12
        if not np.any(feasible):
            continue
        p_x1 = _success_batch(
            alphas[feasible], betas[feasible], gammas[feasible], ancillas, target=1
        )
        best = max(best, float(p_x1.max()))
    return best


def _random_projector(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    u = haar_unitary(dim, rng)
    cols = u[:, :rank]
    return cols @ cols.conj().T


def helstrom_oracle(rho0: DensityOp, rho1: DensityOp, samples: int, seed: int) -> float:
    """Best success probability among random two-outcome projective
    measurements at distinguishing equiprobable ``rho0`` and ``rho1``.

    A lower bound on the optimal guessing probability; with enough samples
    in low dimension it concentrates near it.
    """
    if rho0.dim != rho1.dim:
        raise RangeError("states must have equal dimension")
    if samples < 1:
        raise RangeError(f"samples must be >= 1, got {samples}")
    dim = rho0.dim
    diff = rho0.mat - rho1.mat
    best = 0.5
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        rank = int(rng.integers(1, dim)) if dim > 2 else 1
        proj = _random_projector(dim, rank, rng)
        bias = 0.5 * abs(float(np.real(np.trace(proj @ diff))))
        best = max(best, 0.5 + bias)
    return best


def uhlmann_oracle(phi: StateVector, psi: StateVector, b_factors: Iterable[str],
                   samples: int, seed: int) -> float:
    """Best overlap |<phi|(I x V)|psi>| among random unitaries V on the
    ``b_factors`` subsystem.

    A lower bound on the reduced-state fidelity, approaching it with enough
    samples in low dimension.
    """
    if phi.layout != psi.layout:
        raise RangeError("states must share a layout")
    if samples < 1:
        raise RangeError(f"samples must be >= 1, got {samples}")
    b = phi.layout.select(b_factors)
    phi_mat = bipartition_matrix(phi, b)
    psi_mat = bipartition_matrix(psi, b)
    d_b = phi_mat.shape[1]
    rng = np.random.default_rng(seed)
    vs = np.stack([haar_unitary(d_b, rng) for _ in range(samples)])
    # <phi|(I x V)|psi> for each sample, evaluated through the states
    overlaps = np.einsum("ij,ik,njk->n", phi_mat.conj(), psi_mat, vs)
    return float(np.abs(overlaps).max())
