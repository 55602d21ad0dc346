"""Concrete protocol constructors and the coin-flip combination arithmetic.

Two extreme protocols are provided: ``build_cks`` (the qutrit protocol in
which Alice cannot cheat at all but Bob reaches 3/4) and ``build_trivial``
(Bob announces both bits; he cannot cheat, Alice cheats perfectly).  Mixing
them via an ideal unbalanced weak coin flip interpolates between the two
endpoints; ``combined_bounds`` evaluates the resulting cheating bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RangeError
from .protocol import ProtocolSpec, Round, run_honest
from .qcore import (
    ALICE,
    BOB,
    BOB_INPUT,
    MESSAGE,
    Factor,
    RegisterLayout,
    TwoOutcomeMeasurement,
    embed_operator,
    haar_unitary,
    kron,
)

# Cheating probabilities of the two sub-protocols: (alice, bob).
TRIVIAL_POINT = (1.0, 0.5)
QUTRIT_POINT = (0.5, 0.75)


@dataclass(frozen=True)
class WCFPrimitive:
    """An ideal unbalanced weak coin flip.

    Honest outcome 0 occurs with probability ``lam`` (a dyadic rational,
    an integer over 2**dyadic_bits); a cheater can force outcome 0 with
    probability at most ``lam + epsilon`` and outcome 1 with at most
    ``1 - lam + epsilon``.
    """

    lam: float
    epsilon: float
    dyadic_bits: int = 20

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise RangeError(f"lam must be in [0, 1], got {self.lam}")
        if self.epsilon < 0.0:
            raise RangeError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.dyadic_bits < 1:
            raise RangeError(f"dyadic_bits must be >= 1, got {self.dyadic_bits}")
        scaled = self.lam * 2.0 ** self.dyadic_bits
        if abs(scaled - round(scaled)) > 1e-9:
            raise RangeError(
                f"lam={self.lam} is not an integer over 2**{self.dyadic_bits}"
            )


@dataclass(frozen=True)
class TradeoffPoint:
    """Cheating bounds of the combined protocol at one (lam, epsilon)."""

    lam: float
    epsilon: float
    a_bound: float
    b_bound: float
    combined: float


@dataclass(frozen=True)
class HonestRunStats:
    """Empirical summary of honest Monte Carlo runs of the combined protocol."""

    lam: float
    trials: int
    n_trivial: int
    n_qutrit: int
    completeness_rate: float


def _qutrit_prep(a: int) -> np.ndarray:
    """Unitary on the two qutrits sending |00> to (|aa> + |22>)/sqrt(2)."""
    u = np.eye(9, dtype=complex)
    s = 1.0 / math.sqrt(2.0)
    aa = 4 * a  # |00> -> 0, |11> -> 4
    if a == 0:
        # rotate in span{|00>, |22>}
        u[0, 0], u[8, 0] = s, s
        u[0, 8], u[8, 8] = -s, s
    else:
        # |00> -> (|11>+|22>)/sqrt2, |11> -> |00>, |22> -> (-|11>+|22>)/sqrt2
        u[:, 0] = 0.0
        u[aa, 0], u[8, 0] = s, s
        u[:, aa] = 0.0
        u[0, aa] = 1.0
        u[:, 8] = 0.0
        u[aa, 8], u[8, 8] = -s, s
    return u


def _qutrit_output(a: int) -> TwoOutcomeMeasurement:
    """Alice's final measurement: project onto (|aa> - |22>)/sqrt(2) for
    outcome 1, everything orthogonal for outcome 0."""
    minus = np.zeros(9, dtype=complex)
    minus[4 * a] = 1.0 / math.sqrt(2.0)
    minus[8] = -1.0 / math.sqrt(2.0)
    pos = np.outer(minus, minus.conj())
    return TwoOutcomeMeasurement(pos, np.eye(9) - pos)


def build_cks() -> ProtocolSpec:
    """The qutrit protocol: Alice sends half of (|aa>+|22>)/sqrt(2), Bob
    flips signs according to his bits, Alice measures.

    Registry name ``"cks"``.  Alice cannot cheat (bound 1/2); Bob's bound
    is 3/4.
    """
    layout = RegisterLayout((
        Factor("A", 3, ALICE),
        Factor("M", 3, MESSAGE),
        Factor("X0", 2, BOB_INPUT),
        Factor("X1", 2, BOB_INPUT),
    ))
    # Bob's phase on the message qutrit, controlled on (x0, x1):
    # |0> -> (-1)^x0 |0>, |1> -> (-1)^x1 |1>, |2> -> |2>.
    phases = np.ones((3, 2, 2))
    phases[0, 1, :] = -1.0
    phases[1, :, 1] = -1.0
    bob_unitary = np.diag(phases.reshape(-1)).astype(complex)
    rounds = (
        Round(ALICE, np.eye(9, dtype=complex), send=True),
        Round(BOB, bob_unitary, send=True),
    )
    return ProtocolSpec(
        name="cks",
        layout=layout,
        alice_prep=(_qutrit_prep(0), _qutrit_prep(1)),
        rounds=rounds,
        alice_output=(_qutrit_output(0), _qutrit_output(1)),
    )


def build_trivial() -> ProtocolSpec:
    """The classical protocol in which Bob announces both bits.

    Registry name ``"trivial"``.  Bob cannot cheat (bound 1/2); Alice
    cheats perfectly.
    """
    layout = RegisterLayout((
        Factor("A", 2, ALICE),
        Factor("M", 4, MESSAGE),
        Factor("X0", 2, BOB_INPUT),
        Factor("X1", 2, BOB_INPUT),
    ))
    # Bob writes (x0, x1) into the message: |m> -> |m + 2*x0 + x1 mod 4>.
    bob = np.zeros((16, 16), dtype=complex)
    for m in range(4):
        for x0 in (0, 1):
            for x1 in (0, 1):
                col = (m * 2 + x0) * 2 + x1
                row = (((m + 2 * x0 + x1) % 4) * 2 + x0) * 2 + x1
                bob[row, col] = 1.0
    outputs = []
    for a in (0, 1):
        ones = [m for m in range(4) if (m >> (1 - a)) & 1]
        pos_m = np.zeros((4, 4), dtype=complex)
        for m in ones:
            pos_m[m, m] = 1.0
        pos = kron(np.eye(2), pos_m)
        outputs.append(TwoOutcomeMeasurement(pos, np.eye(8) - pos))
    rounds = (
        Round(ALICE, np.eye(8, dtype=complex), send=True),
        Round(BOB, bob, send=True),
    )
    return ProtocolSpec(
        name="trivial",
        layout=layout,
        alice_prep=(np.eye(8, dtype=complex), np.eye(8, dtype=complex)),
        rounds=rounds,
        alice_output=(outputs[0], outputs[1]),
    )


def random_complete_protocol(seed: int) -> ProtocolSpec:
    """The qutrit protocol dressed with seeded local rotations.

    A rotation on Alice's qutrit is folded into her preparation and an
    input-independent rotation on the message qutrit into Bob's round;
    the output measurements are conjugated to match, so completeness is
    preserved by construction and (delta, f) are unchanged.
    """
    base = build_cks()
    rng = np.random.default_rng(seed)
    r_alice = haar_unitary(3, rng)
    r_msg = haar_unitary(3, rng)
    prep = tuple(kron(r_alice, np.eye(3)) @ u for u in base.alice_prep)
    bob_round = base.rounds[1]
    bob_unitary = kron(r_msg, np.eye(4)) @ bob_round.unitary
    g = kron(r_alice, r_msg)
    outputs = tuple(
        TwoOutcomeMeasurement(g @ m.pos @ g.conj().T, g @ m.neg @ g.conj().T)
        for m in base.alice_output
    )
    return ProtocolSpec(
        name=f"cks-rotated-{seed}",
        layout=base.layout,
        alice_prep=prep,
        rounds=(base.rounds[0], Round(BOB, bob_unitary, send=True)),
        alice_output=outputs,
    )


def dyadic_round(lam: float, bits: int) -> float:
    """Round to the nearest integer over 2**bits; ties round down."""
    if not 0.0 <= lam <= 1.0:
        raise RangeError(f"lam must be in [0, 1], got {lam}")
    if bits < 1:
        raise RangeError(f"bits must be >= 1, got {bits}")
    scale = 2.0 ** bits
    k = math.ceil(lam * scale - 0.5)
    k = min(max(k, 0), int(scale))
    return k / scale


def combined_bounds(wcf: WCFPrimitive) -> TradeoffPoint:
    """Cheating bounds of the coin-flip combination of the two extremes.

    A cheater biases the coin toward the sub-protocol favoring them (at most
    lam + epsilon toward the trivial branch, 1 - lam + epsilon toward the
    qutrit branch) and then plays that sub-protocol's optimal cheat.  The
    linear upper-bound arithmetic is kept exact so every point sits on the
    line 2 b + a = 2 + epsilon; for epsilon large enough to push a branch
    weight past 1 the bounds become vacuous (> 1) rather than clamped,
    since clamping would pull endpoint rows off the line.
    """
    force_trivial = wcf.lam + wcf.epsilon
    a_bound = force_trivial * TRIVIAL_POINT[0] + (1.0 - force_trivial) * QUTRIT_POINT[0]
    force_qutrit = 1.0 - wcf.lam + wcf.epsilon
    b_bound = force_qutrit * QUTRIT_POINT[1] + (1.0 - force_qutrit) * TRIVIAL_POINT[1]
    return TradeoffPoint(
        lam=wcf.lam,
        epsilon=wcf.epsilon,
        a_bound=a_bound,
        b_bound=b_bound,
        combined=2.0 * b_bound + a_bound,
    )


def _outcome_one_probs(spec: ProtocolSpec) -> dict[tuple[int, int, int], float]:
    """Probability of the 'bit is 1' outcome of alice_output[a] for each
    honest run."""
    end = spec.alice_end_factors
    probs = {}
    for a in (0, 1):
        pos_full = embed_operator(spec.alice_output[a].pos, spec.layout, end)
        for x0 in (0, 1):
            for x1 in (0, 1):
                sv = run_honest(spec, a, x0, x1)
                p = float(np.real(np.vdot(sv.amps, pos_full @ sv.amps)))
                probs[(a, x0, x1)] = min(max(p, 0.0), 1.0)
    return probs


def simulate_combined(wcf: WCFPrimitive, trials: int, seed: int) -> HonestRunStats:
    """Monte Carlo honest execution of the combined protocol.

    Each trial samples the coin (0 with probability lam), runs the chosen
    sub-protocol honestly with uniform inputs, and records whether Alice's
    measured bit matches the data bit she chose.  Trials draw from
    counter-derived RNG streams, so results do not depend on execution
    order.
    """
    if trials < 1:
        raise RangeError(f"trials must be >= 1, got {trials}")
    probs = {
        0: _outcome_one_probs(build_trivial()),
        1: _outcome_one_probs(build_cks()),
    }
    n_by_coin = [0, 0]
    n_complete = 0
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        u = rng.random(5)
        c = 0 if u[0] < wcf.lam else 1
        a, x0, x1 = (int(u[i] < 0.5) for i in (1, 2, 3))
        learned = int(u[4] < probs[c][(a, x0, x1)])
        n_by_coin[c] += 1
        n_complete += int(learned == (x0 if a == 0 else x1))
    return HonestRunStats(
        lam=wcf.lam,
        trials=trials,
        n_trivial=n_by_coin[0],
        n_qutrit=n_by_coin[1],
        completeness_rate=n_complete / trials,
    )
