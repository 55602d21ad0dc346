"""The two cheating strategies and the resulting security bounds.

Cheating Alice runs honestly, learns her chosen bit, then applies the optimal
(Helstrom) measurement to her reduced state to guess the other bit.  Cheating
Bob runs his honest strategies in superposition over both input registers,
applies a controlled unitary built from Uhlmann unitaries, and measures one
input register in the +/- basis to estimate Alice's choice bit.

Both bounds are functions of the eight honest reduced states: summing
1 - F <= ||rho - xi||_1 / 2 over the four relevant state pairs shows the two
bounds cannot both be small, which is the tradeoff this package reproduces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CompletenessError, RangeError
from .protocol import (
    INPUT_NAMES,
    FinalStates,
    ProtocolSpec,
    ReducedFamily,
    all_final_states,
    reduce_alice,
    run_purified,
    validate_completeness,
)
from .qcore import (
    TOL_SPECTRAL,
    CMat,
    StateVector,
    embed_operator,
    fidelity,
    helstrom,
    trace_norm,
    uhlmann_unitary,
)

PLUS_PROJ = np.full((2, 2), 0.5, dtype=complex)


@dataclass(frozen=True)
class CheatReport:
    """Per-protocol cheating summary.

    ``delta`` and ``f`` are the trace-norm and fidelity aggregates of the
    four relevant reduced-state pairs; ``alice_bound = 1/2 + delta/8`` and
    ``bob_bound = 1/2 + f/16`` are the guaranteed cheating probabilities;
    ``bob_sim_s0``/``bob_sim_s1`` are the simulated purified-attack success
    rates; ``theorem1_lhs = 2*bob_bound + alice_bound`` is always >= 2.
    """

    spec_name: str
    delta: float
    f: float
    alice_bound: float
    bob_bound: float
    bob_sim_s0: float
    bob_sim_s1: float
    theorem1_lhs: float


def _pairs(rf: ReducedFamily):
    """The four reduced-state pairs that differ only in the bit Alice did
    not choose: (a=0, vary x1) for each x0, then (a=1, vary x0) for each x1."""
    for x0 in (0, 1):
        yield rf.rho[(0, x0, 0)], rf.rho[(0, x0, 1)]
    for x1 in (0, 1):
        yield rf.rho[(1, 0, x1)], rf.rho[(1, 1, x1)]


def delta_quantity(rf: ReducedFamily) -> float:
    """Half the summed trace distances over the four pairs, in [0, 4]."""
    return 0.5 * sum(trace_norm(r.mat - s.mat) for r, s in _pairs(rf))


def f_quantity(rf: ReducedFamily) -> float:
    """The summed fidelities over the four pairs, in [0, 4]."""
    return sum(fidelity(r, s) for r, s in _pairs(rf))


def alice_bound(rf: ReducedFamily) -> float:
    """Alice's guaranteed cheating probability, 1/2 + delta/8."""
    return 0.5 + sum(trace_norm(r.mat - s.mat) for r, s in _pairs(rf)) / 16.0


def bob_bound(rf: ReducedFamily) -> float:
    """Bob's guaranteed cheating probability, 1/2 + f/16."""
    return 0.5 + f_quantity(rf) / 16.0


def alice_helstrom_attack(rf: ReducedFamily) -> float:
    """Simulate Alice's attack through explicit Helstrom measurements.

    For each choice bit she distinguishes the two states compatible with
    what she learned; the overall success rate (uniform inputs, uniform
    choice of which branch to run) reproduces :func:`alice_bound`.
    """
    successes = [helstrom(r, s)[1] for r, s in _pairs(rf)]
    return float(np.mean(successes))


def _strip_inputs(sv: StateVector, x0: int, x1: int) -> StateVector:
    """Drop the input registers from an honest final state.

    Honest runs keep the input registers in their initial basis states, so
    the full state factorizes and slicing at (x0, x1) is exact.
    """
    lay = sv.layout
    tensor = sv.amps.reshape(lay.dims)
    names = list(lay.names)
    for name, value in (("X0", x0), ("X1", x1)):
        axis = names.index(name)
        tensor = np.take(tensor, value, axis=axis)
        names.pop(axis)
    amps = tensor.reshape(-1)
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > TOL_SPECTRAL:
        raise CompletenessError(
            "final state is entangled with the input registers; not an honest run"
        )
    return StateVector(lay.without(INPUT_NAMES), amps / norm)


def _uhlmann_block(fs: FinalStates, phi_key, psi_key) -> CMat:
    """The unitary on Bob's non-input factors aligning one honest final
    state with another, achieving the reduced-state fidelity as overlap.

    When Bob holds nothing beyond the input registers the block degenerates
    to a 1x1 phase.
    """
    lay = next(iter(fs.states.values())).layout
    b_rest = tuple(
        n for n in lay.names if n not in fs.alice_factors and n not in INPUT_NAMES
    )
    phi = _strip_inputs(fs.states[phi_key], phi_key[1], phi_key[2])
    psi = _strip_inputs(fs.states[psi_key], psi_key[1], psi_key[2])
    if b_rest:
        block, _ = uhlmann_unitary(phi, psi, b_rest)
        return block
    inner = np.vdot(phi.amps, psi.amps)
    phase = 1.0 if abs(inner) < 1e-15 else np.conj(inner) / abs(inner)
    return np.array([[phase]], dtype=complex)


def controlled_realignment(spec: ProtocolSpec, fs: FinalStates, s: int) -> CMat:
    """The block unitary of the purified attack, on the full layout.

    Block-diagonal over the computational basis of the input registers:
    identity everywhere except the sectors where register ``X_s`` reads 1,
    which carry the Uhlmann realignment toward the matching 0 sector.
    Identity on Alice's factors throughout.
    """
    lay = spec.layout
    b_rest = tuple(
        n for n in lay.names if n not in fs.alice_factors and n not in INPUT_NAMES
    )
    # Nontrivial blocks: for s=0 realign x0=1 branches toward x0=0 for each
    # x1 (extracted from the a=1 states); symmetrically for s=1.
    blocks: dict[tuple[int, int], CMat] = {}
    for x in (0, 1):
        if s == 0:
            blocks[(1, x)] = _uhlmann_block(fs, (1, 0, x), (1, 1, x))
        else:
            blocks[(x, 1)] = _uhlmann_block(fs, (0, x, 0), (0, x, 1))

    cont = np.zeros((lay.dim, lay.dim), dtype=complex)
    for x0 in (0, 1):
        for x1 in (0, 1):
            block = blocks.get((x0, x1))
            term = np.eye(lay.dim, dtype=complex)
            if block is not None:
                if b_rest:
                    term = embed_operator(block, lay, b_rest)
                else:
                    term = complex(block[0, 0]) * term
            for name, value in (("X0", x0), ("X1", x1)):
                proj = np.zeros((2, 2), dtype=complex)
                proj[value, value] = 1.0
                term = term @ embed_operator(proj, lay, [name])
            cont += term
    return cont


def bob_purified_attack(spec: ProtocolSpec, s: int) -> float:
    """Simulate Bob's purified attack for a fixed register choice ``s``.

    Bob runs honestly with both input registers in uniform superposition,
    applies a unitary controlled on them (identity except where the attack
    realigns the branches via Uhlmann unitaries), measures register ``X_s``
    in the +/- basis, and guesses ``a = s`` on '-' and ``a = 1-s`` on '+'.
    Returns his success probability over a uniformly random choice bit.

    Requires a complete protocol: the analysis of the ``a = s`` branch rests
    on Alice's states for different values of her learned bit being
    orthogonal.
    """
    if s not in (0, 1):
        raise RangeError(f"register choice must be 0 or 1, got {s}")
    report = validate_completeness(spec)
    if not report.passed:
        raise CompletenessError(
            "purified attack needs a complete protocol: " + "; ".join(report.failures)
        )
    fs = all_final_states(spec)
    lay = spec.layout
    cont = controlled_realignment(spec, fs, s)
    plus_full = embed_operator(PLUS_PROJ, lay, [INPUT_NAMES[s]])
    success = 0.0
    for a in (0, 1):
        xi = run_purified(spec, a)
        attacked = cont @ xi.amps
        p_plus = float(np.real(np.vdot(attacked, plus_full @ attacked)))
        # '-' means guess a=s, '+' means guess a=1-s
        success += 0.5 * (p_plus if a != s else 1.0 - p_plus)
    return success


def cheat_report(spec: ProtocolSpec) -> CheatReport:
    """Full cheating analysis of a protocol.

    Computes the aggregate quantities, both bounds, and the two simulated
    purified attacks, and checks that the simulated attack averaged over
    the register choice reproduces Bob's bound.
    """
    fs = all_final_states(spec)
    rf = reduce_alice(fs)
    delta = delta_quantity(rf)
    f = f_quantity(rf)
    a_bound = 0.5 + delta / 8.0
    b_bound = 0.5 + f / 16.0
    sim0 = bob_purified_attack(spec, 0)
    sim1 = bob_purified_attack(spec, 1)
    if abs((sim0 + sim1) / 2.0 - b_bound) > TOL_SPECTRAL:
        raise AssertionError(
            f"simulated purified attack {(sim0 + sim1) / 2} disagrees with bound {b_bound}"
        )
    return CheatReport(
        spec_name=spec.name,
        delta=delta,
        f=f,
        alice_bound=a_bound,
        bob_bound=b_bound,
        bob_sim_s0=sim0,
        bob_sim_s1=sim1,
        theorem1_lhs=2.0 * b_bound + a_bound,
    )
