"""Round-based model of honest oblivious-transfer protocols.

A protocol is a fixed register layout plus a sequence of unitary rounds with
all measurements deferred.  Bob's data bits live in two dedicated dim-2
``BobInput`` registers named ``X0`` and ``X1``; every unitary Bob applies is
controlled on them (block-diagonal in their computational basis), so a single
round description serves honest runs with basis inputs and coherent runs with
superposed inputs alike.

Conventions:

* Round matrices act on the factors the actor currently holds, in layout
  order.  Alice holds the Message factors initially; a round with
  ``send=True`` flips the Message holder afterwards.
* Alice never touches Bob-owned or BobInput factors, which round sizing
  enforces by construction.
* ``alice_output[a]`` is a two-outcome measurement on Alice's end-of-protocol
  factors; outcome ``pos`` means "the learned bit is 1".
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import SpecError
from .qcore import (
    ALICE,
    BOB,
    BOB_INPUT,
    MESSAGE,
    TOL_EXACT,
    TOL_SPECTRAL,
    CMat,
    DensityOp,
    Factor,
    RegisterLayout,
    StateVector,
    TwoOutcomeMeasurement,
    as_cmat,
    embed_operator,
    hermitize,
    partial_trace,
    pure_density,
    trace_norm,
)

INPUT_NAMES = ("X0", "X1")


def held_factors(layout: RegisterLayout, actor: str, message_with_alice: bool) -> tuple[str, ...]:
    """Factor names the actor holds, in layout order."""
    if actor == ALICE:
        owners = (ALICE, MESSAGE) if message_with_alice else (ALICE,)
    elif actor == BOB:
        owners = (BOB, BOB_INPUT) if message_with_alice else (BOB, BOB_INPUT, MESSAGE)
    else:
        raise SpecError(f"unknown actor {actor!r}")
    return layout.owned_by(*owners)


def _check_unitary(mat: CMat, dim: int, what: str) -> None:
    mat = as_cmat(mat)
    if mat.shape != (dim, dim):
        raise SpecError(f"{what}: shape {mat.shape}, expected ({dim}, {dim})")
    if np.abs(mat.conj().T @ mat - np.eye(dim)).max() > TOL_EXACT:
        raise SpecError(f"{what}: not unitary within tolerance")


def _check_input_controlled(mat: CMat, layout: RegisterLayout,
                            held: tuple[str, ...]) -> None:
    """Verify a Bob unitary is block-diagonal over the X0 (x) X1 basis."""
    dims = tuple(layout.dims[layout.names.index(n)] for n in held)
    n = len(held)
    x_pos = [i for i, name in enumerate(held) if name in INPUT_NAMES]
    rest = [i for i in range(n) if i not in x_pos]
    t = as_cmat(mat).reshape(dims + dims)
    perm = rest + x_pos
    t = np.transpose(t, perm + [n + i for i in perm])
    d_rest = int(np.prod([dims[i] for i in rest] or [1]))
    d_x = int(np.prod([dims[i] for i in x_pos]))
    t = t.reshape(d_rest, d_x, d_rest, d_x).copy()
    for x in range(d_x):
        t[:, x, :, x] = 0
    if np.abs(t).max() > TOL_EXACT:
        raise SpecError("Bob round is not controlled on his input registers")


@dataclass(frozen=True, eq=False)
class Round:
    """One protocol round: an actor applies a unitary to the factors it
    holds; ``send`` flips the Message holder afterwards."""

    actor: str
    unitary: np.ndarray
    send: bool = False


@dataclass(frozen=True, eq=False)
class ProtocolSpec:
    """A complete honest protocol description.

    ``alice_prep[a]`` acts on Alice-owned plus Message factors before any
    round; ``rounds`` run in order; ``alice_output[a]`` measures Alice's
    end-of-protocol factors (``pos`` outcome = bit value 1).
    """

    name: str
    layout: RegisterLayout
    alice_prep: tuple[np.ndarray, np.ndarray]
    rounds: tuple[Round, ...]
    alice_output: tuple[TwoOutcomeMeasurement, TwoOutcomeMeasurement]

    def __post_init__(self):
        object.__setattr__(self, "rounds", tuple(self.rounds))
        object.__setattr__(self, "alice_prep", tuple(self.alice_prep))
        object.__setattr__(self, "alice_output", tuple(self.alice_output))
        lay = self.layout
        if not lay.owned_by(ALICE):
            raise SpecError("layout needs at least one Alice-owned factor")
        inputs = lay.owned_by(BOB_INPUT)
        if sorted(inputs) != sorted(INPUT_NAMES):
            raise SpecError(f"BobInput factors must be named {INPUT_NAMES}, got {inputs}")
        for name in INPUT_NAMES:
            if lay.subset_dim([name]) != 2:
                raise SpecError(f"input register {name} must have dim 2")
        if len(self.alice_prep) != 2 or len(self.alice_output) != 2:
            raise SpecError("alice_prep and alice_output need one entry per choice bit")
        d_prep = lay.subset_dim(held_factors(lay, ALICE, True))
        for a, prep in enumerate(self.alice_prep):
            _check_unitary(prep, d_prep, f"alice_prep[{a}]")
        msg_with_alice = True
        has_message = bool(lay.owned_by(MESSAGE))
        for i, rnd in enumerate(self.rounds):
            held = held_factors(lay, rnd.actor, msg_with_alice)
            d = lay.subset_dim(held)
            _check_unitary(rnd.unitary, d, f"round {i} ({rnd.actor})")
            if rnd.actor == BOB:
                _check_input_controlled(rnd.unitary, lay, held)
            if rnd.send:
                if not has_message:
                    raise SpecError(f"round {i} sends but the layout has no Message factor")
                holder_is_actor = msg_with_alice == (rnd.actor == ALICE)
                if not holder_is_actor:
                    raise SpecError(f"round {i}: {rnd.actor} sends a message it does not hold")
                msg_with_alice = not msg_with_alice
        object.__setattr__(self, "_msg_with_alice_at_end", msg_with_alice)
        d_out = lay.subset_dim(self.alice_end_factors)
        for a, meas in enumerate(self.alice_output):
            if meas.dim != d_out:
                raise SpecError(
                    f"alice_output[{a}] has dim {meas.dim}, Alice ends holding dim {d_out}"
                )

    @property
    def alice_end_factors(self) -> tuple[str, ...]:
        """Factors Alice holds once all rounds have run, in layout order."""
        return held_factors(self.layout, ALICE, self._msg_with_alice_at_end)


@dataclass(frozen=True, eq=False)
class FinalStates:
    """The eight deferred-measurement final states of a protocol, keyed by
    (a, x0, x1), plus the factors Alice holds at the end."""

    spec_name: str
    states: dict[tuple[int, int, int], StateVector]
    alice_factors: frozenset[str]


@dataclass(frozen=True, eq=False)
class ReducedFamily:
    """Alice's reduced final states, keyed by (a, x0, x1)."""

    rho: dict[tuple[int, int, int], DensityOp]


@dataclass(frozen=True)
class CompletenessReport:
    """Result of the completeness check.

    ``support_overlap[a]`` is the trace norm of the product of the two
    support projectors spanned by Alice's states with the learned bit 0
    vs 1; ``min_output_prob`` is the worst-case probability that Alice's
    output measurement reports the correct bit over the 8 honest runs.
    """

    passed: bool
    support_overlap: tuple[float, float]
    min_output_prob: float
    failures: tuple[str, ...]


def _basis_column(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def _execute(spec: ProtocolSpec, a: int, input_amps: dict[str, np.ndarray]) -> StateVector:
    lay = spec.layout
    pieces = []
    for f in lay.factors:
        if f.owner == BOB_INPUT:
            pieces.append(np.asarray(input_amps[f.name], dtype=complex))
        else:
            pieces.append(_basis_column(f.dim, 0))
    amps = reduce(np.kron, pieces)
    amps = embed_operator(spec.alice_prep[a], lay, held_factors(lay, ALICE, True)) @ amps
    msg_with_alice = True
    for rnd in spec.rounds:
        held = held_factors(lay, rnd.actor, msg_with_alice)
        amps = embed_operator(rnd.unitary, lay, held) @ amps
        if rnd.send:
            msg_with_alice = not msg_with_alice
    return StateVector(lay, amps)


def run_honest(spec: ProtocolSpec, a: int, x0: int, x1: int) -> StateVector:
    """The final pure state of an honest run with the given input bits."""
    for bit in (a, x0, x1):
        if bit not in (0, 1):
            raise SpecError(f"input bits must be 0 or 1, got {bit}")
    return _execute(spec, a, {"X0": _basis_column(2, x0), "X1": _basis_column(2, x1)})


def run_purified(spec: ProtocolSpec, a: int) -> StateVector:
    """The final pure state when both input registers start in the uniform
    superposition (Bob running all his honest strategies coherently)."""
    plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    return _execute(spec, a, {"X0": plus, "X1": plus})


def all_final_states(spec: ProtocolSpec) -> FinalStates:
    """All eight honest final states of a protocol."""
    states = {
        (a, x0, x1): run_honest(spec, a, x0, x1)
        for a in (0, 1)
        for x0 in (0, 1)
        for x1 in (0, 1)
    }
    return FinalStates(spec.name, states, frozenset(spec.alice_end_factors))


def reduce_alice(fs: FinalStates) -> ReducedFamily:
    """Alice's reduced state for each of the eight honest runs."""
    rho = {}
    for key, sv in fs.states.items():
        rho[key] = partial_trace(pure_density(sv), sv.layout, fs.alice_factors)
    return ReducedFamily(rho)


def _support_projector(ops: list[DensityOp]) -> np.ndarray:
    cols = []
    for op in ops:
        w, v = np.linalg.eigh(hermitize(op.mat))
        cols.append(v[:, w > TOL_SPECTRAL])
    stacked = np.hstack(cols)
    q, s, _ = np.linalg.svd(stacked, full_matrices=False)
    basis = q[:, s > TOL_SPECTRAL]
    return basis @ basis.conj().T


def validate_completeness(spec: ProtocolSpec) -> CompletenessReport:
    """Check that honest Alice learns her chosen bit with certainty.

    Passes iff, for each choice bit, the supports of Alice's reduced states
    with learned-bit 0 and learned-bit 1 are orthogonal, and the declared
    output measurement reports the correct bit on every honest run.
    """
    fs = all_final_states(spec)
    rf = reduce_alice(fs)
    failures: list[str] = []
    overlaps = []
    for a in (0, 1):
        spans = {}
        for v in (0, 1):
            members = [
                rf.rho[(a, x0, x1)]
                for x0 in (0, 1)
                for x1 in (0, 1)
                if (x0 if a == 0 else x1) == v
            ]
            spans[v] = _support_projector(members)
        overlap = trace_norm(spans[0] @ spans[1])
        overlaps.append(overlap)
        if overlap > TOL_SPECTRAL:
            failures.append(f"a={a}: learned-bit supports overlap ({overlap:.3e})")
    min_prob = 1.0
    end = spec.alice_end_factors
    for (a, x0, x1), sv in fs.states.items():
        xa = x0 if a == 0 else x1
        meas = spec.alice_output[a]
        proj = meas.pos if xa == 1 else meas.neg
        p = float(np.real(np.vdot(sv.amps, embed_operator(proj, sv.layout, end) @ sv.amps)))
        min_prob = min(min_prob, p)
        if p < 1.0 - TOL_SPECTRAL:
            failures.append(f"output measurement misses x_{a}={xa} at (a,x0,x1)=({a},{x0},{x1}): p={p:.6f}")
    return CompletenessReport(
        passed=not failures,
        support_overlap=(overlaps[0], overlaps[1]),
        min_output_prob=min_prob,
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# JSON wire format.  Complex entries are [re, im] pairs; matrices are
# row-major nested arrays.
# ---------------------------------------------------------------------------

def _encode_matrix(mat: CMat) -> list:
    mat = as_cmat(mat)
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def _decode_matrix(rows) -> np.ndarray:
    try:
        return np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in rows],
            dtype=complex,
        )
    except (TypeError, IndexError, ValueError) as exc:
        raise ValueError(f"malformed matrix entry: {exc}") from exc


def spec_to_dict(spec: ProtocolSpec) -> dict:
    """Serialize a protocol to the JSON wire structure."""
    return {
        "name": spec.name,
        "factors": [
            {"name": f.name, "dim": f.dim, "owner": f.owner} for f in spec.layout.factors
        ],
        "alice_prep": [_encode_matrix(u) for u in spec.alice_prep],
        "rounds": [
            {"actor": r.actor, "matrix": _encode_matrix(r.unitary), "send": bool(r.send)}
            for r in spec.rounds
        ],
        "alice_output": [
            [_encode_matrix(m.pos), _encode_matrix(m.neg)] for m in spec.alice_output
        ],
    }


def spec_from_dict(data: dict) -> ProtocolSpec:
    """Build a protocol from the JSON wire structure.

    Raises ``ValueError`` on malformed structure and ``SpecError`` (via the
    constructor and, for layout problems, ``LayoutError``) when the decoded
    protocol violates an invariant.
    """
    try:
        factors = tuple(
            Factor(str(f["name"]), int(f["dim"]), str(f["owner"])) for f in data["factors"]
        )
        prep = tuple(_decode_matrix(m) for m in data["alice_prep"])
        rounds = tuple(
            Round(str(r["actor"]), _decode_matrix(r["matrix"]), bool(r["send"]))
            for r in data["rounds"]
        )
        output = tuple(
            TwoOutcomeMeasurement(_decode_matrix(pair[0]), _decode_matrix(pair[1]))
            for pair in data["alice_output"]
        )
        name = str(data["name"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed protocol structure: {exc}") from exc
    if len(prep) != 2 or len(output) != 2:
        raise ValueError("alice_prep and alice_output must each have two entries")
    return ProtocolSpec(name, RegisterLayout(factors), prep, rounds, output)
