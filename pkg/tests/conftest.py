import numpy as np
import pytest

from wotsim.catalog import _qutrit_output, build_cks
from wotsim.protocol import ProtocolSpec, Round
from wotsim.qcore import ALICE, BOB, BOB_INPUT, MESSAGE, Factor, RegisterLayout


@pytest.fixture
def rng():
    return np.random.default_rng(2013)


def build_cks_with_bob_register() -> ProtocolSpec:
    """The qutrit protocol with a Bob-held qubit recording x0 xor x1.

    Alice's view is unchanged (the qubit stays in a basis state), so all
    bounds match the plain qutrit protocol, but Bob ends the protocol
    holding a register entangled with his inputs in the purified run.
    This exercises the nontrivial Uhlmann-block machinery.
    """
    layout = RegisterLayout((
        Factor("A", 3, ALICE),
        Factor("M", 3, MESSAGE),
        Factor("B", 2, BOB),
        Factor("X0", 2, BOB_INPUT),
        Factor("X1", 2, BOB_INPUT),
    ))
    base = build_cks()
    # |m, b, x0, x1> -> phase(m, x0, x1) |m, b + x0 + x1 mod 2, x0, x1>
    dim = 24
    u = np.zeros((dim, dim), dtype=complex)
    phases = {0: lambda x0, x1: (-1.0) ** x0, 1: lambda x0, x1: (-1.0) ** x1,
              2: lambda x0, x1: 1.0}
    for m in range(3):
        for b in (0, 1):
            for x0 in (0, 1):
                for x1 in (0, 1):
                    col = ((m * 2 + b) * 2 + x0) * 2 + x1
                    row = ((m * 2 + (b ^ x0 ^ x1)) * 2 + x0) * 2 + x1
                    u[row, col] = phases[m](x0, x1)
    return ProtocolSpec(
        name="cks-with-bob-register",
        layout=layout,
        alice_prep=base.alice_prep,
        rounds=(Round(ALICE, np.eye(9, dtype=complex), send=True),
                Round(BOB, u, send=True)),
        alice_output=(_qutrit_output(0), _qutrit_output(1)),
    )


def build_incomplete_protocol() -> ProtocolSpec:
    """A structurally valid protocol that transfers no information: Bob's
    round is the identity for every input, so completeness fails."""
    base = build_cks()
    return ProtocolSpec(
        name="no-information",
        layout=base.layout,
        alice_prep=base.alice_prep,
        rounds=(base.rounds[0], Round(BOB, np.eye(12, dtype=complex), send=True)),
        alice_output=base.alice_output,
    )
