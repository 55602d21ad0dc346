"""Seeded self-check suites behind the ``verify`` command.

Each suite re-derives a family of invariants from scratch with a seeded RNG
and reports one named check per assertion.  The suites avoid anything known
to be unattainable; they are meant to be a fast, deterministic green wall.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import attacks, catalog, oracle, protocol, tradeoff
from .qcore import (
    DensityOp,
    Factor,
    RegisterLayout,
    StateVector,
    TOL_SPECTRAL,
    fidelity,
    guess_prob,
    haar_unitary,
    helstrom,
    partial_trace,
    pure_density,
    random_density,
    trace_norm,
    uhlmann_unitary,
)


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def _rng(seed: int, lane: int) -> np.random.Generator:
    return np.random.default_rng([seed, lane])


def _random_pair(rng, dim):
    return random_density(dim, rng), random_density(dim, rng)


def suite_fuchs_van_de_graaf(seed: int) -> list[Check]:
    rng = _rng(seed, 1)
    checks = []
    worst_lo, worst_hi = 0.0, 0.0
    for _ in range(500):
        dim = int(rng.integers(2, 5))
        rho, xi = _random_pair(rng, dim)
        tn = trace_norm(rho.mat - xi.mat)
        f = fidelity(rho, xi)
        worst_lo = max(worst_lo, (1.0 - tn / 2.0) - f)
        worst_hi = max(worst_hi, f - np.sqrt(max(0.0, 1.0 - tn**2 / 4.0)))
    checks.append(Check("lower_inequality", worst_lo <= TOL_SPECTRAL, f"excess {worst_lo:.2e}"))
    checks.append(Check("upper_inequality", worst_hi <= TOL_SPECTRAL, f"excess {worst_hi:.2e}"))
    return checks


def suite_trace_norm(seed: int) -> list[Check]:
    rng = _rng(seed, 2)
    checks = []
    ok_nonneg = ok_triangle = ok_unitary = True
    for _ in range(200):
        dim = int(rng.integers(2, 5))
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        b = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        ok_nonneg &= trace_norm(a) >= 0.0
        ok_triangle &= trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + TOL_SPECTRAL
        u, v = haar_unitary(dim, rng), haar_unitary(dim, rng)
        ok_unitary &= abs(trace_norm(u @ a @ v) - trace_norm(a)) <= TOL_SPECTRAL
    checks.append(Check("nonnegative", ok_nonneg))
    checks.append(Check("triangle", ok_triangle))
    checks.append(Check("unitarily_invariant", ok_unitary))
    return checks


def suite_helstrom(seed: int) -> list[Check]:
    rng = _rng(seed, 3)
    worst = 0.0
    for dim in (2, 3, 4):
        for _ in range(100):
            rho, xi = _random_pair(rng, dim)
            _, success = helstrom(rho, xi)
            worst = max(worst, abs(success - guess_prob(rho, xi)))
    return [Check("matches_guess_prob", worst <= TOL_SPECTRAL, f"worst gap {worst:.2e}")]


def suite_fidelity_and_uhlmann(seed: int) -> list[Check]:
    rng = _rng(seed, 4)
    checks = []
    worst = 0.0
    for _ in range(200):
        u = haar_unitary(3, rng)
        phi, psi = u[:, 0], haar_unitary(3, rng)[:, 0]
        f = fidelity(DensityOp(np.outer(phi, phi.conj())), DensityOp(np.outer(psi, psi.conj())))
        worst = max(worst, abs(f - abs(np.vdot(phi, psi))))
    checks.append(Check("pure_fidelity_inner_product", worst <= TOL_SPECTRAL, f"{worst:.2e}"))

    lay = RegisterLayout((Factor("S", 2, "Alice"), Factor("E", 3, "Bob")))
    worst_unitary, worst_overlap = 0.0, 0.0
    for _ in range(100):
        amps = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        phi_sv = StateVector(lay, amps / np.linalg.norm(amps))
        amps = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        psi_sv = StateVector(lay, amps / np.linalg.norm(amps))
        u, overlap = uhlmann_unitary(phi_sv, psi_sv, ["E"])
        worst_unitary = max(worst_unitary, np.abs(u.conj().T @ u - np.eye(3)).max())
        f = fidelity(
            partial_trace(pure_density(phi_sv), lay, ["S"]),
            partial_trace(pure_density(psi_sv), lay, ["S"]),
        )
        worst_overlap = max(worst_overlap, abs(overlap - f))
    checks.append(Check("uhlmann_unitary_is_unitary", worst_unitary <= 1e-9, f"{worst_unitary:.2e}"))
    checks.append(Check("uhlmann_attains_fidelity", worst_overlap <= TOL_SPECTRAL, f"{worst_overlap:.2e}"))
    return checks


def suite_partial_trace(seed: int) -> list[Check]:
    rng = _rng(seed, 5)
    lay = RegisterLayout((Factor("L", 2, "Alice"), Factor("R", 3, "Bob")))
    ok_trace = ok_psd = True
    for _ in range(100):
        rho = random_density(6, rng)
        red = partial_trace(rho, lay, ["L"])
        ok_trace &= abs(np.trace(red.mat) - 1.0) <= TOL_SPECTRAL
        ok_psd &= np.linalg.eigvalsh(red.mat).min() >= -TOL_SPECTRAL
    bell = StateVector(
        RegisterLayout((Factor("a", 2, "Alice"), Factor("b", 2, "Bob"))),
        np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
    )
    red = partial_trace(pure_density(bell), bell.layout, ["a"])
    ok_bell = np.abs(red.mat - np.eye(2) / 2).max() <= 1e-9
    return [
        Check("preserves_trace", ok_trace),
        Check("preserves_psd", ok_psd),
        Check("bell_reduces_to_maximally_mixed", ok_bell),
    ]


def suite_protocol_honest(seed: int) -> list[Check]:
    checks = []
    for spec in (catalog.build_cks(), catalog.build_trivial()):
        fs = protocol.all_final_states(spec)
        norm_ok = all(
            abs(np.linalg.norm(sv.amps) - 1.0) <= 1e-9 for sv in fs.states.values()
        )
        checks.append(Check(f"{spec.name}_norms", norm_ok))
        report = protocol.validate_completeness(spec)
        checks.append(Check(f"{spec.name}_complete", report.passed, "; ".join(report.failures)))
        rf = protocol.reduce_alice(fs)
        worst = 0.0
        for a in (0, 1):
            for other in (0, 1):
                # vary the learned bit, holding the other input fixed
                if a == 0:
                    states = rf.rho[(0, 0, other)], rf.rho[(0, 1, other)]
                else:
                    states = rf.rho[(1, other, 0)], rf.rho[(1, other, 1)]
                worst = max(worst, abs(guess_prob(*states) - 1.0))
        checks.append(Check(f"{spec.name}_learned_bit_distinguishable", worst <= TOL_SPECTRAL,
                            f"{worst:.2e}"))
    return checks


def _random_family(rng, dim) -> protocol.ReducedFamily:
    rho = {
        (a, x0, x1): random_density(dim, rng)
        for a in (0, 1) for x0 in (0, 1) for x1 in (0, 1)
    }
    return protocol.ReducedFamily(rho)


def suite_inequality_chain(seed: int, families: int = 500, seeds: int = 100) -> list[Check]:
    rng = _rng(seed, 6)
    worst_fd, worst_t1 = 4.0, 2.0
    for _ in range(families):
        rf = _random_family(rng, int(rng.integers(2, 5)))
        f = attacks.f_quantity(rf)
        d = attacks.delta_quantity(rf)
        worst_fd = min(worst_fd, f + d)
        worst_t1 = min(worst_t1, 2.0 * attacks.bob_bound(rf) + attacks.alice_bound(rf))
    checks = [
        Check("f_plus_delta_at_least_4", worst_fd >= 4.0 - TOL_SPECTRAL, f"min {worst_fd:.8f}"),
        Check("tradeoff_at_least_2", worst_t1 >= 2.0 - TOL_SPECTRAL, f"min {worst_t1:.8f}"),
    ]
    worst_lhs, worst_df = 2.0, 0.0
    base_seeds = rng.integers(0, 2**31 - 1, size=seeds)
    for s in base_seeds:
        rep = attacks.cheat_report(catalog.random_complete_protocol(int(s)))
        worst_lhs = min(worst_lhs, rep.theorem1_lhs)
        worst_df = max(worst_df, abs(rep.delta), abs(rep.f - 4.0))
    checks.append(Check("random_protocols_on_curve", worst_lhs >= 2.0 - TOL_SPECTRAL,
                        f"min {worst_lhs:.8f}"))
    checks.append(Check("local_rotations_preserve_quantities", worst_df <= TOL_SPECTRAL,
                        f"max dev {worst_df:.2e}"))
    return checks


def suite_purified_attack(seed: int) -> list[Check]:
    rng = _rng(seed, 7)
    specs = [catalog.build_cks(), catalog.build_trivial()]
    specs += [catalog.random_complete_protocol(int(s)) for s in rng.integers(0, 2**31 - 1, 3)]
    worst_closed, worst_even, worst_alice = 0.0, 0.0, 0.0
    for spec in specs:
        fs = protocol.all_final_states(spec)
        rf = protocol.reduce_alice(fs)
        for s in (0, 1):
            sim = attacks.bob_purified_attack(spec, s)
            if s == 0:
                fsum = sum(fidelity(rf.rho[(1, 0, x)], rf.rho[(1, 1, x)]) for x in (0, 1))
            else:
                fsum = sum(fidelity(rf.rho[(0, x, 0)], rf.rho[(0, x, 1)]) for x in (0, 1))
            worst_closed = max(worst_closed, abs(sim - (0.5 + fsum / 8.0)))
        worst_alice = max(
            worst_alice, abs(attacks.alice_helstrom_attack(rf) - attacks.alice_bound(rf))
        )
    return [
        Check("simulation_matches_closed_form", worst_closed <= TOL_SPECTRAL, f"{worst_closed:.2e}"),
        Check("helstrom_attack_achieves_bound", worst_alice <= TOL_SPECTRAL, f"{worst_alice:.2e}"),
    ]


def suite_catalog(seed: int) -> list[Check]:
    checks = []
    spec = catalog.build_cks()
    worst = 0.0
    for a in (0, 1):
        for x0 in (0, 1):
            for x1 in (0, 1):
                sv = protocol.run_honest(spec, a, x0, x1)
                expected = np.zeros(36, dtype=complex)
                xa = x0 if a == 0 else x1
                base = x0 * 2 + x1
                aa = 4 * a  # |aa| index within the 9-dim qutrit pair
                expected[aa * 4 + base] = (-1.0) ** xa / np.sqrt(2)
                expected[8 * 4 + base] = 1.0 / np.sqrt(2)
                worst = max(worst, np.abs(sv.amps - expected).max())
    checks.append(Check("qutrit_states_exact", worst <= 1e-9, f"{worst:.2e}"))
    worst_line = 0.0
    ok_range = True
    for eps in (0.0, 0.01):
        for k in range(17):
            pt = catalog.combined_bounds(catalog.WCFPrimitive(k / 16.0, eps, 4))
            worst_line = max(worst_line, abs(pt.combined - (2.0 + eps)))
            # within the epsilon-slack envelope; clipping to [1/2,1]x[1/2,3/4]
            # recovers the attainable ranges
            ok_range &= 0.5 <= pt.a_bound <= 1.0 + eps / 2 + 1e-12
            ok_range &= 0.5 <= pt.b_bound <= 0.75 + eps / 4 + 1e-12
    checks.append(Check("combined_on_line", worst_line <= 1e-9, f"{worst_line:.2e}"))
    checks.append(Check("bounds_in_range", ok_range))
    return checks


def suite_tradeoff(seed: int) -> list[Check]:
    checks = []
    grid = np.linspace(0.0, 0.5, 1000)
    vals = [tradeoff.prop3_bound(d) for d in grid]
    checks.append(Check("p3_monotone", all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))))
    pts = tradeoff.curve(0.0, 9)
    worst = max(abs(p.combined - 2.0) for p in pts)
    checks.append(Check("curve_on_line", worst <= 1e-9, f"{worst:.2e}"))
    end_ok = (
        abs(pts[0].b_bound - 0.75) <= 1e-12 and abs(pts[0].a_bound - 0.5) <= 1e-12
        and abs(pts[-1].b_bound - 0.5) <= 1e-12 and abs(pts[-1].a_bound - 1.0) <= 1e-12
    )
    checks.append(Check("curve_endpoints", end_ok))
    dstar = tradeoff.delta_star()
    mc = [tradeoff.tune_lambda(d, 0.0).max_cheat for d in np.linspace(0.0, dstar, 50)]
    mono = all(b >= a - 1e-12 for a, b in zip(mc, mc[1:]))
    checks.append(Check("max_cheat_monotone", mono))
    checks.append(Check(
        "tuning_endpoints",
        abs(mc[0] - 2.0 / 3.0) <= 1e-9 and abs(mc[-1] - 0.75) <= 1e-6,
        f"{mc[0]:.9f} {mc[-1]:.9f}",
    ))
    return checks


def suite_oracle(seed: int) -> list[Check]:
    rng = _rng(seed, 8)
    checks = []
    worst = 0.0
    for _ in range(300):
        raw = rng.random(3)
        a, b, g = np.sqrt(raw / raw.sum())
        anc = tuple(haar_unitary(3, rng)[:, 0] for _ in range(3))
        cs = oracle.CheatState(a, b, g, anc)
        worst = max(worst, abs(oracle.cks_alice_success(cs, 0) - (0.5 + a * g)))
        worst = max(worst, abs(oracle.cks_alice_success(cs, 1) - (0.5 + b * g)))
    checks.append(Check("closed_forms", worst <= TOL_SPECTRAL, f"{worst:.2e}"))

    grid = 100
    ok_sound = True
    worst_excess = -1.0
    for d in np.linspace(0.0, 0.05, 6):
        val = oracle.cks_alice_oracle(float(d), grid)
        excess = val - tradeoff.prop3_bound(float(d))
        worst_excess = max(worst_excess, excess)
        ok_sound &= excess <= TOL_SPECTRAL
    checks.append(Check("grid_search_below_analytic_bound", ok_sound, f"max excess {worst_excess:.2e}"))

    ok_hel = True
    for _ in range(20):
        rho, xi = _random_pair(rng, 2)
        gp = guess_prob(rho, xi)
        val = oracle.helstrom_oracle(rho, xi, 500, int(rng.integers(2**31)))
        ok_hel &= gp - 0.05 <= val <= gp + TOL_SPECTRAL
    checks.append(Check("helstrom_oracle_brackets", ok_hel))

    lay = RegisterLayout((Factor("S", 2, "Alice"), Factor("E", 2, "Bob")))
    ok_uhl = True
    for _ in range(20):
        amps = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        phi = StateVector(lay, amps / np.linalg.norm(amps))
        amps = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        psi = StateVector(lay, amps / np.linalg.norm(amps))
        f = fidelity(
            partial_trace(pure_density(phi), lay, ["S"]),
            partial_trace(pure_density(psi), lay, ["S"]),
        )
        val = oracle.uhlmann_oracle(phi, psi, ["E"], 500, int(rng.integers(2**31)))
        ok_uhl &= f - 0.05 <= val <= f + TOL_SPECTRAL
    checks.append(Check("uhlmann_oracle_brackets", ok_uhl))
    return checks


SUITES: tuple[tuple[str, Callable[[int], list[Check]]], ...] = (
    ("qcore.fuchs_van_de_graaf", suite_fuchs_van_de_graaf),
    ("qcore.trace_norm", suite_trace_norm),
    ("qcore.helstrom", suite_helstrom),
    ("qcore.fidelity_uhlmann", suite_fidelity_and_uhlmann),
    ("qcore.partial_trace", suite_partial_trace),
    ("protocol.honest_runs", suite_protocol_honest),
    ("attacks.inequality_chain", suite_inequality_chain),
    ("attacks.purified_attack", suite_purified_attack),
    ("catalog.protocols", suite_catalog),
    ("tradeoff.curve_robustness", suite_tradeoff),
    ("oracle.soundness", suite_oracle),
)


def run_all(seed: int) -> tuple[list[str], bool]:
    """Run every suite; returns the report lines and the overall verdict."""
    lines = []
    all_ok = True
    for name, fn in SUITES:
        checks = fn(seed)
        bad = [c for c in checks if not c.ok]
        if bad:
            all_ok = False
            first = bad[0]
            detail = f": {first.name}" + (f" ({first.detail})" if first.detail else "")
            lines.append(f"FAIL {name}{detail}")
        else:
            lines.append(f"PASS {name} ({len(checks)} checks)")
    lines.append("OK" if all_ok else "FAILED")
    return lines, all_ok
