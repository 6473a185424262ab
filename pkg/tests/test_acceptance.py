"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.  The
quantum-entropy floor suite (criterion 7) is implemented faithfully and is
expected to report violations: the claimed entropy floors are falsified for
spread spectra under exact-hull spectral bounds, and every violation is
emitted with a full reproducer (see the README's caveats section).
"""

import json
import math
import time

import numpy as np
import pytest

from opineq import (
    K_constant,
    LoewnerRelation,
    OperatorPair,
    SplitMix64,
    SymmetricMatrix,
    build_context,
    catalog_lookup,
    chord_bounds,
    derive_seed,
    jensen_converse_bound,
    jensen_upper_bound,
    kantorovich_power_constant,
    loewner_compare,
    map_commutation_bounds,
    parse_function_spec,
    perspective_bounds,
    quantum_tsallis_lower_bound,
    random_density,
    random_sandwich_pair,
    random_symmetric_with_spectrum,
    refined_sandwich_chain,
    relative_entropy_bounds,
    relative_operator_entropy,
    tsallis_entropy_bounds,
    tsallis_relative_operator_entropy,
    von_neumann_lower_bound,
)
from opineq import worked_examples
from opineq.cli import main
from opineq.verifier import _make_map


def _line(number: int, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {number}] {status} {detail}")


def test_criterion_1_counterexample():
    start = time.perf_counter()
    result = worked_examples.quartic_corner_counterexample()
    elapsed = time.perf_counter() - start
    ok = result.ok and elapsed < 1.0
    _line(1, ok, f"corner counterexample reproduced in {elapsed:.3f}s")
    assert result.ok, result
    assert elapsed < 1.0


def test_criterion_2_cube_example():
    start = time.perf_counter()
    result = worked_examples.cube_vector_state_example()
    elapsed = time.perf_counter() - start
    values = {line.label: line for line in result.values}
    ok = result.ok and elapsed < 1.0
    _line(
        2,
        ok,
        "8 / 24 exact, bounds "
        f"{values['additive upper bound'].computed:.4f} / "
        f"{values['additive converse bound'].computed:.4f} in {elapsed:.3f}s",
    )
    assert result.ok, result
    assert elapsed < 1.0


def test_criterion_3_kantorovich_example():
    start = time.perf_counter()
    result = worked_examples.kantorovich_trace_example()
    elapsed = time.perf_counter() - start
    ok = result.ok and elapsed < 1.0
    _line(3, ok, f"gaps 5/272 and 143/8704, difference 1/512, in {elapsed:.3f}s")
    assert result.ok, result
    assert elapsed < 1.0


CRITERION_4_FUNCTIONS = (
    "power:3",
    "power:4",
    "power:-1",
    "log",
    "tsallis_f:0.5",
    "tsallis_f:-0.5",
    "exp",
)
CRITERION_4_MAPS = ("corner", "vecstate", "trace", "pinching")


def test_criterion_4_chord_and_jensen_suite():
    start = time.perf_counter()
    violations = []
    for i in range(1000):
        rng = SplitMix64(derive_seed(20_250_401, i))
        dim = 2 + rng.below(7)
        m = 0.3 + 1.2 * rng.uniform()
        M = m + 0.5 + 2.5 * rng.uniform()
        matrix = random_symmetric_with_spectrum(rng.next_u64(), dim, m, M)
        phi, _ = _make_map(CRITERION_4_MAPS[i % 4], dim, rng)
        fn = parse_function_spec(CRITERION_4_FUNCTIONS[i % 7])
        ctx = build_context(matrix, phi, fn, m, M)
        reports = list(chord_bounds(ctx))
        reports.append(jensen_upper_bound(ctx))
        reports.append(jensen_converse_bound(ctx))
        for report in reports:
            if report.tightness < -1e-8 * (1.0 + report.scale):
                violations.append((i, report.label, report.tightness))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 30.0
    _line(4, ok, f"6000 chord/jensen verdicts, {len(violations)} failures, {elapsed:.1f}s")
    assert violations == []
    assert elapsed < 30.0


CRITERION_5_FUNCTIONS = ("power:2", "power:3", "power:4", "power:-1", "exp")


def test_criterion_5_refinement_chain_suite():
    start = time.perf_counter()
    violations = []
    for i in range(1000):
        rng = SplitMix64(derive_seed(20_250_502, i))
        dim = 2 + rng.below(7)
        m = 0.3 + 1.0 * rng.uniform()
        M = m + 0.4 + 2.0 * rng.uniform()
        matrix = random_symmetric_with_spectrum(rng.next_u64(), dim, m, M)
        phi, _ = _make_map(CRITERION_4_MAPS[i % 4], dim, rng)
        fn = parse_function_spec(CRITERION_5_FUNCTIONS[i % 5])
        ctx = build_context(matrix, phi, fn, m, M)
        chain = refined_sandwich_chain(ctx)
        if chain.tightness < -1e-8 * (1.0 + chain.scale):
            violations.append((i, "refined_chain", chain.tightness))
        if K_constant(fn, m, M) < 1.0 - 1e-12:
            violations.append((i, "K_below_one", K_constant(fn, m, M)))
        for r in (-1.0, 2.0, 3.0):
            closed = kantorovich_power_constant(m, M, r)
            ratio = K_constant(catalog_lookup("power", [r]), m, M)
            if abs(closed - ratio) > 1e-8 * abs(ratio):
                violations.append((i, f"power_constant_oracle[r={r:g}]", closed - ratio))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 30.0
    _line(5, ok, f"1000 chains + constant oracles, {len(violations)} failures, {elapsed:.1f}s")
    assert violations == []
    assert elapsed < 30.0


CRITERION_6_FUNCTIONS = ("power:3", "power:-1", "log", "exp", "tsallis_f:0.5", "tsallis_f:-0.5")
CRITERION_6_PS = (0.5, -0.5, 1.0, -1.0)


def test_criterion_6_perspective_and_entropy_bound_suite():
    start = time.perf_counter()
    violations = []
    for i in range(500):
        rng = SplitMix64(derive_seed(20_250_603, i))
        dim = 2 + rng.below(5)
        m = 0.3 + 0.9 * rng.uniform()
        M = m + 0.4 + 1.6 * rng.uniform()
        pair = random_sandwich_pair(rng.next_u64(), dim, m, M)  # exact-hull bounds
        phi, _ = _make_map(CRITERION_4_MAPS[i % 4], dim, rng)
        fn = parse_function_spec(CRITERION_6_FUNCTIONS[i % 6])
        p = CRITERION_6_PS[i % 4]
        reports = []
        reports.extend(perspective_bounds(pair, fn))
        reports.extend(map_commutation_bounds(pair, phi, fn))
        reports.extend(tsallis_entropy_bounds(pair, p))
        reports.extend(relative_entropy_bounds(pair))
        for report in reports:
            if report.tightness < -1e-8 * (1.0 + report.scale):
                violations.append((i, report.label, report.tightness))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 60.0
    _line(6, ok, f"4000 sandwich-pair verdicts on 500 pairs, {len(violations)} failures, {elapsed:.1f}s")
    assert violations == []
    assert elapsed < 60.0


def test_criterion_7_entropy_floor_suite():
    # Faithful implementation of the stated criterion.  The claimed floors are
    # falsified for spread spectra under exact-hull bounds (see the decisions
    # notes); violations are emitted below with full reproducers and the final
    # assertion is expected to be red.
    start = time.perf_counter()
    violations = []
    checked = 0
    for i in range(1000):
        rng = SplitMix64(derive_seed(20_250_704, i))
        dim = 2 + rng.below(5)
        rho = random_density(rng.next_u64(), dim)
        p = CRITERION_6_PS[i % 4]
        tsallis = quantum_tsallis_lower_bound(rho, p)
        von_neumann = von_neumann_lower_bound(rho)
        checked += 1
        for label, check in (("quantum_tsallis_floor", tsallis), ("von_neumann_floor", von_neumann)):
            slacks = {"floor": check.slack, "nonneg": check.nonneg_check.slack}
            for which, slack in slacks.items():
                if slack < -1e-10:
                    violations.append(
                        {
                            "trial": i,
                            "label": f"{label}:{which}",
                            "p": p,
                            "dim": dim,
                            "entropy": check.entropy,
                            "bound": check.bound,
                            "slack": slack,
                            "m": rho.m,
                            "M": rho.M,
                            "rho": [float(x) for x in rho.rho.entries.reshape(-1)],
                        }
                    )
    elapsed = time.perf_counter() - start
    worst = min((v["slack"] for v in violations), default=0.0)
    ok = not violations and elapsed < 30.0
    _line(
        7,
        ok,
        f"{checked} density operators, {len(violations)} floor violations "
        f"(worst slack {worst:.4g}), {elapsed:.1f}s",
    )
    if violations:
        print(f"criterion 7 reproducers ({len(violations)} total, showing 5):")
        for record in violations[:5]:
            print("  " + json.dumps(record))
    assert elapsed < 30.0
    assert violations == [], (
        f"{len(violations)} entropy-floor violations with exact-hull bounds; "
        "the claimed floors do not hold for spread spectra (reproducers printed above)"
    )


def test_criterion_8_limit_consistency():
    start = time.perf_counter()
    worst_operator = 0.0
    worst_floor = 0.0
    for i in range(20):
        rng = SplitMix64(derive_seed(20_250_805, i))
        dim = 2 + rng.below(4)
        m = 0.4 + 0.8 * rng.uniform()
        M = m + 0.4 + 1.2 * rng.uniform()
        pair = random_sandwich_pair(rng.next_u64(), dim, m, M)
        s_value = relative_operator_entropy(pair)
        scale = 1.0 + s_value.norm_max
        for p in (1e-6, -1e-6):
            t_p = tsallis_relative_operator_entropy(pair, p)
            gap = float(np.abs(t_p.entries - s_value.entries).max()) / scale
            worst_operator = max(worst_operator, gap)
        rho = random_density(rng.next_u64(), dim)
        vn_floor = von_neumann_lower_bound(rho)
        floor_scale = 1.0 + abs(vn_floor.bound)
        for p in (1e-6, -1e-6):
            ts_floor = quantum_tsallis_lower_bound(rho, p)
            worst_floor = max(worst_floor, abs(ts_floor.bound - vn_floor.bound) / floor_scale)
    elapsed = time.perf_counter() - start
    ok = worst_operator <= 1e-4 and worst_floor <= 1e-4 and elapsed < 5.0
    _line(
        8,
        ok,
        f"small-order agreement: operator {worst_operator:.2e}, floor {worst_floor:.2e}, {elapsed:.2f}s",
    )
    assert worst_operator <= 1e-4
    assert worst_floor <= 1e-4
    assert elapsed < 5.0


def test_criterion_9_fuzz_determinism(tmp_path):
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    for path in (first, second):
        main(["fuzz", "--seed", "123", "--trials", "25", "--out", str(path)])
    identical = first.read_bytes() == second.read_bytes()
    _line(9, identical, f"two 25-trial campaigns, byte-identical={identical}")
    assert identical
