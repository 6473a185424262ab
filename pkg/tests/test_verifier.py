import numpy as np
import pytest

from opineq import (
    BadParameter,
    SymmetricMatrix,
    TrialSpec,
    derive_seed,
    eigendecompose,
    loewner_compare,
    random_density,
    random_sandwich_pair,
    random_symmetric_with_spectrum,
    registered_inequalities,
    replay_failure,
    run_campaign,
)


class TestGenerators:
    def test_spectrum_inside_interval(self):
        matrix = random_symmetric_with_spectrum(31, 4, 0.25, 3.8)
        dec = eigendecompose(matrix)
        assert dec.eigenvalues[0] >= 0.25 - 1e-12
        assert dec.eigenvalues[-1] <= 3.8 + 1e-12

    def test_deterministic_per_seed(self):
        a = random_symmetric_with_spectrum(7, 5, 1.0, 2.0)
        b = random_symmetric_with_spectrum(7, 5, 1.0, 2.0)
        assert np.array_equal(a.entries, b.entries)

    def test_distinct_seeds_differ(self):
        a = random_symmetric_with_spectrum(7, 5, 1.0, 2.0)
        b = random_symmetric_with_spectrum(8, 5, 1.0, 2.0)
        assert not np.array_equal(a.entries, b.entries)

    def test_endpoints_forced_roughly_quarter_of_the_time(self):
        forced = 0
        for i in range(400):
            matrix = random_symmetric_with_spectrum(derive_seed(71, i), 3, 1.0, 2.0)
            dec = eigendecompose(matrix)
            if abs(dec.eigenvalues[0] - 1.0) < 1e-9 and abs(dec.eigenvalues[-1] - 2.0) < 1e-9:
                forced += 1
        assert 50 <= forced <= 160

    def test_generator_validation(self):
        with pytest.raises(BadParameter):
            random_symmetric_with_spectrum(1, 1, 0.0, 1.0)
        with pytest.raises(BadParameter):
            random_symmetric_with_spectrum(1, 3, 2.0, 1.0)

    def test_density_trace_and_floor(self):
        for i in range(50):
            rho = random_density(derive_seed(72, i), 2 + i % 5)
            assert abs(rho.rho.trace - 1.0) <= 1e-12
            assert rho.eigenvalues()[0] >= 1e-3 - 1e-12

    def test_density_deterministic(self):
        a = random_density(9, 4)
        b = random_density(9, 4)
        assert np.array_equal(a.rho.entries, b.rho.entries)

    def test_sandwich_pair_by_construction(self):
        pair = random_sandwich_pair(12, 4, 0.5, 2.0)
        assert loewner_compare(pair.m * pair.A, pair.B).holds_le
        assert loewner_compare(pair.B, pair.M * pair.A).holds_le
        assert 0.5 - 1e-10 <= pair.m < pair.M <= 2.0 + 1e-10

    def test_narrow_sandwich(self):
        pair = random_sandwich_pair(13, 3, 1.0, 1.0 + 1e-4)
        gap = pair.B - pair.m * pair.A
        assert gap.norm_max <= 1e-3 * (1.0 + pair.A.norm_max)

    def test_sandwich_pair_deterministic(self):
        a = random_sandwich_pair(14, 3, 0.5, 2.0)
        b = random_sandwich_pair(14, 3, 0.5, 2.0)
        assert np.array_equal(a.B.entries, b.B.entries)


class TestCampaign:
    def test_rejects_zero_trials(self):
        with pytest.raises(BadParameter):
            run_campaign(TrialSpec(trials=0))

    def test_rejects_bad_tolerance(self):
        with pytest.raises(BadParameter):
            run_campaign(TrialSpec(trials=1, tolerance=0.0))

    def test_deterministic_reports(self):
        spec = TrialSpec(seed=5, trials=10)
        first = run_campaign(spec)
        second = run_campaign(spec)
        assert first.to_dict() == second.to_dict()

    def test_coverage_of_registered_inequalities(self):
        report = run_campaign(TrialSpec(seed=5, trials=40))
        assert report.statistics["coverage_missing"] == []
        assert set(registered_inequalities()) <= set(report.aggregates)

    def test_aggregate_counts_match_rows(self):
        report = run_campaign(TrialSpec(seed=6, trials=15))
        for label, agg in report.aggregates.items():
            rows = [row for row in report.rows if row[0] == label]
            assert agg["pass"] + agg["fail"] == len(rows), label
            assert agg["worst_slack"] == min(row[3] for row in rows)

    def test_theorem_backed_inequalities_never_fail(self):
        report = run_campaign(TrialSpec(seed=7, trials=40))
        floors = {"quantum_tsallis_floor", "von_neumann_floor"}
        for failure in report.failures:
            assert failure["label"] in floors, failure["label"]

    def test_every_failure_has_a_replayable_reproducer(self):
        report = run_campaign(TrialSpec(seed=7, trials=30))
        assert report.failures, "expected entropy-floor violations in this campaign"
        for record in report.failures[:10]:
            assert replay_failure(record) == record["slack"]

    def test_replay_matches_rows_for_passing_checks_too(self):
        # tiny tolerance turns exact equalities into recorded failures; replay must agree
        report = run_campaign(TrialSpec(seed=8, trials=5, tolerance=1e-300))
        assert report.failures
        seen_kinds = set()
        for record in report.failures:
            kind = record["inputs"]["kind"]
            if kind in seen_kinds:
                continue
            seen_kinds.add(kind)
            assert replay_failure(record) == record["slack"], kind
        assert len(seen_kinds) >= 3  # several reproducer families exercised

    def test_replay_dispatch_for_map_based_records(self):
        from opineq import NormalizedTrace, build_context, catalog_lookup, improved_kantorovich
        from opineq import jensen_upper_bound

        matrix = SymmetricMatrix([[3.0, -2.0], [-2.0, 7.0]])
        data = [float(x) for x in matrix.entries.reshape(-1)]
        cdj_record = {
            "label": "jensen_upper",
            "slack": None,
            "inputs": {
                "kind": "cdj",
                "matrix": data,
                "dim": 2,
                "map": {"tag": "trace"},
                "function": "power:3",
                "m": 2.0,
                "M": 8.0,
            },
        }
        ctx = build_context(matrix, NormalizedTrace(2), catalog_lookup("power", [3]), 2.0, 8.0)
        assert replay_failure(cdj_record) == jensen_upper_bound(ctx).tightness

        kant_record = {
            "label": "improved_kantorovich",
            "slack": None,
            "inputs": dict(cdj_record["inputs"], kind="kantorovich"),
        }
        direct = improved_kantorovich(matrix, NormalizedTrace(2), 2.0, 8.0)
        assert replay_failure(kant_record) == direct.inequality.tightness

    def test_third_term_statistics_recorded(self):
        report = run_campaign(TrialSpec(seed=9, trials=10))
        stats = report.statistics
        assert stats["jensen_third_term_min_eig"] <= stats["jensen_third_term_max_eig"]
        assert isinstance(stats["kantorovich_strict_improvements"], int)

    def test_csv_export(self, tmp_path):
        report = run_campaign(TrialSpec(seed=10, trials=3))
        path = tmp_path / "rows.csv"
        report.write_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "inequality,trial,dim,slack,pass"
        assert len(lines) == len(report.rows) + 1
        first = lines[1].split(",")
        assert first[0] == report.rows[0][0]
        assert first[4] in ("true", "false")
