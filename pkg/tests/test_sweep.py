import json
import time

import numpy as np
import pytest

from ntqw import (
    ConfigurationError,
    DisorderKind,
    PhaseDiagram,
    RunConfig,
    run_ensemble,
    run_phase_diagram,
    run_single,
)
from ntqw.sweep import cell_seed, sweep_digest


def cfg(**kw):
    base = dict(theta0=np.pi / 4, chi=0.3, kind="homogeneous", steps=50, base_seed=7)
    base.update(kw)
    return RunConfig.create(**base)


class TestRunConfig:
    def test_lattice_sizing(self):
        c = cfg(steps=100)
        assert c.num_sites == 205
        assert c.n_origin == 102

    def test_rejects_bad_values(self):
        with pytest.raises(ConfigurationError):
            cfg(chi=-0.1)
        with pytest.raises(ConfigurationError):
            cfg(steps=0)
        with pytest.raises(ConfigurationError):
            cfg(ensemble_size=0)
        with pytest.raises(ConfigurationError):
            cfg(tail_fraction=0.0)
        with pytest.raises(ConfigurationError):
            cfg(tail_fraction=1.5)
        with pytest.raises(ConfigurationError):
            cfg(base_seed=-1)
        with pytest.raises(ConfigurationError):
            cfg(theta0=np.nan)

    def test_rejects_snapshot_time_outside_run(self):
        with pytest.raises(ConfigurationError):
            cfg(steps=50, snapshot_times=(60,))

    def test_disorder_spec_must_agree(self):
        good = cfg()
        with pytest.raises(ConfigurationError):
            RunConfig(
                theta0=good.theta0 + 0.1,
                chi=good.chi,
                disorder=good.disorder,
                steps=good.steps,
            )

    def test_with_point_rederives_disorder(self):
        c = cfg(kind="spatial", width=4.0)
        moved = c.with_point(chi=0.9, theta0=1.0, base_seed=99)
        assert moved.chi == 0.9
        assert moved.disorder.theta0 == 1.0
        assert moved.disorder.seed == 99
        assert moved.disorder.width == 4.0
        assert moved.steps == c.steps


class TestRunSingle:
    def test_deterministic(self):
        c = cfg(kind="spatial", steps=80)
        s1 = run_single(c, 3)
        s2 = run_single(c, 3)
        assert np.array_equal(s1.r0, s2.r0)
        assert np.array_equal(s1.pr, s2.pr)

    def test_sample_index_matters_for_disorder(self):
        c = cfg(kind="spatial", steps=80)
        s1 = run_single(c, 0)
        s2 = run_single(c, 1)
        assert not np.allclose(s1.pr, s2.pr)

    def test_linear_walk_spreads_ballistically(self):
        # chi=0 coin pi/4: cone width grows linearly, so PR(2t)/PR(t) -> 2.
        # Convergence is slow (edge peaks): the doubling ratio is 1.679 at
        # t=50->100 and 1.789 at t=100->200, approaching 2 from below.
        c = cfg(chi=0.0, steps=200, num_points=400)
        s = run_single(c, 0)
        pr = {t: s.pr[s.times == t][0] for t in (50, 100, 200)}
        assert pr[100] / pr[50] == pytest.approx(1.67934, rel=1e-4)
        assert pr[200] / pr[100] == pytest.approx(2.0, rel=0.15)
        assert pr[100] / pr[50] < pr[200] / pr[100] < 2.0

    def test_records_requested_snapshots(self):
        c = cfg(steps=40, snapshot_times=(0, 10, 40))
        s = run_single(c, 0)
        assert [t for t, _ in s.snapshots] == [0, 10, 40]
        for _, dens in s.snapshots:
            assert dens.sum() == pytest.approx(1.0, abs=1e-12)

    def test_starts_at_origin(self):
        c = cfg(steps=30)
        s = run_single(c, 0)
        assert s.times[0] == 0
        # 1/sqrt(2) amplitudes square-sum to 1 only within an ulp or two
        assert s.r0[0] == pytest.approx(1.0, abs=1e-14)
        assert s.pr[0] == pytest.approx(1.0, abs=1e-14)


class TestRunEnsemble:
    def test_size_one_equals_run_single(self):
        c = cfg(kind="temporal", steps=60, ensemble_size=1)
        avg, metas = run_ensemble(c)
        single = run_single(c, 0)
        assert np.array_equal(avg.r0, single.r0)
        assert np.array_equal(avg.pr, single.pr)
        assert len(metas) == 1

    def test_homogeneous_collapses(self):
        c = cfg(kind="homogeneous", steps=60, ensemble_size=8)
        avg, metas = run_ensemble(c)
        assert len(metas) == 1
        assert metas[0]["effective_ensemble"] == 1
        assert np.array_equal(avg.r0, run_single(c, 0).r0)

    def test_average_is_the_member_mean(self):
        c = cfg(kind="spatial", steps=60, ensemble_size=3)
        avg, _ = run_ensemble(c)
        members = [run_single(c, i) for i in range(3)]
        assert np.allclose(avg.r0, np.mean([m.r0 for m in members], axis=0))
        assert np.allclose(avg.pr, np.mean([m.pr for m in members], axis=0))

    def test_worker_count_never_changes_results(self):
        c = cfg(kind="spatial", steps=60, ensemble_size=4)
        serial, _ = run_ensemble(c, jobs=1)
        parallel, _ = run_ensemble(c, jobs=2)
        assert np.array_equal(serial.r0, parallel.r0)
        assert np.array_equal(serial.pr, parallel.pr)

    def test_metadata_records_seed_paths(self):
        c = cfg(kind="temporal", steps=40, ensemble_size=2, base_seed=5)
        _, metas = run_ensemble(c)
        assert [m["seed_path"] for m in metas] == [[5, 0], [5, 1]]
        for m in metas:
            assert abs(m["final_norm_sq"] - 1.0) < 1e-12


class TestCellSeeds:
    def test_deterministic(self):
        assert cell_seed(11, 3, 4) == cell_seed(11, 3, 4)

    def test_distinct_across_cells_and_bases(self):
        seeds = {cell_seed(11, i, j) for i in range(9) for j in range(9)}
        assert len(seeds) == 81
        assert cell_seed(12, 0, 0) != cell_seed(11, 0, 0)

    def test_index_order_matters(self):
        assert cell_seed(11, 1, 2) != cell_seed(11, 2, 1)


class TestSweepDigest:
    def test_stable(self):
        c = cfg(steps=40)
        axes = ([0.0, 0.5], [0.3, 0.6])
        assert sweep_digest(*axes, c) == sweep_digest(*axes, c)

    def test_sensitive_to_everything_that_matters(self):
        c = cfg(steps=40)
        base = sweep_digest([0.0, 0.5], [0.3, 0.6], c)
        assert sweep_digest([0.0, 0.6], [0.3, 0.6], c) != base
        assert sweep_digest([0.0, 0.5], [0.3, 0.7], c) != base
        assert sweep_digest([0.0, 0.5], [0.3, 0.6], cfg(steps=41)) != base
        assert sweep_digest([0.0, 0.5], [0.3, 0.6], cfg(steps=40, base_seed=8)) != base
        assert (
            sweep_digest([0.0, 0.5], [0.3, 0.6], cfg(steps=40, kind="spatial")) != base
        )


def tiny_template(**kw):
    base = dict(
        theta0=0.3, chi=0.0, kind="spatial", steps=30, ensemble_size=2, base_seed=11
    )
    base.update(kw)
    return RunConfig.create(**base)


class TestPhaseDiagram:
    def test_shapes_and_masks(self):
        chi_axis = [0.0, 0.5, 1.0]
        theta_axis = [0.4, np.pi / 2]
        d = run_phase_diagram(chi_axis, theta_axis, tiny_template())
        assert d.r0_bar.shape == (3, 2)
        assert d.pr_bar.shape == (3, 2)
        assert np.array_equal(d.mask_r0, d.r0_bar < d.thresholds[0])
        assert np.array_equal(d.mask_pr, d.pr_bar < d.thresholds[1])

    def test_single_cell_equals_run_ensemble(self):
        from ntqw.observables import long_time_average

        template = tiny_template()
        d = run_phase_diagram([0.6], [np.pi / 3], template)
        point = template.with_point(
            chi=0.6, theta0=np.pi / 3, base_seed=cell_seed(template.base_seed, 0, 0)
        )
        avg, _ = run_ensemble(point)
        r0_bar, pr_bar = long_time_average(avg, template.tail_fraction)
        assert d.r0_bar[0, 0] == r0_bar
        assert d.pr_bar[0, 0] == pr_bar

    def test_empty_axes_rejected(self):
        with pytest.raises(ConfigurationError):
            run_phase_diagram([], [0.3], tiny_template())
        with pytest.raises(ConfigurationError):
            run_phase_diagram([0.1], [], tiny_template())

    def test_bad_thresholds_rejected(self):
        with pytest.raises(ConfigurationError):
            run_phase_diagram([0.1], [0.3], tiny_template(), thresholds=(0.0, 2.0))

    def test_journal_resume_is_bit_identical(self, tmp_path):
        chi_axis = [0.0, 0.8]
        theta_axis = [0.5, 1.2]
        template = tiny_template()

        clean = run_phase_diagram(chi_axis, theta_axis, template)

        journal = tmp_path / "cells.jsonl"
        run_phase_diagram(chi_axis, theta_axis, template, journal_path=str(journal))
        lines = journal.read_text().strip().split("\n")
        assert len(lines) == 1 + 4  # header + one record per cell

        # drop the last two cells to simulate an interrupt, then resume
        journal.write_text("\n".join(lines[:3]) + "\n")
        resumed = run_phase_diagram(
            chi_axis, theta_axis, template, journal_path=str(journal)
        )
        assert np.array_equal(resumed.r0_bar, clean.r0_bar)
        assert np.array_equal(resumed.pr_bar, clean.pr_bar)

    def test_resume_skips_finished_cells(self, tmp_path):
        chi_axis = [0.0, 0.8]
        theta_axis = [0.5]
        template = tiny_template()
        journal = tmp_path / "cells.jsonl"
        run_phase_diagram(chi_axis, theta_axis, template, journal_path=str(journal))
        before = journal.read_text()

        calls = []
        run_phase_diagram(
            chi_axis,
            theta_axis,
            template,
            journal_path=str(journal),
            progress=lambda done, total: calls.append((done, total)),
        )
        # nothing pending: no new journal lines, progress never fired
        assert journal.read_text() == before
        assert calls == []

    def test_journal_from_other_sweep_refused(self, tmp_path):
        journal = tmp_path / "cells.jsonl"
        run_phase_diagram([0.1], [0.5], tiny_template(), journal_path=str(journal))
        with pytest.raises(ConfigurationError, match="different sweep"):
            run_phase_diagram(
                [0.2], [0.5], tiny_template(), journal_path=str(journal)
            )

    def test_corrupt_journal_line_reported(self, tmp_path):
        journal = tmp_path / "cells.jsonl"
        journal.write_text("{not json}\n")
        with pytest.raises(ConfigurationError, match="not valid JSON"):
            run_phase_diagram([0.1], [0.5], tiny_template(), journal_path=str(journal))

    def test_journal_records_are_json_with_indices(self, tmp_path):
        journal = tmp_path / "cells.jsonl"
        run_phase_diagram([0.1, 0.2], [0.5], tiny_template(), journal_path=str(journal))
        recs = [json.loads(l) for l in journal.read_text().strip().split("\n")]
        cells = [r for r in recs if "i_chi" in r]
        assert {(r["i_chi"], r["i_theta"]) for r in cells} == {(0, 0), (1, 0)}

    def test_worker_count_never_changes_the_diagram(self):
        chi_axis = [0.0, 0.7]
        theta_axis = [0.4, 1.1]
        template = tiny_template(steps=25)
        serial = run_phase_diagram(chi_axis, theta_axis, template, jobs=1)
        parallel = run_phase_diagram(chi_axis, theta_axis, template, jobs=3)
        assert np.array_equal(serial.r0_bar, parallel.r0_bar)
        assert np.array_equal(serial.pr_bar, parallel.pr_bar)


class TestResourceScaling:
    @pytest.mark.slow
    def test_cell_cost_scales_with_work(self):
        # work per run ~ sum_t window(t) ~ T^2 when the lattice tracks T;
        # quadrupling T predicts 16x, assert under 2x slack
        def best_of(n, config):
            best = float("inf")
            for _ in range(n):
                t0 = time.perf_counter()
                run_single(config, 0)
                best = min(best, time.perf_counter() - t0)
            return best

        small = best_of(3, cfg(chi=0.3, steps=500))
        big = best_of(2, cfg(chi=0.3, steps=2000))
        assert big / small < 32.0
