"""Smoke tests for the adadrop Python module and the CLI."""

import math
import os
import subprocess
import sys

import pytest

import adadrop as ad

CLI = os.environ.get("ADADROP_CLI")


def test_feedback_delta():
    fb = ad.compute_feedback(0.66, 0.60, 5)
    assert fb.delta == pytest.approx(0.06)
    with pytest.raises(Exception):
        ad.compute_feedback(1.5, 0.5, 1)


def test_decay_families_start_at_one():
    for kind in (ad.DecayKind.exponential, ad.DecayKind.inverse_linear, ad.DecayKind.logarithmic):
        fam = ad.DecayFamily(kind, 0.3)
        assert ad.decay_fraction(fam, 1) == 1.0
        assert ad.decay_fraction(fam, 50) <= ad.decay_fraction(fam, 5)


def test_sampling_is_deterministic():
    a = ad.sample_subset(100, 10, ad.derive_stream(9, ad.StreamId.sampling, 4))
    b = ad.sample_subset(100, 10, ad.derive_stream(9, ad.StreamId.sampling, 4))
    assert a.indices == b.indices
    assert len(set(a.indices)) == 10


def test_controller_roundtrip():
    config = ad.ControllerConfig()
    config.variant = ad.Variant.adaptive_t
    config.total_epochs = 10
    config.alpha_init = 0.25
    controller = ad.Controller(config)
    state = controller.initial_state()
    state, decision = controller.begin_epoch(state, None, 80, ad.RngStream(1))
    assert decision.keep_fraction == 1.0
    assert decision.subset_size == 80

    fb = ad.compute_feedback(0.5, 0.4, 1)
    state, decision = controller.begin_epoch(state, fb, 80, ad.RngStream(2))
    assert decision.keep_fraction == pytest.approx(1.0 - 0.25 * math.log(2.0))


def test_effective_epochs():
    ledger = ad.EpochLedger(100)
    for size in (100, 50, 100):
        ledger.append(size)
    assert ad.effective_epochs(ledger) == 2.5


def test_end_to_end_run(tmp_path):
    config = ad.ExperimentConfig()
    config.dataset.source = ad.DatasetSource.blobs
    config.dataset.n = 60
    config.dataset.dim = 2
    config.dataset.n_classes = 2
    config.dataset.noise = 0.5
    config.model.kind = ad.ModelKind.softmax_regression
    config.optimizer.learning_rate = 0.3
    config.optimizer.momentum = 0.0
    config.batch_size = 16
    config.controller.variant = ad.Variant.adaptive_t
    config.controller.total_epochs = 6
    config.master_seed = 3
    config.output_dir = str(tmp_path / "run")

    result = ad.run_experiment(config)
    assert result.summary.effective_epochs <= 6.0
    assert result.trace[-1].subset_size == 60  # final revision epoch
    assert (tmp_path / "run" / "trace.csv").exists()
    assert (tmp_path / "run" / "summary.json").exists()

    again = ad.run_experiment(config)
    assert [r.subset_size for r in again.trace] == [r.subset_size for r in result.trace]
    assert again.summary.final_accuracy_full == result.summary.final_accuracy_full


def test_grad_check_small():
    rng = ad.derive_stream(5, ad.StreamId.data, 0)
    ds = ad.make_synthetic(ad.SyntheticKind.blobs, 30, 2, 2, 0.5, rng)
    model = ad.init_model(ad.ModelKind.mlp1, 2, 2, 6, ad.Activation.tanh,
                          ad.derive_stream(5, ad.StreamId.init, 0))
    assert ad.grad_check(model, ds, 1e-5) < 1e-5


@pytest.mark.skipif(CLI is None, reason="ADADROP_CLI not set")
class TestCli:
    def test_run_and_exit_codes(self, tmp_path):
        config = tmp_path / "exp.cfg"
        config.write_text(
            "\n".join(
                [
                    "seed = 5",
                    "dataset.kind = blobs",
                    "dataset.n = 50",
                    "dataset.dim = 2",
                    "dataset.classes = 2",
                    "dataset.noise = 0.5",
                    "model.kind = softmax_regression",
                    "optimizer.learning_rate = 0.3",
                    "train.total_epochs = 5",
                    "controller.variant = fixed_pdd",
                ]
            )
            + "\n"
        )
        out_dir = tmp_path / "out"
        proc = subprocess.run(
            [CLI, "run", str(config), "-o", str(out_dir)], capture_output=True, text=True
        )
        assert proc.returncode == 0, proc.stderr
        assert (out_dir / "trace.csv").exists()
        assert (out_dir / "summary.json").exists()

        # identical rerun is byte-identical
        out_dir2 = tmp_path / "out2"
        subprocess.run([CLI, "run", str(config), "-o", str(out_dir2)], check=True)
        assert (out_dir / "trace.csv").read_bytes() == (out_dir2 / "trace.csv").read_bytes()

    def test_unknown_key_is_exit_2(self, tmp_path):
        config = tmp_path / "bad.cfg"
        config.write_text("dataset.kind = blobs\ncontroller.variant = fixed_pdd\n"
                          "train.total_epochs = 3\ncontroller.gama = 2\n")
        proc = subprocess.run([CLI, "run", str(config)], capture_output=True, text=True)
        assert proc.returncode == 2
        assert "unknown config key" in proc.stderr

    def test_gen_data_and_grad_check(self, tmp_path):
        data = tmp_path / "blobs.csv"
        proc = subprocess.run(
            [CLI, "gen-data", "blobs", "--n", "40", "--dim", "2", "--classes", "2",
             "--noise", "0.4", "--seed", "7", "-o", str(data)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        header = data.read_text().splitlines()[0]
        assert header == "label,f0,f1"

        config = tmp_path / "csv.cfg"
        config.write_text(
            "dataset.kind = csv\n"
            f"dataset.path = {data}\n"
            "model.kind = softmax_regression\n"
            "train.total_epochs = 3\n"
            "controller.variant = full_baseline\n"
        )
        proc = subprocess.run([CLI, "grad-check", str(config)], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert "max relative error" in proc.stdout

    def test_matched_baseline_and_compare(self, tmp_path):
        base = [
            "dataset.kind = blobs",
            "dataset.n = 50",
            "dataset.dim = 2",
            "dataset.classes = 2",
            "dataset.noise = 0.6",
            "model.kind = softmax_regression",
            "optimizer.learning_rate = 0.3",
            "train.total_epochs = 5",
        ]
        adaptive = tmp_path / "adaptive.cfg"
        adaptive.write_text("\n".join(base + ["controller.variant = adaptive_t"]) + "\n")
        baseline = tmp_path / "baseline.cfg"
        baseline.write_text("\n".join(base + ["controller.variant = full_baseline"]) + "\n")

        out_dir = tmp_path / "matched"
        proc = subprocess.run(
            [CLI, "matched-baseline", str(adaptive), "-o", str(out_dir)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        table = (out_dir / "matched.csv").read_text()
        assert "adaptive_t," in table
        assert "matched_baseline," in table

        pareto = tmp_path / "pareto.csv"
        proc = subprocess.run(
            [CLI, "compare", str(adaptive), str(baseline), "--seeds", "1,2", "-o", str(pareto)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        lines = pareto.read_text().splitlines()
        assert lines[0].startswith("method,n_seeds,accuracy_mean")
        assert len(lines) == 3
