"""Tests for the summary-CSV plotting script.

The fixtures synthesize CSVs in the harness summary schema; nothing here
touches the simulation package.
"""

import time

import pytest

import plot

HEADER = (
    "sweep_value,scheme_id,trials,nrmse_mean,nrmse_se,beamforming_gain_mean,"
    "beamforming_gain_se,sum_rate_mean,sum_rate_se,bit_count_mean,"
    "solver_iterations_mean"
)


def write_summary(path, rows, tag=plot.SCHEMA_TAG, header=HEADER):
    lines = [tag, header] + rows
    path.write_text("\n".join(lines) + "\n")


def two_scheme_rows():
    rows = []
    for i, snr in enumerate((-10, -5, 0, 5, 10)):
        rows.append(
            f"{snr},omp-sq-q5,200,{0.9 - 0.08 * i},0.01,"
            f"{50 + 10 * i},1.5,{3.0 + 0.5 * i},0.1,390,0"
        )
        rows.append(
            f"{snr},hybrid-cs,200,{0.95 - 0.02 * i},0.012,"
            f"{40 + 8 * i},1.2,{2.5 + 0.4 * i},0.1,440,12"
        )
    return rows


@pytest.fixture
def summary_csv(tmp_path):
    path = tmp_path / "summary.csv"
    write_summary(path, two_scheme_rows())
    return path


def test_repeated_renders_are_byte_identical(summary_csv, tmp_path):
    """Fixed styling, no timestamps: every kind reproduces exactly."""
    t0 = time.time()
    for kind in sorted(plot.KINDS):
        a = tmp_path / f"{kind}-a.png"
        b = tmp_path / f"{kind}-b.png"
        assert plot.main(["--summary", str(summary_csv), "--kind", kind,
                          "--out", str(a)]) == 0
        assert plot.main(["--summary", str(summary_csv), "--kind", kind,
                          "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes(), kind
        assert a.stat().st_size > 0
    assert time.time() - t0 < 60


def test_one_curve_per_scheme(summary_csv):
    rows = plot.load_summary(summary_csv)
    for kind, cfg in plot.KINDS.items():
        curves = plot.extract_curves(rows, cfg["metric"])
        assert sorted(curves) == ["hybrid-cs", "omp-sq-q5"], kind
        assert all(len(pts) == 5 for pts in curves.values())
        fig = plot.build_figure(curves, cfg)
        ax = fig.axes[0]
        # one errorbar container per scheme, legend keyed by scheme id
        assert len(ax.containers) == 2
        labels = [t.get_text() for t in ax.get_legend().get_texts()]
        assert labels == ["hybrid-cs", "omp-sq-q5"]
        import matplotlib.pyplot as plt

        plt.close(fig)


def test_single_point_single_scheme(tmp_path):
    path = tmp_path / "summary.csv"
    write_summary(path, ["10,omp-sq-q5,1,0.42,0.0,80,0.0,5.1,0.0,390,0"])
    out = tmp_path / "fig.png"
    assert plot.render(path, "nrmse-vs-snr", out) == 1
    assert out.stat().st_size > 0
    # PNG magic: the output is a real image file
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_curves_sorted_by_sweep_value(tmp_path):
    path = tmp_path / "summary.csv"
    write_summary(path, [
        "10,omp-sq-q5,5,0.3,0.01,80,1,5,0.1,390,0",
        "-10,omp-sq-q5,5,0.9,0.01,20,1,1,0.1,390,0",
        "0,omp-sq-q5,5,0.6,0.01,50,1,3,0.1,390,0",
    ])
    curves = plot.extract_curves(plot.load_summary(path), "nrmse")
    assert [x for x, _, _ in curves["omp-sq-q5"]] == [-10.0, 0.0, 10.0]


def test_missing_column_is_named(tmp_path):
    path = tmp_path / "summary.csv"
    header = HEADER.replace("nrmse_se,", "")
    rows = ["0,omp-sq-q5,5,0.5,60,1,3,0.1,390,0"]
    write_summary(path, rows, header=header)
    with pytest.raises(plot.SchemaError, match="nrmse_se"):
        plot.extract_curves(plot.load_summary(path), "nrmse")
    assert plot.main(["--summary", str(path), "--kind", "nrmse-vs-snr",
                      "--out", str(tmp_path / "x.png")]) == 2


def test_schema_tag_checked(tmp_path):
    path = tmp_path / "summary.csv"
    write_summary(path, two_scheme_rows(), tag="# something-else")
    with pytest.raises(plot.SchemaError, match="schema header"):
        plot.load_summary(path)


def test_empty_metric_rejected(tmp_path):
    path = tmp_path / "summary.csv"
    write_summary(path, ["0,omp-sq-q5,5,0.5,0.01,60,1,,,390,0"])
    with pytest.raises(plot.SchemaError, match="sum_rate_mean"):
        plot.extract_curves(plot.load_summary(path), "sum_rate")


def test_input_not_mutated(summary_csv, tmp_path):
    before = summary_csv.read_bytes()
    plot.render(summary_csv, "gain-vs-mtx", tmp_path / "fig.png")
    assert summary_csv.read_bytes() == before


def test_unknown_kind_rejected(summary_csv, tmp_path, capsys):
    with pytest.raises(SystemExit) as err:
        plot.main(["--summary", str(summary_csv), "--kind", "pie-chart",
                   "--out", str(tmp_path / "x.png")])
    assert err.value.code == 2
    assert "invalid choice" in capsys.readouterr().err
