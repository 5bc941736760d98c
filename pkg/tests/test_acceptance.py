"""Acceptance gate: the properties this package promises, at their tolerances.

Each test pins one headline guarantee end to end, mostly against synthetic
signals with known answers. They are intentionally redundant with the unit
tests; these are the numbers that must hold before a release.
"""
import json
import os
import re
import time

import numpy as np

from fractalsig import (
    analytic_h_binomial,
    analyze,
    analyze_full,
    classify_correlation,
    daubechies_filters,
    default_q_grid,
    default_s_grid,
    dwt_multilevel,
    fluctuation_function,
    gen_binomial_cascade,
    gen_fgn,
    gen_white_noise,
    idwt_multilevel,
    scaling_exponents,
    singularity_spectrum,
    wavelet_coherence,
)
from fractalsig.cli import main
from fractalsig.synth import standard_normals, uniforms
from reference import naive_fluctuations


def test_criterion_1_hurst_recovery_monofractal():
    # 20 seeds per target H at N = 2^16, first-order detrending, default grids
    start = time.perf_counter()
    for target in (0.3, 0.5, 0.7):
        estimates = np.array(
            [analyze(gen_fgn(target, 16, seed=seed)).hurst for seed in range(20)])
        assert abs(estimates.mean() - target) <= 0.03
        assert np.max(np.abs(estimates - target)) <= 0.1
    assert time.perf_counter() - start < 120.0


def test_criterion_2_multifractal_oracle():
    assert analytic_h_binomial(1.0, 0.75) == 1.0
    spectrum = analyze(gen_binomial_cascade(0.75, 16))
    h_an = analytic_h_binomial(spectrum.q, 0.75)
    assert np.max(np.abs(spectrum.h - h_an)) <= 0.12
    # analytic width through the same grid and finite differences
    tau_an = scaling_exponents(h_an, spectrum.q)
    _, _, width_an = singularity_spectrum(tau_an, spectrum.q)
    assert abs(spectrum.width - width_an) <= 0.1


def test_criterion_3_width_separation():
    white_widths = np.array(
        [analyze(gen_white_noise(16, seed=seed)).width for seed in range(20)])
    cascade_width = analyze(gen_binomial_cascade(0.75, 16)).width
    assert white_widths.max() <= 0.35
    assert cascade_width >= 1.0
    assert cascade_width - white_widths.max() >= 0.65


def test_criterion_4_classification_thresholds():
    assert classify_correlation(0.6480) == "long_range_correlated"
    assert classify_correlation(0.5048) == "uncorrelated"
    assert classify_correlation(0.4028) == "anti_correlated"


def test_criterion_5_dwt_correctness():
    x = standard_normals(3, 4096)
    for order in (1, 2, 4, 8):
        filt = daubechies_filters(order)
        for levels in (1, 3, 5):
            decomp = dwt_multilevel(x, filt, levels, boundary_mode="periodic")
            rec = idwt_multilevel(decomp, filt)
            assert np.max(np.abs(rec - x)) / np.max(np.abs(x)) <= 1e-10

        decomp = dwt_multilevel(x, filt, 5, boundary_mode="periodic")
        energy = float(decomp.approx @ decomp.approx) + sum(
            float(d @ d) for d in decomp.details)
        assert abs(energy - float(x @ x)) / float(x @ x) <= 1e-9

        # degree-(order-1) polynomial: details vanish away from the boundary
        u = np.linspace(0.0, 1.0, 4096)
        poly = sum((0.3 + 0.7 * k) * u ** k for k in range(order))
        decomp = dwt_multilevel(poly, filt, 3, boundary_mode="symmetric")
        for j, detail in enumerate(decomp.details, start=1):
            margin = 2 * order * 2 ** j
            interior = detail[margin:len(detail) - margin]
            assert np.max(np.abs(interior)) <= 1e-8 * np.max(np.abs(poly))


def test_criterion_6_coherence_identities():
    x = standard_normals(11, 256)
    self_map = wavelet_coherence(x, x)
    valid = ~self_map.invalid
    assert np.max(np.abs(self_map.coherence[valid] - 1.0)) <= 1e-9
    assert np.max(np.abs(self_map.phase[valid])) <= 1e-9

    anti = wavelet_coherence(x, -x)
    assert np.max(np.abs(np.abs(anti.phase[~anti.invalid]) - np.pi)) <= 1e-6

    for k in range(100):
        a = uniforms(1000 + k, 256) - 0.5
        b = uniforms(2000 + k, 256) - 0.5
        pair = wavelet_coherence(a, b)
        values = pair.coherence[~pair.invalid]
        assert values.min() >= 0.0
        assert values.max() <= 1.0 + 1e-12

    y = standard_normals(12, 256)
    xy, yx = wavelet_coherence(x, y), wavelet_coherence(y, x)
    assert np.max(np.abs(xy.coherence - yx.coherence)) <= 1e-9
    scaled = wavelet_coherence(-3.0 * x, 0.02 * y)
    assert np.max(np.abs(scaled.coherence - xy.coherence)) <= 1e-9


def test_criterion_7_brute_force_equivalence():
    x = gen_white_noise(9, seed=4)
    q_grid, s_grid = default_q_grid(), default_s_grid(len(x))
    table = fluctuation_function(np.cumsum(x - x.mean()), q_grid, s_grid, m=1)
    reference = naive_fluctuations(x, q_grid, s_grid, 1)
    assert np.max(np.abs(reference - table.F) / table.F) <= 1e-10


def test_criterion_8_report_table_reproduction(tmp_path, capsys):
    cohorts = [("Normal", 0.65), ("GradeI", 0.56),
               ("GradeII", 0.50), ("GradeIII", 0.40)]
    manifest = tmp_path / "cohorts.tsv"
    manifest.write_text("".join(
        f"{label}\tfgn:H={target},n=14,seed={seed}\n"
        for label, target in cohorts for seed in range(10)))
    assert main(["--out-dir", str(tmp_path), "report", str(manifest)]) == 0

    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 1 + len(cohorts)
    row = re.compile(r"^(\S+)\s+10\s+\d+\.\d{4} ± \d+\.\d{4}\s+\d+\.\d{4} ± \d+\.\d{4}$")
    for line, (label, _) in zip(lines[1:], cohorts):
        match = row.match(line)
        assert match is not None, line
        assert match.group(1) == label

    payload = json.loads((tmp_path / "report.json").read_text())
    means = [group["mean_H"] for group in payload["groups"]]
    assert [group["label"] for group in payload["groups"]] == [c[0] for c in cohorts]
    assert all(a > b for a, b in zip(means, means[1:]))


def test_criterion_9_determinism(tmp_path):
    manifest = tmp_path / "groups.tsv"
    manifest.write_text("A\twhite:n=12,seed=1\nA\twhite:n=12,seed=2\n"
                        "B\tfgn:H=0.7,n=12,seed=3\n")
    runs = []
    for name in ("run1", "run2"):
        out = tmp_path / name
        flows = [
            ["synth", "fgn:H=0.7,n=12,seed=5"],
            ["mfdfa", "cascade:a=0.75,n=12", "fgn:H=0.6,n=12,seed=1"],
            ["dwt", "fgn:H=0.6,n=12,seed=1"],
            ["coherence", "white:n=8,seed=1", "white:n=8,seed=2"],
            ["report", str(manifest)],
        ]
        for flow in flows:
            assert main(["--out-dir", str(out), *flow]) == 0
        runs.append(out)

    first, second = runs
    names = sorted(os.listdir(first))
    assert names == sorted(os.listdir(second))
    assert len(names) >= 9
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes()

    one = analyze(gen_fgn(0.7, 12, seed=3))
    two = analyze(gen_fgn(0.7, 12, seed=3))
    assert np.array_equal(one.h, two.h)
    assert one.width == two.width
