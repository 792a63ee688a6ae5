"""Acceptance suite: one test (and one printed PASS/FAIL line) per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion lines.

Monte Carlo scale is controlled by BANDITLAB_ACCEPTANCE:

* ``quick`` (default): 20000 replications per cell on the feasible instances,
  point tolerance 0.15 in log space;
* ``full``: the benchmark's 100000 replications, point tolerance 0.10.

The infeasible instance always uses its benchmark count of 10000 replications.
Worker processes default to the machine's CPU count (BANDITLAB_THREADS
overrides); results are identical for every worker count.
"""

import math
import os

import numpy as np
import pytest

from banditlab import (
    build_instance,
    classify_instance,
    estimate_error,
    reject_arm,
    run_classical_sr,
    run_constrained_sr,
    sr_schedule,
    sweep,
    true_Delta,
)
from banditlab.algorithms import logbar
from banditlab.cli import main
from banditlab.model import BivariateGaussianArm, BanditInstance, EstimatorState, NonUniqueOptimalError

FULL = os.environ.get("BANDITLAB_ACCEPTANCE", "quick").lower() == "full"
FEASIBLE_RUNS = 100000 if FULL else 20000
INFEASIBLE_RUNS = 10000
POINT_TOL = 0.10 if FULL else 0.15
THREADS = int(os.environ.get("BANDITLAB_THREADS", os.cpu_count() or 1))
SEED = 20250810
HORIZONS = tuple(range(1000, 10001, 1000))

# Benchmark reference values at T=1000 on instance-a (natural-log error rates).
REF_CSR_1000 = -1.78958184198028
REF_IF_1000 = -1.35088860798934


def report(criterion: str, ok: bool, detail: str = ""):
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


def series(sweep_result, algorithm):
    records = [r for r in sweep_result.records if r.algorithm == algorithm]
    return sorted(records, key=lambda r: r.T)


def cis_overlap(a, b):
    return not (a.ci_hi < b.ci_lo or b.ci_hi < a.ci_lo)


def run_sweep(name, runs):
    return sweep(
        build_instance(name),
        ["csr", "if"],
        HORIZONS,
        runs,
        base_seed=SEED,
        parallelism=THREADS,
        instance_id=name,
    )


@pytest.fixture(scope="module")
def sweep_a():
    return run_sweep("instance-a", FEASIBLE_RUNS)


@pytest.fixture(scope="module")
def sweep_b():
    return run_sweep("instance-b", FEASIBLE_RUNS)


@pytest.fixture(scope="module")
def sweep_c():
    return run_sweep("instance-c", FEASIBLE_RUNS)


@pytest.fixture(scope="module")
def sweep_d():
    return run_sweep("instance-d", INFEASIBLE_RUNS)


def test_mode_banner():
    print(
        f"acceptance mode: {'full' if FULL else 'quick'} "
        f"(feasible runs={FEASIBLE_RUNS}, tolerance=±{POINT_TOL}, threads={THREADS})"
    )


def test_schedule_oracle(rng=None):
    ok = (
        sr_schedule(3, 1000).n == (0, 250, 374)
        and sr_schedule(2, 100).n == (0, 49)
        and sr_schedule(4, 10000).n == (0, 1579, 2105, 3157)
    )
    rng = np.random.default_rng(SEED)
    violations = 0
    for _ in range(10**4):
        K = int(rng.integers(2, 65))
        T = int(rng.integers(K + 1, 100001))
        n = sr_schedule(K, T).n
        if sum(n[1:-1]) + 2 * n[-1] > T:
            violations += 1
    report(
        "schedule oracle",
        ok and violations == 0,
        f"hand values match, budget invariant violations: {violations}/10000",
    )


def test_gap_hardness_oracle():
    instance = build_instance("instance-a")
    gap = math.sqrt(0.5) * abs(1.0 - 0.95)
    delta12 = true_Delta(instance, 0, 1)
    analysis = classify_instance(instance)
    rel = lambda x, y: abs(x - y) / abs(y)
    ok = (
        rel(delta12.delta, math.sqrt(0.5) * 4.0) <= 1e-12
        and rel(delta12.Delta, gap) <= 1e-12
        and rel(analysis.H1, 2.0 / gap**2) <= 1e-12
        and rel(analysis.H1, 1600.0) <= 1e-12
        and rel(analysis.H2, 3.0 / gap**2) <= 1e-12
        and rel(analysis.H2, 2400.0) <= 1e-12
    )
    rng = np.random.default_rng(SEED + 1)
    checked = sandwich_failures = 0
    while checked < 1000:
        K = int(rng.integers(2, 9))
        means = np.column_stack([rng.uniform(0, 4, K), rng.uniform(0, 2, K)])
        arms = [BivariateGaussianArm(m) for m in means]
        inst = BanditInstance(arms, tau=float(rng.uniform(0.2, 1.8)), a1=0.5, a2=0.5)
        try:
            an = classify_instance(inst)
        except NonUniqueOptimalError:
            continue
        if not math.isfinite(an.H1):
            continue
        if not (an.H2 / 2 <= an.H1 * (1 + 1e-12) and an.H1 <= logbar(K) * an.H2 * (1 + 1e-12)):
            sandwich_failures += 1
        checked += 1
    report(
        "gap/hardness oracle",
        ok and sandwich_failures == 0,
        f"H1={analysis.H1:.6f} H2={analysis.H2:.6f}, "
        f"sandwich failures: {sandwich_failures}/1000",
    )


def test_tie_break_unit_tests():
    def state_from(estimates):
        state = EstimatorState(len(estimates))
        for i, est in enumerate(estimates):
            state.update(i, est)
        return state

    first = reject_arm(
        state_from([(2.0, 1.4), (1.0, 3.8), (4.0, 1.0)]), [0, 1, 2],
        tau=1.8, a1=1.0, a2=1.0,
    )
    second = reject_arm(
        state_from([(0.5, 2.1), (3.0, 0.5), (4.0, 0.5)]), [0, 1, 2],
        tau=1.8, a1=1.0, a2=1.0,
    )
    report(
        "tie-break unit tests",
        first == 1 and second == 2,
        f"tie scenario rejects arm {first + 1} (want 2), "
        f"gap scenario rejects arm {second + 1} (want 3)",
    )


def test_concentration_property():
    rng = np.random.default_rng(SEED + 2)
    trials = 10**5
    worst = ""
    ok = True
    for n in (10, 100):
        means = rng.standard_normal((trials, n)).mean(axis=1)
        for gap in (0.25, 0.5, 1.0):
            freq = float((np.abs(means) >= gap).mean())
            bound = min(1.0, 2.0 * math.exp(-0.5 * n * gap * gap))
            slack = 3.0 * math.sqrt(bound * (1.0 - bound) / trials)
            if freq > bound + slack:
                ok = False
                worst = f"n={n} gap={gap}: freq {freq:.5f} > bound {bound:.5f}+{slack:.5f}"
    report("concentration property", ok, worst or "all (n, gap) cells within bound + 3 SE")


def test_tau_sentinel_equivalence():
    rng = np.random.default_rng(SEED + 3)
    mismatches = 0
    for _ in range(10**4):
        means = rng.uniform(0, 3, size=(5, 2))
        arms = [BivariateGaussianArm(m, ((1.0, 0.5), (0.5, 1.0))) for m in means]
        instance = BanditInstance(arms, tau=1e9)
        T = int(rng.integers(6, 301))
        seed = int(rng.integers(2**63))
        a = run_constrained_sr(instance, T, np.random.default_rng(seed), trace=True)
        b = run_classical_sr(instance, T, np.random.default_rng(seed), trace=True)
        same_outputs = (a.recommended_arm, a.feasibility_flag) == (
            b.recommended_arm,
            b.feasibility_flag,
        )
        same_trace = [(r.phase, r.rejected, r.j_hat) for r in a.trace] == [
            (r.phase, r.rejected, r.j_hat) for r in b.trace
        ]
        if not (same_outputs and same_trace):
            mismatches += 1
    report("tau-sentinel equivalence", mismatches == 0, f"mismatches: {mismatches}/10000")


def test_reproducibility_across_thread_counts(tmp_path):
    args = [
        "run", "--instance", "instance-a", "--algorithms", "csr,if",
        "--horizons", "1000,2000", "--runs", "2000", "--seed", str(SEED),
    ]
    blobs = []
    for label, threads in (("t1", 1), ("t4", 4), ("tmax", os.cpu_count() or 1)):
        out = tmp_path / f"{label}.csv"
        assert main(args + ["--threads", str(threads), "--out", str(out)]) == 0
        blobs.append(out.read_bytes())
    ok = blobs[0] == blobs[1] == blobs[2]
    report(
        "reproducibility",
        ok,
        f"CSV bytes identical across thread counts 1/4/{os.cpu_count() or 1}: {ok}",
    )


def test_fig5a_point_reproduction(sweep_a):
    csr = series(sweep_a, "csr")[0]
    inf = series(sweep_a, "if")[0]
    assert csr.T == inf.T == 1000
    ok_csr = abs(csr.log_e_hat - REF_CSR_1000) <= POINT_TOL
    ok_if = abs(inf.log_e_hat - REF_IF_1000) <= POINT_TOL
    report(
        "fig5a point reproduction",
        ok_csr and ok_if,
        f"csr log={csr.log_e_hat:.4f} (want {REF_CSR_1000:.4f}±{POINT_TOL}), "
        f"if log={inf.log_e_hat:.4f} (want {REF_IF_1000:.4f}±{POINT_TOL})",
    )


def test_fig5a_decay_rate_separation(sweep_a):
    slopes = {}
    for algorithm in ("csr", "if"):
        records = series(sweep_a, algorithm)
        ts = np.array([r.T for r in records if math.isfinite(r.log_e_hat)], dtype=float)
        logs = np.array([r.log_e_hat for r in records if math.isfinite(r.log_e_hat)])
        assert len(ts) >= 2, f"{algorithm}: too many zero-error cells to fit a slope"
        slopes[algorithm] = float(np.polyfit(ts, logs, 1)[0])
    ok = slopes["csr"] <= 1.2 * slopes["if"]
    report(
        "fig5a decay-rate separation",
        ok,
        f"slope csr={slopes['csr']:.3e}, if={slopes['if']:.3e}, "
        f"ratio={slopes['csr'] / slopes['if']:.3f} (want >= 1.2)",
    )


def _coincidence(sweep_result):
    worst = None
    for a, b in zip(series(sweep_result, "csr"), series(sweep_result, "if")):
        if not cis_overlap(a, b):
            worst = f"T={a.T}: csr [{a.ci_lo:.5f},{a.ci_hi:.5f}] vs if [{b.ci_lo:.5f},{b.ci_hi:.5f}]"
    return worst


def test_fig5c_fig5d_coincidence(sweep_c, sweep_d):
    worst_c = _coincidence(sweep_c)
    worst_d = _coincidence(sweep_d)
    report(
        "fig5c/5d coincidence",
        worst_c is None and worst_d is None,
        f"instance-c: {worst_c or 'CIs overlap at every horizon'}; "
        f"instance-d: {worst_d or 'CIs overlap at every horizon'}",
    )


def test_monotone_trend(sweep_a, sweep_b, sweep_c, sweep_d):
    # module property, not a stated criterion: e_hat non-increasing in T up to CI overlap
    problems = []
    for name, result in (("a", sweep_a), ("b", sweep_b), ("c", sweep_c), ("d", sweep_d)):
        for algorithm in ("csr", "if"):
            records = series(result, algorithm)
            for prev, cur in zip(records, records[1:]):
                if cur.e_hat > prev.e_hat and not cis_overlap(prev, cur):
                    problems.append(f"instance-{name}/{algorithm} rises at T={cur.T}")
    report("monotone trend (property)", not problems, "; ".join(problems) or
           "e_hat non-increasing up to CI overlap on instances a-d")


def test_fig5b_ordering(sweep_b):
    csr = series(sweep_b, "csr")
    inf = series(sweep_b, "if")
    problems = []
    for a, b in zip(csr, inf):
        if not (a.e_hat <= b.e_hat or cis_overlap(a, b)):
            problems.append(f"csr above if at T={a.T}")
    for records in (csr, inf):
        for prev, cur in zip(records, records[1:]):
            # strict decrease, with a CI-overlap allowance for Monte Carlo noise
            if not (cur.e_hat < prev.e_hat or cis_overlap(prev, cur)):
                problems.append(f"{records[0].algorithm} not decreasing at T={cur.T}")
        if not records[-1].e_hat < records[0].e_hat:
            problems.append(f"{records[0].algorithm} endpoints not decreasing")
    report(
        "fig5b ordering",
        not problems,
        "; ".join(problems)
        or f"csr below if throughout; endpoint drops "
        f"csr {csr[0].e_hat:.4f}->{csr[-1].e_hat:.4f}, "
        f"if {inf[0].e_hat:.4f}->{inf[-1].e_hat:.4f}",
    )
