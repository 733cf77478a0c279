"""Acceptance criteria 1-9, one printed PASS/FAIL line each.

Lines are also collected and repeated in the terminal summary.
"""

import math

import numpy as np

from evidential_markov.calibration import FitTarget, fit_rates, forward
from evidential_markov.datasets import BUNDLED
from evidential_markov.evidence import (
    ALL_METHODS,
    EntropyMethod,
    FrameOfDiscernment,
    bayesian_mass,
    belief,
    deng_entropy,
    make_mass,
    pignistic,
    plausibility,
    shannon_entropy,
)
from evidential_markov.experiments import entropy_bakeoff, method_summaries
from evidential_markov.markov import IntensityMatrix, matrix_exponential, total_probability_demo, two_state_generator
from evidential_markov.model import cd_mass, cd_vector, d_mass, d_vector, measure_bpa_cd, measure_bpa_d, predict

from oracles import (
    PRINTED_CD,
    PRINTED_D,
    PRINTED_E_CD,
    PRINTED_E_D,
    random_column_generator,
    random_mass_assignments,
    rk4_transition,
)

CASES = 500


def report(log, number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    log.append(line)
    assert ok, line


def test_criterion_1_golden_bpas(townsend_fit, acceptance_log):
    params, _ = townsend_fit
    m_cd = measure_bpa_cd(params)
    cd_err = max(abs(a - b) for a, b in zip(cd_vector(m_cd), PRINTED_CD))
    d_err = max(abs(a - b) for a, b in zip(d_vector(measure_bpa_d(m_cd)), PRINTED_D))
    report(acceptance_log, 1, cd_err <= 5e-3 and d_err <= 5e-3,
           f"golden BPAs: max |err| C-D {cd_err:.2e}, D {d_err:.2e} (tol 5e-3)")


def test_criterion_2_golden_entropies(acceptance_log):
    e_cd, e_d = deng_entropy(cd_mass(PRINTED_CD)), deng_entropy(d_mass(PRINTED_D))
    ok = abs(e_cd - PRINTED_E_CD) <= 1e-3 and abs(e_d - PRINTED_E_D) <= 1e-3
    report(acceptance_log, 2, ok, f"Deng entropies {e_cd:.4f} / {e_d:.4f} vs 2.8715 / 4.1868 (tol 1e-3)")


def test_criterion_3_golden_prediction(acceptance_log):
    gamma = abs((PRINTED_E_D - PRINTED_E_CD) / (PRINTED_E_D + PRINTED_E_CD))
    r = predict(cd_mass(PRINTED_CD), d_mass(PRINTED_D), gamma)
    ok = (
        abs(gamma - 0.1864) <= 1e-3
        and abs(r.p_d_attack - 0.6589) <= 1e-3
        and abs(r.p_cd_attack - 0.57) <= 5e-3
        and abs(r.dis - 0.0889) <= 1e-3
    )
    report(acceptance_log, 3, ok,
           f"gamma {gamma:.4f}, P_D(A) {r.p_d_attack:.4f}, P_CD(A) {r.p_cd_attack:.4f}, Dis {r.dis:.4f}")


PUBLISHED = {
    "townsend2000": (0.0889, 5e-3),
    "wang2016_exp1": (0.0759, 5e-3),
    "wang2016_exp2": (0.0678, 5e-3),
    "wang2016_exp3": (0.0596, 5e-3),
    "average": (0.0747, 5e-3),
    "busemeyer2009": (0.0816, 1e-2),
}


def test_criterion_4_table3(narrow_table, acceptance_log):
    worst, ok = [], True
    for row in narrow_table:
        value, tol = PUBLISHED[row.record.name]
        err = abs(row.result.dis - value) if row.result else math.inf
        ok = ok and err <= tol
        worst.append(f"{row.record.name} {err:.1e}")
    assert len(narrow_table) == len(PUBLISHED)
    report(acceptance_log, 4, ok, "published Dis |err|: " + ", ".join(worst))


def test_criterion_5_classical_null(bundled_gamma_zero, acceptance_log):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        a, b = rng.uniform(0, 5, size=2)
        plus = rng.uniform()
        d = total_probability_demo(two_state_generator(a, b), rng.uniform(0, 10), (plus, 1 - plus))
        worst = max(worst, abs(d.law_residual))
    rows = bundled_gamma_zero
    dis = [abs(r.result.dis) if r.result else math.inf for r in rows]
    ok = worst <= 1e-12 and max(dis) <= 1e-12 and len(rows) == len(BUNDLED)
    report(acceptance_log, 5, ok,
           f"max residual {worst:.1e} over 1000 cases; max |Dis| at gamma=0 {max(dis):.1e} over {len(rows)} records")


def test_criterion_6_dynamics_oracle(acceptance_log):
    rng = np.random.default_rng(6)
    worst_ode = worst_semi = 0.0
    for n in (3, 6):
        ks = np.stack([random_column_generator(rng, n) for _ in range(100)])
        ts = rng.uniform(0, 5, size=100)
        reference = rk4_transition(ks, ts, steps=4000)
        for k, t, ref in zip(ks, ts, reference):
            km = IntensityMatrix(k)
            worst_ode = max(worst_ode, np.max(np.abs(matrix_exponential(km, t).entries - ref)))
            s, u = rng.uniform(0, 5, size=2)
            product = matrix_exponential(km, s).entries @ matrix_exponential(km, u).entries
            worst_semi = max(worst_semi, np.max(np.abs(matrix_exponential(km, s + u).entries - product)))
    report(acceptance_log, 6, worst_ode <= 1e-6 and worst_semi <= 1e-9,
           f"200 generators: max |expm - RK4| {worst_ode:.1e} (tol 1e-6), semigroup {worst_semi:.1e} (tol 1e-9)")


def test_criterion_7_property_suites(acceptance_log):
    rng = np.random.default_rng(7)
    failures = {k: 0 for k in ("normalization", "bel<=pl", "shannon", "pignistic", "marginal", "total-prob")}
    for _ in range(CASES):
        n = int(rng.integers(1, 6))
        labels = [f"x{i}" for i in range(n)]
        frame = FrameOfDiscernment(labels)
        assigned = random_mass_assignments(rng, labels)
        m = make_mass(frame, list(assigned.items()))
        if abs(math.fsum(v for _, v in m.masses) - 1.0) > 1e-12:
            failures["normalization"] += 1
        for subset in assigned:
            if belief(m, subset) > plausibility(m, subset) + 1e-12:
                failures["bel<=pl"] += 1
        if abs(math.fsum(pignistic(m).probs) - 1.0) > 1e-12:
            failures["pignistic"] += 1

        probs = rng.dirichlet(np.ones(n))
        bayes = bayesian_mass(frame, probs)
        if abs(deng_entropy(bayes) - shannon_entropy(pignistic(bayes).probs)) > 1e-12:
            failures["shannon"] += 1

        m_cd = cd_mass(rng.dirichlet(np.ones(6)))
        ag, ug, wg, ab, ub, wb = cd_vector(m_cd)
        m_d = measure_bpa_d(m_cd)
        if np.max(np.abs(np.array(d_vector(m_d)) - [ag + ab, ug + ub, wg + wb])) > 1e-12:
            failures["marginal"] += 1
        r = predict(m_cd, m_d, rng.uniform(0, 0.5), strict=False)
        if abs(r.p_cd_attack - (r.p_good * r.p_a_given_g + (1 - r.p_good) * r.p_a_given_b)) > 1e-9:
            failures["total-prob"] += 1
    total = sum(failures.values())
    report(acceptance_log, 7, total == 0,
           f"{CASES} cases per property, failures: " + ", ".join(f"{k}={v}" for k, v in failures.items()))


def test_criterion_8_bakeoff_ranking(narrow_table, acceptance_log):
    five = [r for r in narrow_table if r.record.name != "average"]
    rows = entropy_bakeoff([r.record for r in five], ALL_METHODS, table=five)
    summary = method_summaries(rows)
    ranking = ", ".join(f"{s.method.value} {s.mean_se:.4f}" for s in summary)
    report(acceptance_log, 8, summary[0].method is EntropyMethod.DENG and len(summary) == 7,
           f"mean SE ranking: {ranking}")


def test_criterion_9_calibration_round_trip(acceptance_log):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(50):
        k_r, k_w = np.exp(rng.uniform(np.log(0.05), np.log(5.0), size=2))
        goal = forward(k_r, k_w)
        fit = fit_rates(FitTarget(tuple(goal / goal.sum())))
        worst = max(worst, float(np.max(np.abs(forward(fit.k_r, fit.k_w) - goal))))
    report(acceptance_log, 9, worst <= 1e-5, f"50 random rate pairs: worst component error {worst:.1e} (tol 1e-5)")
