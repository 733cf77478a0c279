"""One experiment end to end: the narrow-face condition of Townsend et al. (2000).

17% of participants judge the face good. Starting fully hesitant, each group
deliberates for two time units under payoff-driven dynamics; the resulting
evidence, its entropy and the extra uncertainty degree give the disjunction
effect.
"""

from evidential_markov import fit_experiment, initial_state, measure_bpa_cd, measure_bpa_d, run_model
from evidential_markov.datasets import NARROW
from evidential_markov.model import CD_STATES, D_STATES, cd_vector, d_vector

record = NARROW[0]
params, fit = fit_experiment(record)
print(f"fitted payoff rates: k_r = {params.k_r:.5f}, k_w = {params.k_w:.5f} (objective {fit.objective_value:.1e})")

print("\ninitial state:", dict(zip(CD_STATES, (round(float(v), 4) for v in initial_state(record.p_g).probs))))

m_cd = measure_bpa_cd(params)
m_d = measure_bpa_d(m_cd)
print("C-D evidence:   ", dict(zip(CD_STATES, (round(v, 4) for v in cd_vector(m_cd)))))
print("D-alone evidence:", dict(zip(D_STATES, (round(v, 4) for v in d_vector(m_d)))))

r = run_model(params)
print(f"\nDeng entropy C-D {r.e_cd:.4f}, D-alone {r.e_d:.4f} -> gamma {r.gamma:.4f}")
print(f"P(A|G) {r.p_a_given_g:.4f}  P(A|B) {r.p_a_given_b:.4f}")
print(f"P(A) categorized first {r.p_cd_attack:.4f}, decision alone {r.p_d_attack:.4f}")
print(f"disjunction effect {r.dis:.4f}  (observed {record.observed_dis:.2f}, published model {record.em_row.dis})")

baseline = run_model(params, gamma_override=0.0)
print(f"classical baseline (gamma = 0): {baseline.dis:.1e}")
