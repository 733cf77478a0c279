"""Which uncertainty measure best predicts the disjunction effect?

The rates stay at their Deng-entropy fits; only the measure used for the
extra uncertainty degree changes. SE is the absolute gap between predicted
and observed disjunction effect; a smaller mean is better.
"""

from evidential_markov import RunConfig, entropy_bakeoff, run_table3
from evidential_markov.datasets import NARROW
from evidential_markov.evidence import ALL_METHODS
from evidential_markov.experiments import method_summaries

table = run_table3(NARROW, RunConfig())
rows = entropy_bakeoff(NARROW, ALL_METHODS, table=table)

print(f"{'method':<22} {'mean Dis':>9} {'mean SE':>9}")
for s in method_summaries(rows):
    print(f"{s.method.value:<22} {s.mean_dis:9.4f} {s.mean_se:9.4f}")

risky = sorted({r.method.value for r in rows if r.gamma_exceeds_half})
print("\nmeasures with gamma >= 0.5 somewhere (risk of P(A) > 1):", ", ".join(risky) or "none")
print("Klir-Ramer and Klir-Parviz share one formula, so their rows coincide.")
