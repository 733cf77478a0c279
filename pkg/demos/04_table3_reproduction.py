"""Model versus observation for every narrow-face experiment.

Rates are fitted per experiment to the published model predictions, then the
full pipeline is rerun. Pass --include-wide to also see the wide faces, which
have no published model row and are fitted to the observed data instead.
"""

import sys

from evidential_markov import RunConfig, run_table3, summary_report
from evidential_markov.datasets import BUNDLED

records = [r for r in BUNDLED if r.is_narrow or "--include-wide" in sys.argv]
rows = run_table3(records, RunConfig())
print(summary_report(rows).text)

print("\nfitted rates:")
for row in rows:
    print(f"  {row.record.name:<15} {row.record.face_type}  k_r {row.params.k_r:.4f}  k_w {row.params.k_w:.4f}")
