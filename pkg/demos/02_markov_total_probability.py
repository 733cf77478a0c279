"""A classical Markov chain cannot produce a disjunction effect.

Two states, + and -. Whatever the rates, time and initial mix, the chance of
ending in + from an unknown start equals the mix of the known-start chances.
"""

import numpy as np

from evidential_markov.markov import matrix_exponential, total_probability_demo, two_state_generator

k = two_state_generator(1.0, 0.5)
print("generator (columns sum to zero):")
print(k.entries)

print(f"\n{'t':>5} {'p(+|+)':>8} {'p(+|-)':>8} {'p(+|?)':>8} {'residual':>10}")
for t in (0.0, 0.5, 1.0, 2.0, 5.0):
    d = total_probability_demo(k, t, (0.3, 0.7))
    print(f"{t:5.1f} {d.p_plus_given_plus:8.4f} {d.p_plus_given_minus:8.4f} {d.p_plus_unknown:8.4f} {d.law_residual:10.1e}")

rng = np.random.default_rng(0)
worst = max(
    abs(total_probability_demo(two_state_generator(*rng.uniform(0, 5, 2)), rng.uniform(0, 10), (p, 1 - p)).law_residual)
    for p in rng.uniform(size=1000)
)
print(f"\nlargest residual over 1000 random chains: {worst:.1e}")

# semigroup: deliberating 0.7 then 1.3 is the same as deliberating 2.0
two = matrix_exponential(k, 0.7) @ matrix_exponential(k, 1.3)
print(f"semigroup gap: {np.max(np.abs(two.entries - matrix_exponential(k, 2.0).entries)):.1e}")
