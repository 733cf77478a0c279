"""Bodies of evidence: belief, plausibility, pignistic probability, entropy.

A ball is drawn from an urn of red and blue balls. Forty percent of the
evidence says "red", the rest only says "red or blue".
"""

from evidential_markov import FrameOfDiscernment, belief, deng_entropy, make_mass, pignistic, plausibility
from evidential_markov.evidence import ALTERNATIVE_METHODS, alt_entropy, bayesian_mass, format_boe, shannon_entropy

urn = FrameOfDiscernment(["R", "B"])
m = make_mass(urn, [({"R"}, 0.4), ({"R", "B"}, 0.6)])

print("body of evidence:")
print(format_boe(m))
for outcome in ("R", "B"):
    print(f"Bel({outcome}) = {belief(m, {outcome}):.2f}   Pl({outcome}) = {plausibility(m, {outcome}):.2f}")

# the undecided 0.6 is split evenly when a point decision is needed
bet = pignistic(m)
print(f"\npignistic: P(R) = {bet['R']:.2f}, P(B) = {bet['B']:.2f}")

print(f"\nDeng entropy: {deng_entropy(m):.4f} bits")
for method in ALTERNATIVE_METHODS:
    print(f"  {method.value:<22} {alt_entropy(m, method):.4f}")

# with only singletons the evidence is an ordinary distribution
coin = bayesian_mass(urn, [0.5, 0.5])
print(f"\nfair coin: Deng {deng_entropy(coin):.4f} = Shannon {shannon_entropy([0.5, 0.5]):.4f}")
