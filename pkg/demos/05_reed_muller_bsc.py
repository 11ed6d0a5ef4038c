"""Reed-Muller codes on the binary symmetric channel."""
from __future__ import annotations

from noisecube.rmcodes import (bsc_block_error, exact_block_error, family_threshold_report,
                               rm_code, threshold, weight_distribution)

p = 0.05
print(f"rate threshold at p={p}: {threshold(p):.5f}")
print("RM(1,3) weights:", weight_distribution(rm_code(1, 3)).counts)

code = rm_code(1, 3)
sim = bsc_block_error(code, p, 50_000, seed=0, confidence=0.99)
print(f"RM(1,3): simulated {sim.block_error_rate:.5f} [{sim.ci_low:.5f}, {sim.ci_high:.5f}], "
      f"exact {exact_block_error(code, p):.5f}")

rep = family_threshold_report([(1, m) for m in range(3, 7)], p, trials=20_000)
for c in rep.cases:
    print({k: c[k] for k in c if k in ("description", "rate", "block_error_rate", "below_threshold", "pass")})
