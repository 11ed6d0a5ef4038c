"""Random nonnegative functions and subcube indicators against the sharpened bound."""
from __future__ import annotations

import math

from noisecube.margin import lambda_old, lambda_param, subcube_cases, sweep_main_inequality

print(" q    eps   lambda_new  lambda_old")
for q in (2, 3, 4, math.inf):
    for e in (0.1, 0.25, 0.4):
        old = lambda_old(q, e) if q != math.inf else float("nan")
        print(f"{q!s:>4} {e:5.2f}  {lambda_param(q, e):10.6f}  {old:10.6f}")

cases = sweep_main_inequality(range(1, 7), [2, 3, math.inf], [0.1, 0.3], count=50, seed=1)
print(f"\n{len(cases)} random cases, smallest slack {min(c.margin for c in cases):.3g}")

tight = subcube_cases(4, [2, 4], [0.2])
print(f"{len(tight)} subcube cases, largest |slack| {max(abs(c.margin) for c in tight):.3g}  (equality)")
