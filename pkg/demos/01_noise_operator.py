"""Noise on the cube: per-coordinate folding agrees with the Fourier route."""
from __future__ import annotations

import numpy as np

from noisecube import apply_noise, apply_noise_spectral, make_function, norm

rng = np.random.default_rng(0)
f = make_function(5, rng.lognormal(0, 1, 32))
eps = [0.05, 0.1, 0.2, 0.3, 0.45]

folded = apply_noise(f, eps)
spectral = apply_noise_spectral(f, eps)
print("max |fold - spectral| :", np.max(np.abs(folded.values - spectral.values)))
print("mean before / after   :", norm(f, 1), norm(folded, 1))
for q in (2, 4, np.inf):
    print(f"||f||_{q} = {norm(f, q):.6f}   ||T f||_{q} = {norm(folded, q):.6f}")
