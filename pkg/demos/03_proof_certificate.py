"""Exact-integer certificate for the key polynomial, q = 2..12."""
from __future__ import annotations

from noisecube import certify_range

for cert in certify_range(range(2, 13)):
    status = "ok" if cert.passed else "FAILED " + "; ".join(cert.failures)
    print(f"q={cert.q:2d} degree={cert.degree:3d} branch={cert.p_branch:22s} "
          f"lowest nonzero coefficient={next(c for c in cert.coeffs if c != '0'):>8s}  {status}")
