"""Integrating a derivative that is not absolutely integrable.

F(t) = t^2 sin(1/t^2) is differentiable on [0, 1] and F' is unbounded near 0.
The gauge integral of F' recovers F(1) - F(0) = sin 1, while the integral of
|F'| grows without bound as the lower endpoint approaches 0.
"""

import math

from hkorlicz import hk_integrate
from hkorlicz.funcspec import Box, osc_deriv

res = hk_integrate(osc_deriv(), tol=1e-3)
print(f"HK integral of F' on [0,1]: {res.value:.6f}  (sin 1 = {math.sin(1):.6f})")
print(f"  error estimate {res.error:.2e}, {res.cells} cells")

print("\nintegral of |F'| on [a, 1]:")
for a in (1e-1, 3e-2, 1e-2):
    f = osc_deriv(Box((a,), (1.0,)))
    val = hk_integrate(abs(f), tol=1e-3).value
    # |F'| ~ (2/t)|cos(1/t^2)| and |cos| averages 2/pi, so the integral grows like (4/pi) log(1/a)
    print(f"  a = {a:<6g} {val:9.4f}   (4/pi) log(1/a) = {4 / math.pi * math.log(1 / a):.4f}")
