"""The Hoelder inequality needs its factor 2 for Luxemburg norms.

With theta(t) = t^2/2 the complementary function is again t^2/2.  For
h = m = chi[0,1] both norms are 1/sqrt(2), so the product is 1/2 while the
integral of h m is 1: the constant-free form fails with ratio exactly 2.
"""

from hkorlicz import young as Y
from hkorlicz.funcspec import Box, indicator
from hkorlicz.hkint import hk_integrate
from hkorlicz.norms import luxemburg_norm

theta = Y.scaled_power(2, 0.5)
phi = Y.complementary(theta)
h = indicator(Box((0.0,), (1.0,)), Box((0.0,), (2.0,)))

lhs = hk_integrate(h * h).value
nh = luxemburg_norm(h, theta).value
nm = luxemburg_norm(h, phi).value
print(f"phi(1) = {phi(1.0):.6f}, phi(3) = {phi(3.0):.6f}   (t^2/2 gives 0.5 and 4.5)")
print(f"integral |h m| = {lhs:.6f}")
print(f"||h||_theta * ||m||_phi = {nh:.6f} * {nm:.6f} = {nh * nm:.6f}")
print(f"ratio = {lhs / (nh * nm):.6f}; the factor-2 form holds: {lhs <= 2 * nh * nm + 1e-4}")
