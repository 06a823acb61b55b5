"""Weak and strong Orlicz norms side by side.

For indicators the two norms coincide with 1 / theta^{-1}(1 / volume); for
functions with a spread-out distribution the weak norm is strictly smaller.
"""

from hkorlicz import young as Y
from hkorlicz.norms import luxemburg_norm, weak_norm
from hkorlicz.verifier import default_corpus

corpus = default_corpus()
names = ["chi[0,1]", "step3", "x", "|x|^0.5", "sin(2pi x)", "osc'[0.1,1]", "x1*x2"]
thetas = ["power1", "power2", "expm"]

print(f"{'f':14s}" + "".join(f"{t:>22s}" for t in thetas))
print(f"{'':14s}" + "".join(f"{'weak':>11s}{'strong':>11s}" for _ in thetas))
for fname in names:
    f = corpus.functions[fname]
    row = ""
    for tname in thetas:
        th = corpus.young[tname]
        row += f"{weak_norm(f, th).value:11.5f}{luxemburg_norm(f, th).value:11.5f}"
    print(f"{fname:14s}{row}")

print("\nclosed form for chi[0,1], theta = expm:", 1 / Y.y_inverse(Y.expm(), 1.0))
