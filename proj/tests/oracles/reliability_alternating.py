"""Six conflict rows alternating between an h1-heavy and an h2-heavy pattern."""
import numpy as np
from reliability_common import reliability

rows = []
masses = []
for i in range(6):
    m = 0.05 + 0.01 * i
    if i % 2 == 0:
        pattern = np.array([0.7, 0.2, 0.1])
    else:
        pattern = np.array([0.1, 0.3, 0.6])
    rows.append(pattern * m)
    masses.append(m)
weights, scores = reliability(rows, masses)
np.set_printoptions(precision=17)
print("masses", [repr(float(m)) for m in masses])
print("weights", [repr(float(x)) for x in weights])
print("scores", [repr(float(x)) for x in scores])
