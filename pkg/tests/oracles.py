"""Independent reference computations shared by several test modules."""

import math

import numpy as np


def chamber_oracle(E_max):
    """Levels from geometry alone: lattice vectors strictly inside the Weyl chamber.

    k ranges over integer 4-vectors whose entries share one parity, with
    k1 > k2 + k3 + k4 and k2 > k3 > k4 > 0, and |k|^2 <= 4 E_max.
    """
    cap = 4 * E_max
    out = set()
    k4 = 1
    while k4 * k4 <= cap:
        for k3 in range(k4 + 1, math.isqrt(cap) + 1):
            for k2 in range(k3 + 1, math.isqrt(cap) + 1):
                rest = cap - k2 * k2 - k3 * k3 - k4 * k4
                if rest < 0:
                    break
                k1 = np.arange(k2 + k3 + k4 + 1, math.isqrt(rest) + 1)
                k1 = k1[(k1 - k2) % 2 == 0]
                if (k2 - k3) % 2 or (k3 - k4) % 2:
                    continue
                out.update((int(a), k2, k3, k4) for a in k1)
        k4 += 1
    return out
