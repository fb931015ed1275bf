"""Reference p-values for the statistical battery.

Written directly from the SP 800-22 formulas with numpy/scipy so the C++
implementation has an independent check. Run:

    python3 tests/oracles/sp800_22_oracle.py

and copy the printed values into tests/unit/test_stat_tests.cpp.
"""
import math

import numpy as np
from scipy.special import erfc, gammaincc
from scipy.stats import norm

MASK64 = (1 << 64) - 1


def splitmix_bits(seed, n):
    """Bits of successive SplitMix64 outputs, MSB first."""
    state = seed
    out = []
    while len(out) < n:
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= z >> 31
        out.extend((z >> (63 - i)) & 1 for i in range(64))
    return out[:n]


def monobit(e):
    s = sum(2 * b - 1 for b in e)
    return erfc(abs(s) / math.sqrt(len(e)) / math.sqrt(2))


def block_frequency(e, m):
    n_blocks = len(e) // m
    chi = 4 * m * sum((sum(e[i * m:(i + 1) * m]) / m - 0.5) ** 2 for i in range(n_blocks))
    return gammaincc(n_blocks / 2, chi / 2)


def runs(e):
    n = len(e)
    pi = sum(e) / n
    if abs(pi - 0.5) >= 2 / math.sqrt(n):
        return 0.0
    v = 1 + sum(1 for k in range(1, n) if e[k] != e[k - 1])
    return erfc(abs(v - 2 * n * pi * (1 - pi)) / (2 * math.sqrt(2 * n) * pi * (1 - pi)))


def longest_run(e):
    n = len(e)
    if n < 6272:
        m, lo, hi, pis = 8, 1, 4, [0.2148, 0.3672, 0.2305, 0.1875]
    elif n < 750000:
        m, lo, hi, pis = 128, 4, 9, [0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124]
    else:
        m, lo, hi, pis = 10000, 10, 16, [0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727]
    nb = n // m
    v = [0] * len(pis)
    for i in range(nb):
        block = e[i * m:(i + 1) * m]
        best = run = 0
        for b in block:
            run = run + 1 if b else 0
            best = max(best, run)
        v[min(max(best, lo), hi) - lo] += 1
    chi = sum((v[k] - nb * pis[k]) ** 2 / (nb * pis[k]) for k in range(len(pis)))
    return gammaincc((len(pis) - 1) / 2, chi / 2)


def dft(e):
    n = len(e)
    x = np.array([2 * b - 1 for b in e], dtype=float)
    mod = np.abs(np.fft.fft(x))[: n // 2]
    t = math.sqrt(math.log(1 / 0.05) * n)
    n0 = 0.95 * n / 2
    n1 = int(np.sum(mod < t))
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4)
    return erfc(abs(d) / math.sqrt(2))


def pattern_counts(e, m):
    n = len(e)
    ext = e + e[: m - 1]
    counts = {}
    for i in range(n):
        key = tuple(ext[i:i + m])
        counts[key] = counts.get(key, 0) + 1
    return counts


def psi2(e, m):
    if m <= 0:
        return 0.0
    n = len(e)
    return (2 ** m) / n * sum(c * c for c in pattern_counts(e, m).values()) - n


def serial(e, m):
    p0, p1, p2 = psi2(e, m), psi2(e, m - 1), psi2(e, m - 2)
    d1 = p0 - p1
    d2 = p0 - 2 * p1 + p2
    return gammaincc(2 ** (m - 2), d1 / 2), gammaincc(2 ** (m - 3), d2 / 2)


def phi(e, m):
    if m <= 0:
        return 0.0
    n = len(e)
    return sum((c / n) * math.log(c / n) for c in pattern_counts(e, m).values())


def approximate_entropy(e, m):
    apen = phi(e, m) - phi(e, m + 1)
    chi = 2 * len(e) * (math.log(2) - apen)
    return gammaincc(2 ** (m - 1), chi / 2)


def cusum(e, reverse=False):
    seq = list(reversed(e)) if reverse else e
    n = len(seq)
    s = 0
    z = 0
    for b in seq:
        s += 2 * b - 1
        z = max(z, abs(s))
    total1 = 0.0
    for k in range(int(math.floor((-n / z + 1) / 4)), int(math.floor((n / z - 1) / 4)) + 1):
        total1 += norm.cdf((4 * k + 1) * z / math.sqrt(n)) - norm.cdf((4 * k - 1) * z / math.sqrt(n))
    total2 = 0.0
    for k in range(int(math.floor((-n / z - 3) / 4)), int(math.floor((n / z - 1) / 4)) + 1):
        total2 += norm.cdf((4 * k + 3) * z / math.sqrt(n)) - norm.cdf((4 * k + 1) * z / math.sqrt(n))
    return 1 - total1 + total2


def bits(s):
    return [int(c) for c in s if c in "01"]


E100 = bits("1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000")
E128 = bits("11001100000101010110110001001100111000000000001001001101010100010001001111010110100000001101011111001100111001101101100010110010")

if __name__ == "__main__":
    print("E100 monobit", repr(monobit(E100)))
    print("E100 block_frequency M=10", repr(block_frequency(E100, 10)))
    print("E100 runs", repr(runs(E100)))
    print("E100 dft", repr(dft(E100)))
    print("E100 cusum_forward", repr(cusum(E100)))
    print("E100 cusum_reverse", repr(cusum(E100, True)))
    print("E100 approximate_entropy m=2", repr(approximate_entropy(E100, 2)))
    print("E128 longest_run", repr(longest_run(E128)))
    print("0011011101 serial m=3", serial(bits("0011011101"), 3))
    print("0100110101 approximate_entropy m=3", repr(approximate_entropy(bits("0100110101"), 3)))
    sm = splitmix_bits(42, 20000)
    print("splitmix(42) 20000 bits, default parameters:")
    print("  monobit", repr(monobit(sm)))
    print("  block_frequency M=128", repr(block_frequency(sm, 128)))
    print("  runs", repr(runs(sm)))
    print("  longest_run", repr(longest_run(sm)))
    print("  dft", repr(dft(sm)))
    lg = int(math.floor(math.log2(len(sm))))
    print("  serial m=%d" % min(max(lg - 3, 3), 16), serial(sm, min(max(lg - 3, 3), 16)))
    print("  approximate_entropy m=%d" % min(max(lg - 6, 2), 10), repr(approximate_entropy(sm, min(max(lg - 6, 2), 10))))
    print("  cusum_forward", repr(cusum(sm)))
    print("  cusum_reverse", repr(cusum(sm, True)))
    print("  first 64 bits", "".join(map(str, sm[:64])))
