"""Independent reference values for the unit tests.

Builds the full 2^m-state adoption chain and evaluates expm(G t) in
multiprecision, so no code is shared with the C++ solvers. Prints a C++
header on stdout; regenerate with

    python3 tools/oracles/full_chain.py > tests/oracle_values.hpp
"""

import mpmath as mp

mp.mp.dps = 40


def adoption_curve(p, q, times):
    """Expected adoption fraction; q[i][j] is the rate from i onto j."""
    m = len(p)
    n = 1 << m
    gen = mp.zeros(n, n)
    for state in range(n):  # bit j set: j adopted
        for j in range(m):
            if state >> j & 1:
                continue
            rate = mp.mpf(p[j]) + sum(mp.mpf(q[k][j]) for k in range(m) if state >> k & 1)
            gen[state, state | 1 << j] += rate
            gen[state, state] -= rate
    out = []
    for t in times:
        row = mp.expm(gen * t)[0, :]
        out.append(sum(row[s] * bin(s).count("1") for s in range(n)) / m)
    return out


def bass(t, p, q):
    e = mp.exp(-(p + q) * t)
    return (1 - e) / (1 + q / p * e)


def f_1d(t, p, q):
    return 1 - mp.exp(-(p + q) * t + q / p * (1 - mp.exp(-p * t)))


def emit(name, values):
    body = ", ".join(mp.nstr(v, 20) for v in values)
    print(f"inline constexpr std::array {name}{{{body}}};")


def circle(m, q_left, q_right):
    q = [[0.0] * m for _ in range(m)]
    for j in range(m):
        q[(j - 1) % m][j] += q_left[j]
        q[(j + 1) % m][j] += q_right[j]
    return q


TIMES = [0.5, 1.0, 3.0]

CASES = {
    "kM2": ([0.1, 0.25], [[0, 0.3], [0.15, 0]]),
    "kM3": ([0.05, 0.21, 0.13], [[0, 0.31, 0.11], [0.07, 0, 0.43], [0.23, 0.17, 0]]),
    "kM4Sparse": ([0.11, 0.0, 0.053, 0.217], [[0, 0.5, 0, 0], [0, 0, 0.33, 0], [0.1, 0, 0, 0.2], [0, 0.4, 0, 0]]),
    "kTwoSidedM5": ([0.113, 0.297, 0.052, 0.208, 0.149],
                    circle(5, [0.104, 0.213, 0.287, 0.061, 0.246], [0.192, 0.0, 0.117, 0.305, 0.158])),
    "kOneSidedM6": ([0.107, 0.293, 0.051, 0.212, 0.149, 0.397],
                    circle(6, [0.311, 0.187, 0.503, 0.094, 0.262, 0.358], [0.0] * 6)),
}

print("#pragma once")
print()
print("// Generated by tools/oracles/full_chain.py; do not edit by hand.")
print()
print("#include <array>")
print()
print("namespace oracle {")
print()
emit("kTimes", TIMES)
for name, (p, q) in CASES.items():
    emit(name, adoption_curve(p, q, TIMES))
emit("kBass", [bass(mp.mpf(1), mp.mpf("0.1"), mp.mpf("0.4"))])
emit("kF1d", [f_1d(mp.mpf(1), mp.mpf("0.1"), mp.mpf("0.4"))])
emit("kM2SpecialHetHom", adoption_curve([0.2, 0.0], [[0, 0.4], [0, 0]], [1.0])
     + adoption_curve([0.1, 0.1], [[0, 0.2], [0.2, 0]], [1.0]))
emit("kM2Equal", adoption_curve([0.2, 0.0], [[0, 0.2], [0, 0]], [1.0])
     + adoption_curve([0.1, 0.1], [[0, 0.1], [0.1, 0]], [1.0]))
print()
print("}  // namespace oracle")
