"""Independent enumeration oracles for the closed-form update kernels.

These walk every tuple of incoming messages explicitly and apply the node
rules directly (any erased input erases a check; a variable seeing both a
0 and a 1 erases), so they share no algebra with the binomial-theorem and
complement closed forms they validate.
"""

from itertools import product

SYMS = (0, 1, 2)  # 0, 1, erasure


def enum_check_update(p_prime: tuple[float, float, float], dc: int) -> tuple[float, float, float]:
    acc = [0.0, 0.0, 0.0]
    for msgs in product(SYMS, repeat=dc - 1):
        w = 1.0
        for m in msgs:
            w *= p_prime[m]
        if 2 in msgs:
            out = 2
        else:
            out = sum(msgs) % 2
        acc[out] += w
    return (acc[0], acc[1], acc[2])


def _variable_out(msgs: tuple[int, ...]) -> int:
    has0 = 0 in msgs
    has1 = 1 in msgs
    if has0 and has1:
        return 2
    if has0:
        return 0
    if has1:
        return 1
    return 2


def enum_variable_update(
    q_prime: tuple[float, float, float], r_prime: tuple[float, float, float], dv: int
) -> tuple[float, float, float]:
    acc = [0.0, 0.0, 0.0]
    for y in SYMS:
        wy = r_prime[y]
        for msgs in product(SYMS, repeat=dv - 1):
            w = wy
            for m in msgs:
                w *= q_prime[m]
            acc[_variable_out((y,) + msgs)] += w
    return (acc[0], acc[1], acc[2])


def enum_tentative_correct(
    q_prime: tuple[float, float, float], r_prime: tuple[float, float, float], dv: int
) -> float:
    acc = 0.0
    for y in SYMS:
        wy = r_prime[y]
        for msgs in product(SYMS, repeat=dv):
            if _variable_out((y,) + msgs) == 0:
                w = wy
                for m in msgs:
                    w *= q_prime[m]
                acc += w
    return acc


def classic_bec_recursion(eps: float, dv: int, dc: int, iters: int) -> list[float]:
    """Fault-free variable-to-check erasure probabilities, x_1 = eps."""
    xs = []
    x = eps
    for _ in range(iters):
        xs.append(x)
        x = eps * (1.0 - (1.0 - x) ** (dc - 1)) ** (dv - 1)
    return xs
