"""Independent brute-force oracles for the test suite.

Everything here decides questions by literal big-integer arithmetic (or raw
trial division of the literal value), deliberately avoiding the package's
exponent-vector machinery so the two routes can check each other.
"""

import math
from itertools import combinations_with_replacement


def factor_literal(n: int) -> dict[int, int]:
    """Trial-division factorization of a literal big integer."""
    out: dict[int, int] = {}
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def exponent_in_literal_factorial(n: int, p: int) -> int:
    """Exponent of p in n! by repeatedly dividing the literal value."""
    val = math.factorial(n)
    e = 0
    while val % p == 0:
        val //= p
        e += 1
    return e


def brute_census(n1_max: int, t_max: int, s_max: int) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (lhs, rhs) with non-increasing sides, entries >= 2, disjoint sides,
    rhs[0] > lhs[0], and equal big-integer factorial products."""
    sols = set()
    rhs_list: list[tuple[int, ...]] = []

    def grow(prefix):
        rhs_list.append(tuple(prefix))
        if len(prefix) < s_max:
            for v in range(prefix[-1], 1, -1):
                grow(prefix + [v])

    for n1 in range(3, n1_max + 1):
        grow([n1])
    for rhs in rhs_list:
        target = math.prod(math.factorial(n) for n in rhs)
        n1 = rhs[0]
        for t in range(1, t_max + 1):
            for combo in combinations_with_replacement(range(2, n1), t):
                lhs = tuple(sorted(combo, reverse=True))
                if set(lhs) & set(rhs):
                    continue
                if math.prod(math.factorial(a) for a in lhs) == target:
                    sols.add((lhs, rhs))
    return sols


def brute_delta_search(k_list, x_max: int, t_max: int) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Big-integer oracle for the fixed-gap consecutive-product search."""
    s = len(k_list)
    sols = set()

    def xs_iter(prefix):
        if len(prefix) == s:
            yield tuple(prefix)
            return
        hi = prefix[-1] if prefix else x_max
        for v in range(hi, 0, -1):
            yield from xs_iter(prefix + [v])

    for xs in xs_iter([]):
        if xs[0] < 3:
            continue
        target = 1
        for x, k in zip(xs, k_list):
            target *= math.prod(range(x, x + k))
        for t in range(1, t_max + 1):
            for combo in combinations_with_replacement(range(2, xs[0]), t):
                if math.prod(math.factorial(a) for a in combo) == target:
                    sols.add((xs, tuple(sorted(combo, reverse=True))))
    return sols


def classify_brute(lhs, rhs) -> str:
    return "trivial" if any(abs(a - n) == 1 for a in lhs for n in rhs) else "nontrivial"
