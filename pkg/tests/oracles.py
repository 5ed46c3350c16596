"""Slow, independent reference implementations used as test oracles.

Nothing here calls the package's elimination code.  Field arithmetic is
schoolbook polynomial multiplication on digit lists; linear algebra is done
by enumerating spans.
"""

from __future__ import annotations

import itertools


# -- field arithmetic from first principles ---------------------------------

def digits(a: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(a % p)
        a //= p
    return out


def undigits(d, p: int) -> int:
    v = 0
    for c in reversed(d):
        v = v * p + c
    return v


def poly_mul(a: int, b: int, p: int, modulus) -> int:
    """a * b in GF(p)[x]/(modulus), elements given as base-p integers."""
    m = len(modulus) - 1
    da, db = digits(a, p, m), digits(b, p, m)
    prod = [0] * (2 * m)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    lead_inv = pow(modulus[-1], p - 2, p)
    for deg in range(2 * m - 1, m - 1, -1):
        c = prod[deg] * lead_inv % p
        if c:
            for k in range(m + 1):
                prod[deg - m + k] = (prod[deg - m + k] - c * modulus[k]) % p
    return undigits(prod[:m], p)


def poly_add(a: int, b: int, p: int, m: int) -> int:
    return undigits([(x + y) % p for x, y in zip(digits(a, p, m), digits(b, p, m))], p)


def has_root_or_factor(poly, p: int) -> bool:
    """Reducibility by brute force over all monic factors of degree <= deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            f = list(low) + [1]
            rem = list(poly)
            for shift in range(deg - d, -1, -1):
                c = rem[shift + d] % p
                if c:
                    for k in range(d + 1):
                        rem[shift + k] = (rem[shift + k] - c * f[k]) % p
            if not any(r % p for r in rem[:d]):
                return True
    return False


# -- span enumeration -----------------------------------------------------------

def span(F, rows) -> set[tuple]:
    """Every linear combination of ``rows`` (list of int lists) over F."""
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        return set()
    n = len(rows[0])
    out = set()
    for coeffs in itertools.product(range(F.order), repeat=len(rows)):
        v = [0] * n
        for c, r in zip(coeffs, rows):
            if c:
                for j in range(n):
                    v[j] = F.add(v[j], F.mul(c, r[j]))
        out.add(tuple(v))
    return out


def brute_rank(F, rows) -> int:
    size = len(span(F, rows)) if rows else 1
    r = 0
    while F.order ** r < size:
        r += 1
    return r


def columns(rows, S) -> list[list[int]]:
    return [[int(r[j]) for j in S] for r in rows]


def all_vectors(F, n: int):
    return itertools.product(range(F.order), repeat=n)


def dual_vectors(F, rows, n: int) -> list[tuple]:
    """Every y with <row, y> = 0 for all rows."""
    out = []
    for y in all_vectors(F, n):
        ok = True
        for r in rows:
            acc = 0
            for a, b in zip(r, y):
                acc = F.add(acc, F.mul(int(a), b))
            if acc:
                ok = False
                break
        if ok:
            out.append(y)
    return out


def brute_is_mrsc(F, G0_rows, G_rows, n: int) -> bool:
    """Definition 1 with ranks read off span sizes."""
    k = len(G_rows)
    for S in itertools.combinations(range(n), k):
        if brute_rank(F, columns(G0_rows, S)) == k and brute_rank(F, columns(G_rows, S)) != k:
            return False
    return True


def brute_cores(F, G_rows, n: int, size: int) -> list[tuple]:
    """Sets S of the given size containing the support of no nonzero dual codeword."""
    duals = [y for y in dual_vectors(F, G_rows, n) if any(y)]
    out = []
    for S in itertools.combinations(range(n), size):
        s = set(S)
        if not any({i for i, v in enumerate(y) if v} <= s for y in duals):
            out.append(S)
    return out


def mat_vec(F, rows, v) -> list[int]:
    out = []
    for r in rows:
        acc = 0
        for a, b in zip(r, v):
            acc = F.add(acc, F.mul(int(a), int(b)))
        out.append(acc)
    return out


def brute_min_weight(F, H_rows, s, n: int, w_max: int):
    """Minimum weight, and all solutions of that weight, of H e = s."""
    s = [int(x) for x in s]
    for w in range(w_max + 1):
        sols = []
        for supp in itertools.combinations(range(n), w):
            for vals in itertools.product(range(1, F.order), repeat=w):
                e = [0] * n
                for i, v in zip(supp, vals):
                    e[i] = v
                if mat_vec(F, H_rows, e) == s:
                    sols.append(tuple(e))
        if sols:
            return w, sols
    return None, []
