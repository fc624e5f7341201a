"""Dense univariate polynomials over a field, constant term first.

Coefficients may be any exact field elements supporting ``+ - * /`` and
equality with ``0`` (Fractions, number-field elements).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

UPoly = list


def trim(a: Sequence[Any]) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def add(a: Sequence[Any], b: Sequence[Any]) -> list:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a: Sequence[Any], b: Sequence[Any]) -> list:
    return add(a, [-c for c in b])


def scale(a: Sequence[Any], c: Any) -> list:
    return trim([x * c for x in a])


def mul(a: Sequence[Any], b: Sequence[Any]) -> list:
    if not a or not b:
        return []
    out: list = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def divmod_(a: Sequence[Any], b: Sequence[Any]) -> tuple[list, list]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a)
    q: list = [0] * max(len(r) - len(b) + 1, 0)
    inv = 1 / b[-1] if not isinstance(b[-1], int) else Fraction(1, b[-1])
    while len(r) >= len(b):
        c = r[-1] * inv
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] = r[i + k] - c * y
        r = trim(r)
    return trim(q), r


def rem(a: Sequence[Any], b: Sequence[Any]) -> list:
    return divmod_(a, b)[1]


def monic(a: Sequence[Any]) -> list:
    a = trim(a)
    if not a:
        return a
    lead = a[-1]
    inv = 1 / lead if not isinstance(lead, int) else Fraction(1, lead)
    return [x * inv for x in a]


def gcd(a: Sequence[Any], b: Sequence[Any]) -> list:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def ext_gcd(a: Sequence[Any], b: Sequence[Any]) -> tuple[list, list, list]:
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], [], []
    lead = r0[-1]
    inv = 1 / lead if not isinstance(lead, int) else Fraction(1, lead)
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def evaluate(a: Sequence[Any], x: Any) -> Any:
    acc: Any = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def derivative(a: Sequence[Any]) -> list:
    return trim([a[i] * i for i in range(1, len(a))])


def compose(a: Sequence[Any], b: Sequence[Any]) -> list:
    """a(b(t))."""
    acc: list = []
    for c in reversed(a):
        acc = add(mul(acc, b), [c])
    return acc


def resultant(a: Sequence[Any], b: Sequence[Any]) -> Any:
    """Resultant by the Euclidean remainder sequence (field coefficients)."""
    a, b = trim(a), trim(b)
    if not a or not b:
        return 0
    res: Any = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * b[0] ** da
        r = rem(a, b)
        if not r:
            return 0
        dr = len(r) - 1
        res = res * b[-1] ** (da - dr)
        if da % 2 == 1 and db % 2 == 1:
            res = -res
        a, b = b, r
