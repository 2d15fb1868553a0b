"""Binary forms with integer coefficients.

A form of degree ``D`` is a tuple ``c`` of length ``D + 1`` where ``c[i]``
multiplies ``X**(D-i) * Y**i``. Setting ``Y = 1`` turns the same tuple into the
high-to-low coefficient list of the affine polynomial, which is how the
Sylvester routines read it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

from .core_arith import factorize

Form = tuple


def form_add(a: Sequence, b: Sequence) -> Form:
    if len(a) != len(b):
        raise ValueError("forms of different degree")
    return tuple(x + y for x, y in zip(a, b))


def form_sub(a: Sequence, b: Sequence) -> Form:
    if len(a) != len(b):
        raise ValueError("forms of different degree")
    return tuple(x - y for x, y in zip(a, b))


def form_scale(a: Sequence, k) -> Form:
    return tuple(k * x for x in a)


def form_mul(a: Sequence, b: Sequence) -> Form:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def form_pow(a: Sequence, k: int) -> Form:
    result: Form = (1,)
    base = tuple(a)
    while k:
        if k & 1:
            result = form_mul(result, base)
        k >>= 1
        if k:
            base = form_mul(base, base)
    return result


def form_eval(c: Sequence, x, y):
    D = len(c) - 1
    xp = [1] * (D + 1)
    yp = [1] * (D + 1)
    for i in range(1, D + 1):
        xp[i] = xp[i - 1] * x
        yp[i] = yp[i - 1] * y
    return sum(coeff * xp[D - i] * yp[i] for i, coeff in enumerate(c) if coeff)


def form_compose(f: Sequence, a: Sequence, b: Sequence) -> Form:
    """``f(A, B)`` for forms ``A``, ``B`` of a common degree."""
    if len(a) != len(b):
        raise ValueError("substituted forms must share a degree")
    d = len(f) - 1
    da = len(a) - 1
    apow = [(1,)]
    bpow = [(1,)]
    for _ in range(d):
        apow.append(form_mul(apow[-1], a))
        bpow.append(form_mul(bpow[-1], b))
    out = [0] * (d * da + 1)
    for i, coeff in enumerate(f):
        if coeff:
            term = form_mul(apow[d - i], bpow[i])
            for j, t in enumerate(term):
                out[j] += coeff * t
    return tuple(out)


def form_dX(c: Sequence) -> Form:
    D = len(c) - 1
    if D == 0:
        return (0,)
    return tuple((D - i) * c[i] for i in range(D))


def form_dY(c: Sequence) -> Form:
    D = len(c) - 1
    if D == 0:
        return (0,)
    return tuple(i * c[i] for i in range(1, D + 1))


def content(values: Sequence[int]) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, int(v))
    return g


def primitive(c: Sequence[int], sign_from: str = "first") -> Form:
    """Divide by the content; make the first (or last) nonzero entry positive."""
    g = content(c)
    if g == 0:
        raise ValueError("zero form has no primitive part")
    out = [x // g for x in c]
    scan = out if sign_from == "first" else out[::-1]
    lead = next(x for x in scan if x)
    if lead < 0:
        out = [-x for x in out]
    return tuple(out)


def is_zero(c: Sequence) -> bool:
    return not any(c)


def divide_by_linear(h: Sequence[int], a: int, b: int, p: Optional[int] = None) -> Optional[Form]:
    """Exact quotient of ``h`` by ``b*X - a*Y`` or ``None`` if it does not divide.

    ``(a, b)`` must be primitive (over ``F_p`` when ``p`` is given: not both
    divisible by ``p``). Over the integers, Gauss's lemma makes the quotient
    integral whenever it exists over the rationals.
    """
    D = len(h) - 1
    if D < 1:
        return None
    # h_i = b q_i - a q_{i-1}, with q of degree D-1
    if p is not None:
        a %= p
        b %= p
        h = [x % p for x in h]
    q = [0] * D
    if b != 0:
        binv = pow(b, -1, p) if p else None
        prev = 0
        for i in range(D):
            num = h[i] + a * prev
            if p:
                qi = num * binv % p
            else:
                if num % b:
                    return None
                qi = num // b
            q[i] = qi
            prev = qi
        tail = h[D] + a * prev
        if (tail % p if p else tail) != 0:
            return None
        return tuple(q)
    # b == 0: the linear form is -a*Y with a a unit (+-1 over Z)
    if (h[0] % p if p else h[0]) != 0:
        return None
    ainv = pow(a, -1, p) if p else None
    for i in range(1, D + 1):
        if p:
            q[i - 1] = (-h[i] * ainv) % p
        else:
            if h[i] % a:
                return None
            q[i - 1] = -h[i] // a
    return tuple(q)


def linear_multiplicity(h: Sequence[int], a: int, b: int, p: Optional[int] = None) -> tuple[int, Form]:
    """Largest ``k`` with ``(b*X - a*Y)**k`` dividing ``h``, and the cofactor."""
    if is_zero([x % p for x in h] if p else h):
        raise ValueError("multiplicity in the zero form")
    k = 0
    cur = tuple(x % p for x in h) if p else tuple(h)
    while True:
        nxt = divide_by_linear(cur, a, b, p)
        if nxt is None:
            return k, cur
        cur = nxt
        k += 1


def divisors(n: int) -> list[int]:
    n = abs(n)
    divs = [1]
    for prime, e in factorize(n).items():
        divs = [d * prime**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def rational_roots(h: Sequence[int]) -> list[tuple[int, int]]:
    """Distinct roots ``(a, b)`` in P^1(Q) of a nonzero integer form.

    Each root is primitive with ``b > 0``, or ``(1, 0)``.
    """
    h = list(h)
    if is_zero(h):
        raise ValueError("roots of the zero form")
    roots: list[tuple[int, int]] = []
    # Y | h  <=>  h vanishes at infinity = (1, 0)
    if h[0] == 0:
        roots.append((1, 0))
        while h and h[0] == 0:
            h = h[1:]
    # X | h  <=>  root at (0, 1)
    if h and h[-1] == 0:
        roots.append((0, 1))
        while h and h[-1] == 0:
            h = h[:-1]
    if len(h) >= 2:
        g = content(h)
        h = [x // g for x in h]
        # h(a, b) = 0 with gcd(a, b) = 1  =>  a | h[-1] and b | h[0]
        for b in divisors(h[0]):
            for a0 in divisors(h[-1]):
                for a in (a0, -a0):
                    if math.gcd(a, b) == 1 and form_eval(h, a, b) == 0:
                        roots.append((a, b))
    return sorted(set(roots), key=_root_key)


def _root_key(r: tuple[int, int]):
    a, b = r
    if b == 0:
        return (1, Fraction(0))
    return (0, Fraction(a, b))


def sylvester_matrix(a: Sequence, b: Sequence) -> list[list]:
    """Sylvester matrix of two polynomials given high-to-low with formal
    degrees ``len - 1`` (leading zeros allowed)."""
    m = len(a) - 1
    n = len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(a) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(b) + [0] * (size - n - 1 - i))
    return rows


def det_bareiss(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    m = [list(map(int, row)) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_rational(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant of a matrix with rational entries."""
    den = 1
    for row in matrix:
        for x in row:
            den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    scaled = [[int(Fraction(x) * den) for x in row] for row in matrix]
    return Fraction(det_bareiss(scaled), den ** len(matrix))


def resultant(a: Sequence, b: Sequence) -> Fraction | int:
    """Sylvester resultant for formal degrees ``len(a)-1`` and ``len(b)-1``."""
    mat = sylvester_matrix(a, b)
    if all(isinstance(x, int) for row in mat for x in row):
        return det_bareiss(mat)
    return det_rational(mat)


def lagrange_interpolate(xs: Sequence[int], ys: Sequence) -> list[Fraction]:
    """Coefficients (low-to-high) of the unique polynomial of degree
    ``< len(xs)`` through the given points."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        # basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j)
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            new = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k + 1] += c
                new[k] -= c * xs[j]
            basis = new
            denom *= xs[i] - xs[j]
        scale = Fraction(ys[i]) / denom
        for k, c in enumerate(basis):
            coeffs[k] += c * scale
    return coeffs
