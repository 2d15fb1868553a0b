"""Exact multivariate polynomials and rational functions over Q.

Just enough algebra to transcribe parametric families and closed-form
invariants, differentiate them, and evaluate them exactly. Expressions are
parsed from ordinary arithmetic strings with :mod:`ast`; ``^`` is accepted as
a power operator.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Mapping, Union

__all__ = ["Poly", "RatFunc", "parse"]

Number = Union[int, Fraction]


class Poly:
    """Sparse polynomial: ``{((var, exp), ...): coeff}`` with sorted monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms: dict[tuple, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    self.terms[mono] = Fraction(c)

    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set[str]:
        return {v for mono in self.terms for v, _ in mono}

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        other = _as_poly(other)
        out: dict[tuple, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        return (self - _as_poly(other)).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def diff(self, name: str) -> "Poly":
        out: dict[tuple, Fraction] = {}
        for mono, c in self.terms.items():
            exps = dict(mono)
            e = exps.get(name, 0)
            if e:
                exps[name] = e - 1
                new = tuple(sorted((v, k) for v, k in exps.items() if k))
                out[new] = out.get(new, 0) + c * e
        return Poly(out)

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms.items():
            t = c
            for v, e in mono:
                t *= Fraction(values[v]) ** e
            total += t
        return total

    def substitute(self, values: Mapping[str, Number]) -> "Poly":
        """Replace some variables by numbers."""
        out: dict[tuple, Fraction] = {}
        for mono, c in self.terms.items():
            rest = []
            for v, e in mono:
                if v in values:
                    c = c * Fraction(values[v]) ** e
                else:
                    rest.append((v, e))
            key = tuple(rest)
            out[key] = out.get(key, 0) + c
        return Poly(out)

    def degree_in(self, name: str) -> int:
        if self.is_zero():
            return -1
        return max(dict(m).get(name, 0) for m in self.terms)

    def coeffs_in(self, name: str) -> list[Fraction]:
        """High-to-low coefficients of a polynomial in ``name`` alone."""
        extra = self.variables() - {name}
        if extra:
            raise ValueError(f"unsubstituted variables {sorted(extra)}")
        deg = max(self.degree_in(name), 0)
        out = [Fraction(0)] * (deg + 1)
        for mono, c in self.terms.items():
            out[deg - dict(mono).get(name, 0)] += c
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (-sum(e for _, e in m), m)):
            c = self.terms[mono]
            name = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
            if not name:
                parts.append(str(c))
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append("-" + name)
            else:
                parts.append(f"{c}*{name}")
        return " + ".join(parts).replace("+ -", "- ")


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


class RatFunc:
    """Quotient ``num / den`` of polynomials; not reduced to lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    def __add__(self, other) -> "RatFunc":
        other = _as_rat(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-_as_rat(other))

    def __rsub__(self, other) -> "RatFunc":
        return _as_rat(other) - self

    def __mul__(self, other) -> "RatFunc":
        other = _as_rat(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = _as_rat(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return _as_rat(other) / self

    def __pow__(self, k: int) -> "RatFunc":
        if k >= 0:
            return RatFunc(self.num**k, self.den**k)
        return RatFunc(self.den ** (-k), self.num ** (-k))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def diff(self, name: str) -> "RatFunc":
        return RatFunc(self.num.diff(name) * self.den - self.num * self.den.diff(name), self.den * self.den)

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        den = self.den.evaluate(values)
        if den == 0:
            raise ZeroDivisionError("pole")
        return self.num.evaluate(values) / den

    def substitute(self, values: Mapping[str, Number]) -> "RatFunc":
        return RatFunc(self.num.substitute(values), self.den.substitute(values))

    def __repr__(self) -> str:
        return f"({self.num!r}) / ({self.den!r})"


def _as_rat(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc(_as_poly(x))


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def parse(text: str) -> RatFunc:
    """Parse an arithmetic expression in named variables into a :class:`RatFunc`.

    >>> parse("(4*a^2*b - 2*a*b - a + b)/(a*b)").evaluate({"a": 1, "b": 1})
    Fraction(2, 1)
    """
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    return _walk(tree.body)


def _walk(node) -> RatFunc:
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                raise ValueError("exponents must be integer literals")
            return _walk(node.left) ** (sign * exp.value)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ValueError(f"unsupported operator {type(node.op).__name__}")
        return op(_walk(node.left), _walk(node.right))
    if isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            return -_walk(node.operand)
        if isinstance(node.op, ast.UAdd):
            return _walk(node.operand)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return RatFunc(Poly.const(node.value))
    if isinstance(node, ast.Name):
        return RatFunc(Poly.var(node.id))
    raise ValueError(f"unsupported expression element {ast.dump(node)}")


def lcm_denominator(values) -> int:
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out
