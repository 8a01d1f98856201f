"""Dense univariate polynomials over Q as coefficient lists, low degree first."""

from fractions import Fraction


def trim(a):
    a = [Fraction(c) for c in a]
    while a and not a[-1]:
        a.pop()
    return a


def poly_degree(a):
    return len(trim(a)) - 1


def poly_divmod(a, b):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        c = rem[-1] / b[-1]
        quo[shift] = c
        for i, bc in enumerate(b):
            rem[shift + i] -= c * bc
        rem = trim(rem)
    return quo, rem


def poly_exact_div(a, b):
    q, r = poly_divmod(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def poly_gcd(a, b):
    """Monic gcd (the gcd of two zero polynomials is 0)."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return []
    return [c / a[-1] for c in a]
