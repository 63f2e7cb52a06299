"""Exact linear algebra over the rationals.

Small dense systems only (rank <= 8 ambient spaces), so plain Gaussian
elimination with `fractions.Fraction` entries is entirely adequate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vec = tuple[Fraction, ...]


def vec(values) -> Vec:
    return tuple(Fraction(v) for v in values)


def vadd(x: Vec, y: Vec) -> Vec:
    return tuple(a + b for a, b in zip(x, y, strict=True))


def vsub(x: Vec, y: Vec) -> Vec:
    return tuple(a - b for a, b in zip(x, y, strict=True))


def vscale(c, x: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * a for a in x)


def vzero(n: int) -> Vec:
    return (Fraction(0),) * n


def dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(x, y, strict=True)), Fraction(0))


def mat_vec(m: Sequence[Sequence], x: Sequence[Fraction]) -> Vec:
    return tuple(dot(row, x) for row in m)


def solve(a, b) -> list[Fraction]:
    """Solve the square system a x = b exactly; raises on singular a."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def span_coefficients(basis: Sequence[Vec], gram, v: Vec) -> list[Fraction] | None:
    """Coefficients of v in `basis`, or None if v lies outside the span.

    `gram` is the ambient bilinear form; the normal equations
    (B^T G B) x = B^T G v are solved exactly and the candidate verified.
    """
    k = len(basis)
    gv = [mat_vec(gram, b) for b in basis]
    a = [[dot(gv[i], basis[j]) for j in range(k)] for i in range(k)]
    rhs = [dot(gv[i], v) for i in range(k)]
    x = solve(a, rhs)
    recon = vzero(len(v))
    for c, b in zip(x, basis):
        recon = vadd(recon, vscale(c, b))
    if recon != tuple(v):
        return None
    return x


def project_onto_span(basis: Sequence[Vec], gram, v: Vec) -> Vec:
    """Orthogonal projection of v onto span(basis) w.r.t. the gram form."""
    k = len(basis)
    if k == 0:
        return vzero(len(v))
    gv = [mat_vec(gram, b) for b in basis]
    a = [[dot(gv[i], basis[j]) for j in range(k)] for i in range(k)]
    rhs = [dot(gv[i], v) for i in range(k)]
    x = solve(a, rhs)
    out = vzero(len(v))
    for c, b in zip(x, basis):
        out = vadd(out, vscale(c, b))
    return out


def in_integer_span(basis: Sequence[Vec], gram, v: Vec) -> bool:
    """Whether v is an integer combination of `basis` (exact test)."""
    coeffs = span_coefficients(basis, gram, v)
    if coeffs is None:
        return False
    return all(c.denominator == 1 for c in coeffs)
