"""Arbitrary-precision simultaneous root finding (Aberth iteration).

Coefficients come in as exact rationals; roots go out as mpmath complex
values at a requested decimal precision, each certified by a backward
error bound: |p(z)| <= 10^(-precision/2) * max|coeff| * max(1,|z|)^deg.
"""

from __future__ import annotations

import mpmath as mp

from .algebra import UsageError


class NumericError(RuntimeError):
    """Root iteration failed to converge; carries the residuals seen."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or []


class ComplexValue:
    """A complex number pinned to an explicit working precision."""

    __slots__ = ("real", "imag", "precision")

    def __init__(self, real, imag, precision: int):
        if precision < 16:
            raise UsageError("precision must be at least 16 digits")
        self.real = real
        self.imag = imag
        self.precision = precision

    def to_mpc(self):
        return mp.mpc(self.real, self.imag)

    def __repr__(self):
        return "ComplexValue(%s, %s, dps=%d)" % (self.real, self.imag, self.precision)


def _horner(coeffs, z):
    # coeffs ascending; evaluate with Horner from the top
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def find_roots(coeffs, precision: int = 50, max_iterations: int = 400):
    """All complex roots of sum(coeffs[k] * t^k), coeffs exact rationals.

    Deterministic: initial points sit on a circle of radius
    1 + max|a_i/a_n|, rotated by a fixed irrational angle, so repeated
    runs give bit-identical output.  Raises NumericError if the backward
    error bound is not met within the iteration budget.
    """
    if precision < 16:
        raise UsageError("precision must be at least 16 digits")
    degree = len(coeffs) - 1
    while degree >= 0 and coeffs[degree] == 0:
        degree -= 1
    if degree < 1:
        raise UsageError("root finding needs degree >= 1 with nonzero leading coefficient")
    coeffs = coeffs[: degree + 1]

    guard = 10 + degree
    with mp.workdps(precision + guard):
        an = coeffs[degree]
        cs = [mp.mpf(int(c.numerator)) / mp.mpf(int(c.denominator)) for c in coeffs]
        ratios = [abs(cs[i] / cs[degree]) for i in range(degree)]
        radius = 1 + (max(ratios) if ratios else mp.mpf(0))
        # fixed offset of 1/sqrt(2) turns: irrational, so no starting point
        # ever coincides with a symmetric root configuration
        offset = mp.mpf(2) * mp.pi / mp.sqrt(2)
        points = [
            radius * mp.exp(mp.mpc(0, 2 * mp.pi * k / degree + offset))
            for k in range(degree)
        ]
        dcs = [cs[k] * k for k in range(1, degree + 1)]
        tol = mp.mpf(10) ** (-(precision + 5))

        for _ in range(max_iterations):
            moved = mp.mpf(0)
            new_points = list(points)
            for i in range(degree):
                z = points[i]
                pz = _horner(cs, z)
                if pz == 0:
                    continue
                dz = _horner(dcs, z)
                if dz == 0:
                    # nudge off a critical point; deterministic direction
                    new_points[i] = z + tol
                    moved = max(moved, abs(tol))
                    continue
                newton = pz / dz
                rep = mp.mpc(0)
                for j in range(degree):
                    if j != i:
                        diff = z - points[j]
                        if diff == 0:
                            diff = tol
                        rep += 1 / diff
                denom = 1 - newton * rep
                step = newton if denom == 0 else newton / denom
                new_points[i] = z - step
                moved = max(moved, abs(step))
            points = new_points
            if moved < tol * max(1, float(radius)):
                break

        max_coeff = max(abs(c) for c in cs)
        bound_scale = mp.mpf(10) ** (-(precision / 2.0))
        residuals = []
        ok = True
        for z in points:
            res = abs(_horner(cs, z))
            bound = bound_scale * max_coeff * max(mp.mpf(1), abs(z)) ** degree
            residuals.append(res)
            if not res <= bound:
                ok = False
        if not ok:
            raise NumericError(
                "root iteration failed the backward-error certificate",
                residuals=[mp.nstr(r, 8) for r in residuals],
            )
        # deterministic output order: by real part, then imaginary part
        points.sort(key=lambda t: (t.real, t.imag))
        return [ComplexValue(z.real, z.imag, precision) for z in points]
