"""Truncated Laurent series in the local parameter at infinity.

A LaurentSeries maps integer exponents of xi to nonzero coefficients
(SparsePoly values in practice; anything with ring arithmetic works).
Exponents at or above the truncation order are unknown rather than zero,
and every operation propagates truncation pessimistically.
"""

from __future__ import annotations

from typing import Callable, Optional

from .numbers import QQ
from .algebra import SparsePoly, UsageError

# effectively "exact": series with finitely many known terms
EXACT = 10 ** 9


class LaurentSeries:
    __slots__ = ("coeffs", "truncation")

    def __init__(self, coeffs: dict, truncation: int = EXACT):
        self.coeffs = {k: v for k, v in coeffs.items() if v and k < truncation}
        self.truncation = truncation

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, truncation: int = EXACT) -> "LaurentSeries":
        return cls({}, truncation)

    @classmethod
    def monomial(cls, coeff, exponent: int, truncation: int = EXACT) -> "LaurentSeries":
        return cls({exponent: coeff}, truncation)

    # -- inspection --------------------------------------------------------

    def __bool__(self):
        return bool(self.coeffs)

    def min_exponent(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def coefficient(self, exponent: int):
        """Known coefficient at an exponent; UsageError past truncation."""
        if exponent >= self.truncation:
            raise UsageError("coefficient at xi^%d is beyond truncation %d" % (exponent, self.truncation))
        return self.coeffs.get(exponent)

    def leading(self):
        k = self.min_exponent()
        if k is None:
            raise UsageError("zero series has no leading term")
        return k, self.coeffs[k]

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.truncation == other.truncation and self.coeffs == other.coeffs

    def __repr__(self):
        items = sorted(self.coeffs)[:6]
        parts = ["xi^%d*(%r)" % (k, self.coeffs[k]) for k in items]
        return "LaurentSeries(%s + O(xi^%s))" % (" + ".join(parts) or "0", self.truncation)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        trunc = min(self.truncation, other.truncation)
        out = {k: v for k, v in self.coeffs.items() if k < trunc}
        for k, v in other.coeffs.items():
            if k >= trunc:
                continue
            if k in out:
                s = out[k] + v
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = v
        return LaurentSeries(out, trunc)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries({k: -v for k, v in self.coeffs.items()}, self.truncation)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not self.coeffs or not other.coeffs:
            # truncation of a product with an (apparently) zero series still
            # reflects the unknown tail of both operands
            trunc = min(
                self.truncation + (other.min_exponent() or 0),
                other.truncation + (self.min_exponent() or 0),
            ) if (self.coeffs or other.coeffs) else min(self.truncation, other.truncation)
            return LaurentSeries({}, trunc)
        a0 = self.min_exponent()
        b0 = other.min_exponent()
        trunc = min(self.truncation + b0, other.truncation + a0, EXACT)
        out = {}
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                k = ka + kb
                if k >= trunc:
                    continue
                v = va * vb
                if k in out:
                    s = out[k] + v
                    if s:
                        out[k] = s
                    else:
                        del out[k]
                else:
                    out[k] = v
        return LaurentSeries(out, trunc)

    def scale(self, value) -> "LaurentSeries":
        if not value:
            return LaurentSeries({}, self.truncation)
        return LaurentSeries({k: v * value for k, v in self.coeffs.items()}, self.truncation)

    def shift(self, offset: int) -> "LaurentSeries":
        return LaurentSeries(
            {k + offset: v for k, v in self.coeffs.items()},
            self.truncation + offset if self.truncation < EXACT else EXACT,
        )

    def power(self, n: int) -> "LaurentSeries":
        if n < 0:
            raise UsageError("negative series power; use inverse")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        if result is None:
            raise UsageError("series power 0 needs an explicit one-element")
        return result

    def truncate(self, order: int) -> "LaurentSeries":
        if order >= self.truncation:
            return self
        return LaurentSeries({k: v for k, v in self.coeffs.items() if k < order}, order)

    # -- division and roots -------------------------------------------------------

    def _leading_constant(self):
        k, lead = self.leading()
        if isinstance(lead, SparsePoly):
            if not lead.is_constant():
                raise UsageError("series leading coefficient is not invertible (non-constant)")
            return k, lead.constant_value(), lead.registry
        return k, lead, None

    def inverse(self) -> "LaurentSeries":
        """Multiplicative inverse; leading coefficient must be a unit."""
        k0, c0, registry = self._leading_constant()
        if c0 == 0:
            raise UsageError("cannot invert series with zero leading coefficient")
        # normalize to f = 1 + t with ord(t) > 0, invert by the recurrence
        # b_m = -(sum over splits), then shift back
        rel_trunc = self.truncation - k0 if self.truncation < EXACT else EXACT
        if rel_trunc >= EXACT:
            rel_trunc = 64  # exact polynomial input: pick a finite window
        inv_c0 = 1 / QQ(c0) if registry is None else None
        one = QQ(1) if registry is None else None

        def to_unit(value):
            if registry is None:
                return value * inv_c0
            return value.scale(1 / c0)

        t = {m - k0: to_unit(v) for m, v in self.coeffs.items() if m != k0}
        out = {}
        if registry is None:
            out[0] = QQ(1)
        else:
            out[0] = SparsePoly.constant(registry, 1)
        for m in range(1, rel_trunc):
            acc = None
            for j, tj in t.items():
                if 0 < j <= m and (m - j) in out:
                    contrib = tj * out[m - j]
                    acc = contrib if acc is None else acc + contrib
            if acc is not None and acc:
                out[m] = -acc
        result = LaurentSeries(out, rel_trunc)
        inv = result.shift(-k0)
        if registry is not None:
            inv = inv.scale(SparsePoly.constant(registry, 1 / QQ(c0)))
        else:
            inv = inv.scale(inv_c0)
        return inv

    def nth_root(self, n: int) -> "LaurentSeries":
        """Principal n-th root via Newton iteration on the series.

        Requires the leading exponent divisible by n and a leading
        coefficient that is an exact rational n-th power.
        """
        if n < 1:
            raise UsageError("nth_root needs n >= 1")
        k0, c0, registry = self._leading_constant()
        if k0 % n:
            raise UsageError("leading exponent %d not divisible by %d" % (k0, n))
        root_c0 = _rational_nth_root(QQ(c0), n)
        rel_trunc = self.truncation - k0 if self.truncation < EXACT else 64

        def const(v):
            return SparsePoly.constant(registry, v) if registry is not None else QQ(v)

        # f = 1 + t after normalization; iterate y <- y - (y^n - f)/(n y^(n-1))
        unit = self.shift(-k0).scale(const(1 / QQ(c0)))
        y = LaurentSeries({0: const(1)}, 1)
        known = 1
        n_const = const(QQ(n))
        while known < rel_trunc:
            known = min(2 * known, rel_trunc)
            f_part = unit.truncate(known)
            y = LaurentSeries(dict(y.coeffs), known)
            err = y.power(n) - f_part
            deriv = y.power(n - 1).scale(n_const) if n > 1 else LaurentSeries({0: const(1)}, known)
            y = y - (err * deriv.inverse()).truncate(known)
        result = y.scale(const(root_c0)).shift(k0 // n)
        final_trunc = rel_trunc + k0 // n if self.truncation < EXACT else result.truncation
        return result.truncate(final_trunc)

    # -- calculus ----------------------------------------------------------------

    def differentiate(self) -> "LaurentSeries":
        out = {}
        for k, v in self.coeffs.items():
            if k == 0:
                continue
            nv = v * QQ(k) if not isinstance(v, SparsePoly) else v.scale(k)
            if nv:
                out[k - 1] = nv
        return LaurentSeries(out, self.truncation - 1 if self.truncation < EXACT else EXACT)

    def integrate(self) -> "LaurentSeries":
        """Term-wise antiderivative with zero constant of integration."""
        if -1 in self.coeffs:
            raise UsageError("series has a xi^-1 term; antiderivative leaves the ring")
        out = {}
        for k, v in self.coeffs.items():
            c = QQ(1, k + 1)
            nv = v.scale(c) if isinstance(v, SparsePoly) else v * c
            if nv:
                out[k + 1] = nv
        return LaurentSeries(out, self.truncation + 1 if self.truncation < EXACT else EXACT)

    # -- mapping --------------------------------------------------------------------

    def map_coefficients(self, fn: Callable) -> "LaurentSeries":
        out = {}
        for k, v in self.coeffs.items():
            nv = fn(v)
            if nv:
                out[k] = nv
        return LaurentSeries(out, self.truncation)

    def text(self) -> str:
        """Serialized as sum( coeff * xi^k ) in ascending exponent order."""
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            body = v.text() if isinstance(v, SparsePoly) else str(v)
            if k == 0:
                parts.append("(%s)" % body)
            else:
                parts.append("(%s)*xi^%d" % (body, k))
        tail = " + O(xi^%d)" % self.truncation if self.truncation < EXACT else ""
        return " + ".join(parts) + tail


def _rational_nth_root(value, n: int):
    """Exact rational n-th root or UsageError."""
    if value == 0:
        return QQ(0)
    sign = 1
    if value < 0:
        if n % 2 == 0:
            raise UsageError("even root of a negative leading coefficient")
        sign = -1
        value = -value
    num = _integer_nth_root(int(value.numerator), n)
    den = _integer_nth_root(int(value.denominator), n)
    return QQ(sign * num, den)


def _integer_nth_root(m: int, n: int) -> int:
    root = round(m ** (1.0 / n))
    for candidate in (root - 1, root, root + 1):
        if candidate >= 0 and candidate ** n == m:
            return candidate
    raise UsageError("leading coefficient %d has no exact integer %d-th root" % (m, n))


def series_arith(a: LaurentSeries, b: Optional[LaurentSeries], op: str, n: int = 0) -> LaurentSeries:
    """Spec-level dispatcher over {add, mul, inverse, nth_root}."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inverse":
        return a.inverse()
    if op == "nth_root":
        return a.nth_root(n)
    raise UsageError("unknown series op %r" % (op,))


# ----------------------------------------------------------------------
# Expansions at the infinite point of a cyclic (n, s)-curve


def substitute_series(poly, series_map: dict, registry) -> LaurentSeries:
    """Substitute Laurent series for some variables of a SparsePoly.

    Variables not in series_map stay symbolic inside the coefficient
    polynomials.  Power computation is memoized per variable.
    """
    idx = {registry.var_index(name): (name, s) for name, s in series_map.items()}
    pow_cache = {}

    def power_of(name, s, e):
        key = (name, e)
        if key not in pow_cache:
            pow_cache[key] = s.power(e)
        return pow_cache[key]

    total = None
    for exp, coeff in poly.terms.items():
        rest = [0] * registry.width
        factor = None
        for i, e in enumerate(exp):
            if not e:
                continue
            if i in idx:
                name, s = idx[i]
                p = power_of(name, s, e)
                factor = p if factor is None else factor * p
            else:
                rest[i] = e
        scalar = SparsePoly(registry, {tuple(rest): coeff})
        if factor is None:
            term = LaurentSeries({0: scalar}, EXACT)
        else:
            term = factor.map_coefficients(lambda v: v * scalar)
        total = term if total is None else total + term
    return total if total is not None else LaurentSeries.zero(EXACT)


def local_expansions(curve, order: int) -> dict:
    """Exact expansions of x, y and every u_i in the local parameter.

    x is exactly xi^-n; y is the n-th root branch of f(x(xi)) with
    leading coefficient +1 at xi^-s; u_i integrates the i-th holomorphic
    numerator over n*y^(n-1) with dx = -n*xi^(-n-1) dxi.  `order` is the
    truncation: coefficients at exponents >= order are unknown.
    """
    n, s = curve.n, curve.s
    if order <= -s:
        raise UsageError("order %d too small to contain the leading y term" % order)
    reg = curve.registry
    one = SparsePoly.constant(reg, 1)

    x_series = LaurentSeries({-n: one})  # exact
    f_series = substitute_series(curve.f_poly, {"x": x_series}, reg)
    y_series = f_series.truncate(order).nth_root(n).truncate(order)

    out = {"x": x_series, "y": y_series}
    # du_i/dxi = g_i(x, y) * (-n xi^(-n-1)) / (n y^(n-1)) = -xi^(-n-1) g_i / y^(n-1)
    y_pow_inv = y_series.power(n - 1).inverse() if n > 1 else LaurentSeries({0: one})
    for i, g_num in enumerate(curve.g_numerators, start=1):
        g_series = substitute_series(g_num, {"x": x_series, "y": y_series}, reg)
        du = g_series * y_pow_inv
        du = du.shift(-n - 1).map_coefficients(lambda v: -v)
        u = du.truncate(order - 1).integrate()
        out["u%d" % i] = u
    return out
