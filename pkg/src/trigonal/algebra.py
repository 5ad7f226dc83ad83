"""Sparse multivariate polynomials over exact rationals.

A polynomial is a mapping from exponent vectors to nonzero rational
coefficients, tied to a VariableRegistry that fixes variable order, Sato
weights and parity under u -> -u.  The registry order also fixes the
canonical (graded lexicographic) monomial order used for all serialized
output, so identical inputs always print identically.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

from .numbers import QQ, ZERO, qq_str

# Per-variable exponents must fit in 16 bits; the largest exponent in any
# shipped or generated polynomial is 21.  Larger values signal a bug.
MAX_EXPONENT = 0xFFFF

PARITY_EVEN = "even"
PARITY_ODD = "odd"
PARITY_NONE = "none"


class UsageError(ValueError):
    """Caller violated a documented precondition."""


class InternalError(RuntimeError):
    """An internal consistency check failed (bad curve data or a bug)."""


class VariableRegistry:
    """Ordered variable table with Sato weights and parity flags."""

    def __init__(self, names: Iterable[str], weights: Iterable[int], parities: Iterable[str]):
        self.names = tuple(names)
        self.weights = tuple(int(w) for w in weights)
        self.parities = tuple(parities)
        if len(set(self.names)) != len(self.names):
            raise UsageError("duplicate variable names in registry")
        if not (len(self.names) == len(self.weights) == len(self.parities)):
            raise UsageError("registry fields have mismatched lengths")
        for p in self.parities:
            if p not in (PARITY_EVEN, PARITY_ODD, PARITY_NONE):
                raise UsageError("bad parity flag %r" % (p,))
        self.index = {n: i for i, n in enumerate(self.names)}
        self.width = len(self.names)
        self._zero_exp = (0,) * self.width

    def __repr__(self):
        return "VariableRegistry(%s)" % (",".join(self.names),)

    def var_index(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UsageError("unknown variable %r" % (name,)) from None

    def exponent(self, name: str, power: int = 1) -> tuple:
        e = [0] * self.width
        e[self.var_index(name)] = power
        return tuple(e)

    def monomial_weight(self, exp: tuple) -> int:
        return sum(e * w for e, w in zip(exp, self.weights))

    def monomial_parity(self, exp: tuple) -> int:
        """Degree of the monomial in odd-parity variables, mod 2."""
        total = 0
        for e, p in zip(exp, self.parities):
            if e and p == PARITY_ODD:
                total += e
            elif e and p == PARITY_NONE:
                raise UsageError("variable with undefined parity in monomial")
        return total % 2

    def sort_key(self, exp: tuple):
        """Graded lexicographic key; canonical output sorts descending."""
        return (sum(exp), exp)


def _check_exp(exp: tuple) -> tuple:
    for e in exp:
        if e < 0 or e > MAX_EXPONENT:
            raise InternalError("exponent %d outside 16-bit range" % e)
    return exp


class SparsePoly:
    """Immutable-by-convention sparse polynomial over a registry.

    Stored terms never have zero coefficients.  Arithmetic between
    polynomials on different registries is a usage error.
    """

    __slots__ = ("registry", "terms")

    def __init__(self, registry: VariableRegistry, terms: Optional[dict] = None):
        self.registry = registry
        self.terms = terms if terms is not None else {}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, registry: VariableRegistry) -> "SparsePoly":
        return cls(registry, {})

    @classmethod
    def constant(cls, registry: VariableRegistry, value) -> "SparsePoly":
        c = QQ(value)
        if c == 0:
            return cls(registry, {})
        return cls(registry, {registry._zero_exp: c})

    @classmethod
    def variable(cls, registry: VariableRegistry, name: str, power: int = 1, coeff=1) -> "SparsePoly":
        c = QQ(coeff)
        if c == 0:
            return cls(registry, {})
        return cls(registry, {_check_exp(registry.exponent(name, power)): c})

    @classmethod
    def from_terms(cls, registry: VariableRegistry, items: Iterable) -> "SparsePoly":
        terms = {}
        for exp, coeff in items:
            c = QQ(coeff)
            if c == 0:
                continue
            _check_exp(exp)
            prev = terms.get(exp)
            if prev is None:
                terms[exp] = c
            else:
                s = prev + c
                if s:
                    terms[exp] = s
                else:
                    del terms[exp]
        return cls(registry, terms)

    # -- basics --------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.registry is other.registry and self.terms == other.terms

    def __hash__(self):
        raise TypeError("SparsePoly is not hashable")

    def __repr__(self):
        s = self.text()
        if len(s) > 120:
            s = s[:117] + "..."
        return "SparsePoly(%s)" % s

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.registry._zero_exp in self.terms)

    def constant_value(self):
        if not self.terms:
            return ZERO
        if self.is_constant():
            return self.terms[self.registry._zero_exp]
        raise UsageError("polynomial is not constant")

    def _require_same_registry(self, other: "SparsePoly"):
        if self.registry is not other.registry:
            raise UsageError("registry mismatch between polynomial operands")

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, type(QQ(0)))):
            other = SparsePoly.constant(self.registry, other)
        self._require_same_registry(other)
        a, b = self.terms, other.terms
        if not a:
            return SparsePoly(self.registry, dict(b))
        if not b:
            return SparsePoly(self.registry, dict(a))
        out = dict(a)
        for exp, c in b.items():
            prev = out.get(exp)
            if prev is None:
                out[exp] = c
            else:
                s = prev + c
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        return SparsePoly(self.registry, out)

    def __neg__(self):
        return SparsePoly(self.registry, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, type(QQ(0)))):
            other = SparsePoly.constant(self.registry, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, type(QQ(0)))):
            return self.scale(other)
        self._require_same_registry(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return SparsePoly(self.registry, {})
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(map(int.__add__, ea, eb))
                c = ca * cb
                prev = out.get(exp)
                if prev is None:
                    out[exp] = c
                else:
                    s = prev + c
                    if s:
                        out[exp] = s
                    else:
                        del out[exp]
        for exp in out:
            _check_exp(exp)
        return SparsePoly(self.registry, out)

    __rmul__ = __mul__

    def scale(self, value) -> "SparsePoly":
        c = QQ(value)
        if c == 0:
            return SparsePoly(self.registry, {})
        return SparsePoly(self.registry, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise UsageError("negative polynomial power")
        result = SparsePoly.constant(self.registry, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus and structure -----------------------------------------

    def differentiate(self, var: str) -> "SparsePoly":
        """Exact partial derivative with respect to a registry variable."""
        i = self.registry.var_index(var)
        out = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if e == 0:
                continue
            nexp = exp[:i] + (e - 1,) + exp[i + 1:]
            prev = out.get(nexp)
            nc = c * e
            if prev is None:
                out[nexp] = nc
            else:
                s = prev + nc
                if s:
                    out[nexp] = s
                else:
                    del out[nexp]
        return SparsePoly(self.registry, out)

    def degree_in(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = self.registry.var_index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def coefficients_in(self, var: str) -> list:
        """Coefficients [c_0, ..., c_d] of powers of var, as SparsePolys."""
        i = self.registry.var_index(var)
        d = self.degree_in(var)
        if d < 0:
            return []
        buckets = [dict() for _ in range(d + 1)]
        for exp, c in self.terms.items():
            e = exp[i]
            nexp = exp[:i] + (0,) + exp[i + 1:]
            buckets[e][nexp] = c
        return [SparsePoly(self.registry, b) for b in buckets]

    def substitute_value(self, assignment: dict) -> "SparsePoly":
        """Substitute exact rational values for a subset of variables."""
        idx = {self.registry.var_index(n): QQ(v) for n, v in assignment.items()}
        out = {}
        for exp, c in self.terms.items():
            v = c
            nexp = list(exp)
            for i, val in idx.items():
                e = exp[i]
                if e:
                    v = v * val ** e
                    nexp[i] = 0
            if v == 0:
                continue
            key = tuple(nexp)
            prev = out.get(key)
            if prev is None:
                out[key] = v
            else:
                s = prev + v
                if s:
                    out[key] = s
                else:
                    del out[key]
        return SparsePoly(self.registry, out)

    def evaluate(self, values: dict):
        """Evaluate fully at rational values (all support variables bound)."""
        result = self.substitute_value(values)
        return result.constant_value()

    def map_registry(self, target: VariableRegistry) -> "SparsePoly":
        """Re-express on another registry containing the same-named variables."""
        mapping = [target.var_index(n) for n in self.registry.names]
        out = {}
        for exp, c in self.terms.items():
            nexp = [0] * target.width
            for src, e in enumerate(exp):
                if e:
                    nexp[mapping[src]] = e
            out[tuple(nexp)] = c
        return SparsePoly(target, out)

    # -- weights ---------------------------------------------------------

    def weight_of_term(self, exp: tuple) -> int:
        return self.registry.monomial_weight(exp)

    def homogeneous_weight(self) -> Optional[int]:
        """Common Sato weight of all terms, or None if inhomogeneous/zero."""
        it = iter(self.terms)
        try:
            first = next(it)
        except StopIteration:
            return None
        w = self.registry.monomial_weight(first)
        for exp in it:
            if self.registry.monomial_weight(exp) != w:
                return None
        return w

    def parity(self) -> Optional[int]:
        """Uniform parity (0 even, 1 odd) of all terms, or None if mixed."""
        seen = None
        for exp in self.terms:
            p = self.registry.monomial_parity(exp)
            if seen is None:
                seen = p
            elif seen != p:
                return None
        return seen

    # -- normal form and text ---------------------------------------------

    def sorted_terms(self) -> list:
        """Terms in canonical order: descending graded lexicographic."""
        key = self.registry.sort_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def content_normalized(self) -> tuple:
        """Return (primitive_poly, content) with integer coprime coefficients.

        The sign is fixed so the canonical first term is positive.
        """
        if not self.terms:
            return self, ZERO
        from math import gcd
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, int(c.numerator))
            d = int(c.denominator)
            den_lcm = den_lcm // gcd(den_lcm, d) * d
        content = QQ(num_gcd, den_lcm)
        first_exp, first_c = self.sorted_terms()[0]
        if first_c < 0:
            content = -content
        return self.scale(1 / content), content

    def text(self) -> str:
        from .grammar import serialize_poly
        return serialize_poly(self)


def poly_arith(a: SparsePoly, b: SparsePoly, op: str) -> SparsePoly:
    """Spec-level arithmetic dispatcher over {add, sub, mul}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise UsageError("unknown op %r" % (op,))


def weight_of(registry: VariableRegistry, exp: tuple) -> int:
    """Sato weight of a monomial exponent vector."""
    return registry.monomial_weight(exp)


def is_homogeneous(p: SparsePoly) -> Optional[int]:
    return p.homogeneous_weight()


# ----------------------------------------------------------------------
# Resultants

def sylvester_matrix(p: SparsePoly, q: SparsePoly, var: str) -> list:
    pc = p.coefficients_in(var)
    qc = q.coefficients_in(var)
    m = len(pc) - 1
    n = len(qc) - 1
    if m < 1 or n < 1:
        raise UsageError("resultant requires positive degree in %r for both inputs" % var)
    size = m + n
    zero = SparsePoly.zero(p.registry)
    rows = []
    prow = list(reversed(pc))  # leading coefficient first
    qrow = list(reversed(qc))
    for i in range(n):
        rows.append([zero] * i + prow + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qrow + [zero] * (size - n - 1 - i))
    return rows


def det_rows(rows: list, one, zero):
    """Determinant by minor expansion memoized over column subsets.

    Division-free, so it works over any commutative ring whose elements
    support +, unary -, * and truthiness; results are bit-identical
    regardless of evaluation order.
    """
    size = len(rows)
    full = (1 << size) - 1
    cache = {}

    def minor(row: int, cols: int):
        # determinant of rows[row:] restricted to the column set `cols`
        if row == size:
            return one
        hit = cache.get((row, cols))
        if hit is not None:
            return hit
        acc = zero
        sign = 1
        rest = cols
        while rest:
            low = rest & (-rest)
            j = low.bit_length() - 1
            entry = rows[row][j]
            if entry:
                sub = minor(row + 1, cols & ~low)
                term = entry * sub
                acc = acc + (term if sign > 0 else -term)
            sign = -sign
            rest ^= low
        cache[(row, cols)] = acc
        return acc

    return minor(0, full)


def _det_expansion(rows: list) -> SparsePoly:
    registry = rows[0][0].registry
    return det_rows(rows, SparsePoly.constant(registry, 1), SparsePoly.zero(registry))


def resultant_raw(p: SparsePoly, q: SparsePoly, var: str) -> SparsePoly:
    """Sylvester resultant eliminating var, with no normalization."""
    rows = sylvester_matrix(p, q, var)
    return _det_expansion(rows)


def resultant(p: SparsePoly, q: SparsePoly, var: str) -> SparsePoly:
    """Normalized resultant: integer content removed, first term positive."""
    raw = resultant_raw(p, q, var)
    if not raw:
        return raw
    prim, _ = raw.content_normalized()
    return prim
