"""Formal calculus on Abelian-function symbols.

A SymbolicExpr is a finite sum of terms

    rational * (monomial in lam_j, z, w) * product of p/Q symbols,

where each symbol carries a sorted index multiset over 1..g and, for
two-point addition formulas, an optional evaluation tag 'u' or 'v'.
p-symbols need at least two indices, Q-symbols an even count of at least
two.  Differentiation by u_k appends k to a symbol's index multiset.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .numbers import QQ, ZERO
from .algebra import SparsePoly, UsageError, VariableRegistry

KIND_P = "p"
KIND_Q = "Q"


class AbelianSymbol:
    """An n-index p- or Q-symbol with sorted indices and optional tag."""

    __slots__ = ("kind", "indices", "tag")

    def __init__(self, kind: str, indices: Iterable[int], tag: str = ""):
        idx = tuple(sorted(int(i) for i in indices))
        if kind not in (KIND_P, KIND_Q):
            raise UsageError("symbol kind must be 'p' or 'Q'")
        if kind == KIND_P and len(idx) < 2:
            raise UsageError("p-symbol needs at least two indices")
        if kind == KIND_Q and (len(idx) < 2 or len(idx) % 2):
            raise UsageError("Q-symbol needs an even index count of at least two")
        if any(i < 1 for i in idx):
            raise UsageError("symbol indices start at 1")
        if tag not in ("", "u", "v"):
            raise UsageError("symbol tag must be '', 'u' or 'v'")
        self.kind = kind
        self.indices = idx
        self.tag = tag

    def key(self) -> tuple:
        return (self.kind, self.indices, self.tag)

    def weight(self, u_weights: tuple) -> int:
        """Sato weight: minus the sum of the index variables' weights."""
        return -sum(u_weights[i - 1] for i in self.indices)

    def order(self) -> int:
        return len(self.indices)

    def text(self) -> str:
        body = "%s[%s]" % (self.kind, ",".join(str(i) for i in self.indices))
        if self.tag:
            body += "{%s}" % self.tag
        return body

    def __repr__(self):
        return self.text()

    def __eq__(self, other):
        return isinstance(other, AbelianSymbol) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def psym(*indices, tag: str = "") -> tuple:
    return AbelianSymbol(KIND_P, indices, tag).key()

def qsym(*indices, tag: str = "") -> tuple:
    return AbelianSymbol(KIND_Q, indices, tag).key()


class SymbolicExpr:
    """Sum of rational * scalar-monomial * symbol-product terms.

    Terms live in a dict keyed by (symbols, exponent-vector) where symbols
    is a sorted tuple of AbelianSymbol keys and the exponent vector indexes
    the scalar registry (lam_j, z, w, ...).  Keys with zero coefficients are
    never stored.
    """

    __slots__ = ("registry", "terms")

    def __init__(self, registry: VariableRegistry, terms: Optional[dict] = None):
        self.registry = registry
        self.terms = terms if terms is not None else {}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, registry) -> "SymbolicExpr":
        return cls(registry, {})

    @classmethod
    def from_poly(cls, poly: SparsePoly) -> "SymbolicExpr":
        return cls(poly.registry, {((), exp): c for exp, c in poly.terms.items()})

    @classmethod
    def from_symbol(cls, registry, symbol_key: tuple, coeff=1) -> "SymbolicExpr":
        c = QQ(coeff)
        if c == 0:
            return cls(registry, {})
        return cls(registry, {((symbol_key,), registry._zero_exp): c})

    @classmethod
    def from_terms(cls, registry, items) -> "SymbolicExpr":
        terms = {}
        for key, coeff in items:
            c = QQ(coeff)
            if not c:
                continue
            prev = terms.get(key)
            if prev is None:
                terms[key] = c
            else:
                s = prev + c
                if s:
                    terms[key] = s
                else:
                    del terms[key]
        return cls(registry, terms)

    # -- basics -----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SymbolicExpr):
            return NotImplemented
        return self.registry is other.registry and self.terms == other.terms

    def __hash__(self):
        raise TypeError("SymbolicExpr is not hashable")

    def __repr__(self):
        s = self.text()
        if len(s) > 150:
            s = s[:147] + "..."
        return "SymbolicExpr(%s)" % s

    def _require_same_registry(self, other):
        if self.registry is not other.registry:
            raise UsageError("registry mismatch between symbolic operands")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        self._require_same_registry(other)
        a, b = self.terms, other.terms
        if not a:
            return SymbolicExpr(self.registry, dict(b))
        if not b:
            return SymbolicExpr(self.registry, dict(a))
        out = dict(a)
        for key, c in b.items():
            prev = out.get(key)
            if prev is None:
                out[key] = c
            else:
                s = prev + c
                if s:
                    out[key] = s
                else:
                    del out[key]
        return SymbolicExpr(self.registry, out)

    def __neg__(self):
        return SymbolicExpr(self.registry, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, type(QQ(0)))):
            return self.scale(other)
        self._require_same_registry(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return SymbolicExpr(self.registry, {})
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for (sa, ea), ca in a.items():
            for (sb, eb), cb in b.items():
                syms = tuple(sorted(sa + sb)) if sa or sb else ()
                exp = tuple(map(int.__add__, ea, eb))
                key = (syms, exp)
                c = ca * cb
                prev = out.get(key)
                if prev is None:
                    out[key] = c
                else:
                    s = prev + c
                    if s:
                        out[key] = s
                    else:
                        del out[key]
        return SymbolicExpr(self.registry, out)

    __rmul__ = __mul__

    def scale(self, value) -> "SymbolicExpr":
        c = QQ(value)
        if c == 0:
            return SymbolicExpr(self.registry, {})
        return SymbolicExpr(self.registry, {k: v * c for k, v in self.terms.items()})

    def mul_poly(self, poly: SparsePoly) -> "SymbolicExpr":
        return self * SymbolicExpr.from_poly(poly)

    def mul_monomial(self, exp: tuple, coeff=1) -> "SymbolicExpr":
        c = QQ(coeff)
        if c == 0:
            return SymbolicExpr(self.registry, {})
        out = {}
        for (syms, e), v in self.terms.items():
            out[(syms, tuple(map(int.__add__, e, exp)))] = v * c
        return SymbolicExpr(self.registry, out)

    # -- structure ------------------------------------------------------------

    def degree_in(self, var: str) -> int:
        i = self.registry.var_index(var)
        if not self.terms:
            return -1
        return max(e[i] for (_, e) in self.terms)

    def coefficients_in(self, var: str) -> list:
        """Coefficients of powers of a scalar variable, as SymbolicExprs."""
        i = self.registry.var_index(var)
        d = self.degree_in(var)
        if d < 0:
            return []
        buckets = [dict() for _ in range(d + 1)]
        for (syms, exp), c in self.terms.items():
            e = exp[i]
            nexp = exp[:i] + (0,) + exp[i + 1:]
            buckets[e][(syms, nexp)] = c
        return [SymbolicExpr(self.registry, b) for b in buckets]

    def symbols_used(self) -> set:
        out = set()
        for (syms, _) in self.terms:
            out.update(syms)
        return out

    def max_symbol_order(self) -> int:
        best = 0
        for (syms, _) in self.terms:
            for (_, idx, _) in syms:
                if len(idx) > best:
                    best = len(idx)
        return best

    def poly_part(self) -> SparsePoly:
        """The symbol-free part as a SparsePoly."""
        out = {}
        for (syms, exp), c in self.terms.items():
            if not syms:
                out[exp] = c
        return SparsePoly(self.registry, out)

    # -- weights and parity -------------------------------------------------

    def term_weight(self, key: tuple, u_weights: tuple) -> int:
        syms, exp = key
        w = self.registry.monomial_weight(exp)
        for (_, idx, _) in syms:
            w -= sum(u_weights[i - 1] for i in idx)
        return w

    def homogeneous_weight(self, u_weights: tuple) -> Optional[int]:
        it = iter(self.terms)
        try:
            first = next(it)
        except StopIteration:
            return None
        w = self.term_weight(first, u_weights)
        for key in it:
            if self.term_weight(key, u_weights) != w:
                return None
        return w

    @staticmethod
    def term_parity(key: tuple) -> int:
        """Parity of a term: total symbol index count mod 2.

        Scalar variables (lam, z, w) count as even under u -> -u.
        """
        syms, _ = key
        return sum(len(idx) for (_, idx, _) in syms) % 2

    def parity_split(self) -> tuple:
        """Split into (even, odd) parts by term parity."""
        even, odd = {}, {}
        for key, c in self.terms.items():
            (even if self.term_parity(key) == 0 else odd)[key] = c
        return (SymbolicExpr(self.registry, even), SymbolicExpr(self.registry, odd))

    # -- calculus over the symbol ring ------------------------------------------

    def differentiate_u(self, k: int) -> "SymbolicExpr":
        """d/du_k with the rule that it appends index k to one symbol.

        Scalar variables are constants for this derivation; the product
        rule distributes over the symbols of each term.
        """
        out = {}
        for (syms, exp), c in self.terms.items():
            for pos, (kind, idx, tag) in enumerate(syms):
                nsym = (kind, tuple(sorted(idx + (k,))), tag)
                nsyms = tuple(sorted(syms[:pos] + (nsym,) + syms[pos + 1:]))
                key = (nsyms, exp)
                prev = out.get(key)
                if prev is None:
                    out[key] = c
                else:
                    s = prev + c
                    if s:
                        out[key] = s
                    else:
                        del out[key]
        return SymbolicExpr(self.registry, out)

    def drop_lambda_terms(self, lam_names: tuple) -> "SymbolicExpr":
        """Specialize every lam_j to zero (drop terms carrying any lam)."""
        idxs = [self.registry.var_index(n) for n in lam_names]
        out = {}
        for (syms, exp), c in self.terms.items():
            if any(exp[i] for i in idxs):
                continue
            out[(syms, exp)] = c
        return SymbolicExpr(self.registry, out)

    def substitute_symbols(self, values: dict, scalar_values: Optional[dict] = None):
        """Evaluate with exact symbol values; returns an exact rational.

        `values` maps AbelianSymbol keys to rationals; every symbol that
        occurs must be bound.  Scalar variables may be bound through
        `scalar_values` (unbound scalars must not occur).
        """
        total = ZERO
        zero_exp = self.registry._zero_exp
        for (syms, exp), c in self.terms.items():
            v = c
            for skey in syms:
                v = v * values[skey]
            if exp != zero_exp:
                if not scalar_values:
                    raise UsageError("unbound scalar variables in symbolic evaluation")
                for i, e in enumerate(exp):
                    if e:
                        v = v * QQ(scalar_values[self.registry.names[i]]) ** e
            total += v
        return total

    # -- canonical order, comparison, text ------------------------------------------

    def sort_key(self, key: tuple):
        syms, exp = key
        zi = self.registry.index.get("z")
        wi = self.registry.index.get("w")
        zdeg = exp[zi] if zi is not None else 0
        wdeg = exp[wi] if wi is not None else 0
        return (zdeg, wdeg, sum(exp), exp, tuple(-len(s[1]) for s in syms), syms)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: self.sort_key(t[0]), reverse=True)

    def content_normalized(self) -> tuple:
        """(primitive expr, content): coprime integer coefficients, canonical
        first term positive."""
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
        if self.sorted_terms()[0][1] < 0:
            content = -content
        return self.scale(1 / content), content

    def proportional_to(self, other: "SymbolicExpr"):
        """If self == c * other exactly, return c; else None."""
        if self.registry is not other.registry:
            return None
        if not self.terms and not other.terms:
            return QQ(1)
        if len(self.terms) != len(other.terms):
            return None
        try:
            key = next(iter(self.terms))
            ratio = self.terms[key] / other.terms[key]
        except (KeyError, ZeroDivisionError):
            return None
        for key, c in self.terms.items():
            oc = other.terms.get(key)
            if oc is None or oc * ratio != c:
                return None
        return ratio

    def text(self) -> str:
        from .grammar import serialize_symbolic
        return serialize_symbolic(self)
