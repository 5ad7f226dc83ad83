"""Schur polynomial pipeline: gaps -> partition -> determinant -> u-variables.

The chain is: take the Weierstrass gap sequence of (n, s), form its
partition, express elementary symmetric polynomials in power sums p_k,
build the Schur polynomial as a dual Jacobi-Trudi determinant over the
conjugate partition, and substitute p_{w_i} = w_i * u_{g+1-i}.  Only
gap-indexed p's may survive the determinant; anything else is an internal
error (wrong index convention).

The printed genus-6 polynomial arbitrates the determinant convention: the
source display writes index pi_i - i - j, which matches no Jacobi-Trudi
identity; det((e_{pi'_i - i + j})) reproduces the printed polynomial and
is what this module implements, with the h-determinant as a cross check.
"""

from __future__ import annotations

from functools import lru_cache

from .numbers import QQ
from .algebra import (
    InternalError,
    PARITY_EVEN,
    SparsePoly,
    UsageError,
    VariableRegistry,
)
from .curves import CurveModel, curve_model, gap_sequence


def weierstrass_partition(gaps: list) -> tuple:
    """Partition with entries w_{g-k+1} + k - g for k = 1..g."""
    g = len(gaps)
    if sorted(gaps) != list(gaps):
        raise UsageError("gap sequence must be ascending")
    parts = tuple(gaps[g - k] + k - g for k in range(1, g + 1))
    if any(p <= 0 for p in parts):
        raise InternalError("non-positive partition entry from gaps %r" % (gaps,))
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise InternalError("partition from gaps is not non-increasing")
    return parts


def conjugate_partition(parts: tuple) -> tuple:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= j) for j in range(1, parts[0] + 1))


def _newton_registry(max_index: int) -> VariableRegistry:
    names = ["p%d" % k for k in range(1, max_index + 1)]
    weights = list(range(1, max_index + 1))
    # p_k plays the role of a degree-k power sum; parity is even formally
    return VariableRegistry(names, weights, [PARITY_EVEN] * max_index)


class NewtonBasis:
    """Elementary and complete homogeneous polynomials in power sums."""

    def __init__(self, max_index: int):
        self.registry = _newton_registry(max_index)
        self.max_index = max_index
        self._e = {0: SparsePoly.constant(self.registry, 1)}
        self._h = {0: SparsePoly.constant(self.registry, 1)}

    def p(self, k: int) -> SparsePoly:
        return SparsePoly.variable(self.registry, "p%d" % k)

    def elementary(self, k: int) -> SparsePoly:
        """e_k in p's; equals the (1/k!)-scaled almost-triangular determinant."""
        if k < 0:
            return SparsePoly.zero(self.registry)
        if k not in self._e:
            # k*e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i  (Newton's identity),
            # which is exactly the expansion of the determinant form
            acc = SparsePoly.zero(self.registry)
            for i in range(1, k + 1):
                term = self.elementary(k - i) * self.p(i)
                acc = acc + (term if i % 2 == 1 else -term)
            self._e[k] = acc.scale(QQ(1, k))
        return self._e[k]

    def complete(self, k: int) -> SparsePoly:
        """h_k in p's (all-plus Newton recurrence); independent oracle."""
        if k < 0:
            return SparsePoly.zero(self.registry)
        if k not in self._h:
            acc = SparsePoly.zero(self.registry)
            for i in range(1, k + 1):
                acc = acc + self.complete(k - i) * self.p(i)
            self._h[k] = acc.scale(QQ(1, k))
        return self._h[k]


def elementary_in_newton(k: int) -> SparsePoly:
    """Standalone e_k over a registry sized to k."""
    return NewtonBasis(max(k, 1)).elementary(k)


def _det_over_polys(rows: list) -> SparsePoly:
    from .algebra import _det_expansion
    return _det_expansion(rows)


def schur_from_partition(parts: tuple, basis: NewtonBasis = None, convention: str = "dual") -> SparsePoly:
    """Schur polynomial in power sums.

    convention 'dual': det((e_{pi'_i - i + j})) over the conjugate partition.
    convention 'h':    det((h_{pi_i - i + j})) over the partition itself.
    The two agree; both are kept so tests can cross check.
    """
    if not parts:
        raise UsageError("partition must be nonempty")
    if convention == "dual":
        work = conjugate_partition(parts)
        if basis is None:
            basis = NewtonBasis(max(work) + len(work))
        fetch = basis.elementary
    elif convention == "h":
        work = parts
        if basis is None:
            basis = NewtonBasis(max(work) + len(work))
        fetch = basis.complete
    else:
        raise UsageError("unknown Schur convention %r" % (convention,))
    m = len(work)
    rows = [[fetch(work[i] - (i + 1) + (j + 1)) for j in range(m)] for i in range(m)]
    return _det_over_polys(rows)


def _u_registry(curve: CurveModel) -> VariableRegistry:
    # reuse the curve's full registry so downstream code can mix freely
    return curve.registry


def schur_weierstrass(n: int, s: int, convention: str = "dual") -> SparsePoly:
    """Schur polynomial of the Weierstrass partition, in u-variables.

    Substitutes p_{w_i} = w_i * u_{g+1-i}; any surviving non-gap p is an
    internal error.  The result is homogeneous of the curve's sigma weight
    with uniform parity.
    """
    curve = curve_model(n, s)
    gaps = curve.gaps
    g = curve.genus
    parts = weierstrass_partition(gaps)
    schur = schur_from_partition(parts, convention=convention)

    preg = schur.registry
    gap_set = set(gaps)
    col_of = {}
    for k in range(1, preg.width + 1):
        name = "p%d" % k
        if name in preg.index:
            col_of[preg.index[name]] = k

    target = curve.registry
    out = {}
    for exp, c in schur.terms.items():
        nexp = [0] * target.width
        coeff = c
        for i, e in enumerate(exp):
            if not e:
                continue
            k = col_of[i]
            if k not in gap_set:
                raise InternalError("non-gap p_%d survived the Schur determinant" % k)
            # p_{w_i} = w_i * u_{g+1-i} with w_i the i-th gap (ascending)
            pos = gaps.index(k)
            u_index = g - pos  # u_{g+1-(pos+1)}
            coeff = coeff * QQ(k) ** e
            nexp[target.var_index("u%d" % u_index)] += e
        key = tuple(nexp)
        prev = out.get(key)
        if prev is None:
            out[key] = coeff
        else:
            v = prev + coeff
            if v:
                out[key] = v
            else:
                del out[key]
    result = SparsePoly(target, out)

    w = result.homogeneous_weight()
    if w != curve.sigma_weight:
        raise InternalError("Schur-Weierstrass weight %r, expected %d" % (w, curve.sigma_weight))
    if result.parity() != curve.sigma_parity:
        raise InternalError("Schur-Weierstrass parity is not uniform")
    return result


@lru_cache(maxsize=None)
def schur_weierstrass_cached(n: int, s: int) -> SparsePoly:
    return schur_weierstrass(n, s)


def sw_summary(n: int, s: int) -> dict:
    sw = schur_weierstrass_cached(n, s)
    return {
        "genus": curve_model(n, s).genus,
        "weight": sw.homogeneous_weight(),
        "monomials": len(sw),
    }
