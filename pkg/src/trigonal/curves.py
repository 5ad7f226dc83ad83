"""Curve models, gap sequences, Sato weights, and the formula data packs.

A CurveModel fixes everything derived from the pair (n, s): genus, gap
sequence, variable registry with weights, the curve polynomial, and the
numerators of the holomorphic differentials.  Printed formula suites ship
as text data files loaded into a FormulaPack and validated structurally
(weight homogeneity, parity uniformity, swap symmetry, checksums).
"""

from __future__ import annotations

import hashlib
import json
import os
from math import gcd
from pathlib import Path
from typing import Optional

from .numbers import QQ
from .algebra import (
    PARITY_EVEN,
    PARITY_ODD,
    SparsePoly,
    UsageError,
    VariableRegistry,
)
from .grammar import Parser, parse_formula_file, serialize
from .symbols import SymbolicExpr


def gap_sequence(n: int, s: int) -> list:
    """Naturals not representable as a*n + b*s with a, b >= 0."""
    if n < 2 or s <= n:
        raise UsageError("need s > n >= 2")
    if gcd(n, s) != 1:
        raise UsageError("(%d, %d) are not coprime" % (n, s))
    bound = n * s
    representable = [False] * (bound + 1)
    for a in range(0, bound // n + 1):
        base = a * n
        for b in range(0, (bound - base) // s + 1):
            representable[base + b * s] = True
    gaps = [k for k in range(1, bound + 1) if not representable[k]]
    expected = (n - 1) * (s - 1) // 2
    if len(gaps) != expected:
        raise UsageError("gap count %d does not match genus %d" % (len(gaps), expected))
    return gaps


# Lambda weight tables for the shipped curves, as read off the printed
# weight tables; other curves fall back to the same -n*(s-j) pattern.
_LAMBDA_WEIGHTS = {
    (3, 7): {6: -3, 5: -6, 4: -9, 3: -12, 2: -15, 1: -18, 0: -21},
    (3, 8): {7: -3, 6: -6, 5: -9, 4: -12, 3: -15, 2: -18, 1: -21, 0: -24},
    (3, 10): {9: -3, 8: -6, 7: -9, 6: -12, 5: -15, 4: -18, 3: -21, 2: -24, 1: -27, 0: -30},
    (3, 11): {10: -3, 9: -6, 8: -9, 7: -12, 6: -15, 5: -18, 4: -21, 3: -24, 2: -27, 1: -30, 0: -33},
}


class CurveModel:
    """All structural data attached to a cyclic (n, s)-curve."""

    def __init__(self, n: int, s: int):
        self.n = n
        self.s = s
        self.gaps = gap_sequence(n, s)
        self.genus = len(self.gaps)
        self.u_weights = tuple(reversed(self.gaps))
        self.lam_weights = _LAMBDA_WEIGHTS.get((n, s)) or {j: -n * (s - j) for j in range(s)}
        self.sigma_weight = sum(self.gaps) - self.genus * (self.genus - 1) // 2
        self.sigma_parity = self.sigma_weight % 2

        names = ["u%d" % i for i in range(1, self.genus + 1)]
        weights = list(self.u_weights)
        parities = [PARITY_ODD] * self.genus
        for j in range(s - 1, -1, -1):
            names.append("lam%d" % j)
            weights.append(self.lam_weights[j])
            parities.append(PARITY_EVEN)
        for name, w in (("x", -n), ("y", -s), ("z", -n), ("w", -s), ("xi", 1)):
            names.append(name)
            weights.append(w)
            parities.append(PARITY_EVEN)
        self.registry = VariableRegistry(names, weights, parities)
        self.parser = Parser(self.registry)

        self.f_poly = self._build_f()
        self.g_numerators = [self._numerator_for(wi) for wi in self.u_weights]

    def __repr__(self):
        return "CurveModel(%d,%d; genus=%d)" % (self.n, self.s, self.genus)

    @property
    def key(self) -> str:
        return "%d,%d" % (self.n, self.s)

    def _build_f(self) -> SparsePoly:
        terms = [(self.registry.exponent("x", self.s), QQ(1))]
        for j in range(self.s):
            exp = [0] * self.registry.width
            exp[self.registry.var_index("lam%d" % j)] = 1
            if j:
                exp[self.registry.var_index("x")] = j
            terms.append((tuple(exp), QQ(1)))
        return SparsePoly.from_terms(self.registry, terms)

    def _numerator_for(self, u_weight: int) -> SparsePoly:
        # monomial x^a y^b with n*a + s*b = s*(n-1) - n - u_weight, 0 <= b < n
        t = self.s * (self.n - 1) - self.n - u_weight
        for b in range(self.n):
            if (t - self.s * b) % self.n == 0 and t - self.s * b >= 0:
                a = (t - self.s * b) // self.n
                exp = [0] * self.registry.width
                exp[self.registry.var_index("x")] = a
                exp[self.registry.var_index("y")] = b
                return SparsePoly(self.registry, {tuple(exp): QQ(1)})
        raise UsageError("no holomorphic numerator for weight %d" % u_weight)

    def lam_names(self) -> tuple:
        return tuple("lam%d" % j for j in range(self.s - 1, -1, -1))

    def sato_weights(self) -> dict:
        return {
            "u_weights": list(self.u_weights),
            "lambda_weights": [self.lam_weights[j] for j in range(self.s - 1, -1, -1)],
            "sigma_weight": self.sigma_weight,
            "sigma_parity": "odd" if self.sigma_parity else "even",
        }


_CURVE_CACHE: dict = {}


def curve_model(n: int, s: int) -> CurveModel:
    key = (n, s)
    if key not in _CURVE_CACHE:
        _CURVE_CACHE[key] = CurveModel(n, s)
    return _CURVE_CACHE[key]


def parse_curve_key(text: str) -> CurveModel:
    try:
        n, s = (int(part) for part in text.split(","))
    except ValueError:
        raise UsageError("curve must look like '3,7'") from None
    return curve_model(n, s)


# ----------------------------------------------------------------------
# Formula packs


def default_data_dir() -> Path:
    env = os.environ.get("TRIGONAL_DATA")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


class FormulaPack:
    """Named formula groups for one curve, loaded from a data directory."""

    def __init__(self, curve: CurveModel, data_dir: Optional[Path] = None):
        self.curve = curve
        root = Path(data_dir) if data_dir else default_data_dir()
        self.directory = root / ("curve_%d_%d" % (curve.n, curve.s))
        if not self.directory.is_dir():
            raise UsageError("no data directory for curve %s at %s" % (curve.key, self.directory))
        self._groups: dict = {}

    def available_groups(self) -> list:
        return sorted(p.stem for p in self.directory.glob("*.txt"))

    def has_group(self, name: str) -> bool:
        return (self.directory / (name + ".txt")).is_file()

    def group(self, name: str) -> dict:
        if name not in self._groups:
            path = self.directory / (name + ".txt")
            if not path.is_file():
                raise UsageError("pack for %s has no group %r" % (self.curve.key, name))
            self._groups[name] = parse_formula_file(path, self.curve.registry)
        return self._groups[name]

    def formula(self, group: str, name: str):
        block = self.group(group)
        if name not in block:
            raise UsageError("group %r has no formula %r" % (group, name))
        return block[name]

    def json_table(self, name: str) -> dict:
        path = self.directory / (name + ".json")
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)


def pack_for(curve: CurveModel, data_dir: Optional[Path] = None) -> FormulaPack:
    return FormulaPack(curve, data_dir)


# ----------------------------------------------------------------------
# Pack validation


def _swap_points(poly: SparsePoly) -> SparsePoly:
    """Exchange (x, y) with (z, w)."""
    reg = poly.registry
    ix, iy = reg.var_index("x"), reg.var_index("y")
    iz, iw = reg.var_index("z"), reg.var_index("w")
    out = {}
    for exp, c in poly.terms.items():
        e = list(exp)
        e[ix], e[iz] = e[iz], e[ix]
        e[iy], e[iw] = e[iw], e[iy]
        out[tuple(e)] = c
    return SparsePoly(reg, out)


def _formula_weight(value, curve: CurveModel):
    if isinstance(value, SparsePoly):
        return value.homogeneous_weight()
    return value.homogeneous_weight(curve.u_weights)


def _formula_parity(value) -> Optional[int]:
    if isinstance(value, SparsePoly):
        return value.parity()
    seen = None
    for key in value.terms:
        p = SymbolicExpr.term_parity(key)
        if seen is None:
            seen = p
        elif seen != p:
            return None
    return seen


def validate_pack(curve: CurveModel, pack: FormulaPack) -> dict:
    """Structural checks over every shipped formula of a pack.

    Returns a report dict; 'failures' is empty when everything passes.
    """
    failures = []
    checks = 0
    for group in pack.available_groups():
        formulas = pack.group(group)
        for name, value in formulas.items():
            checks += 1
            # round trip through the canonical serializer
            text = serialize(value)
            reparsed = curve.parser.parse(text)
            if isinstance(reparsed, SymbolicExpr) != isinstance(value, SymbolicExpr):
                value_cmp = SymbolicExpr.from_poly(value) if isinstance(value, SparsePoly) else value
                reparsed = SymbolicExpr.from_poly(reparsed) if isinstance(reparsed, SparsePoly) else reparsed
                same = value_cmp == reparsed
            else:
                same = reparsed == value
            if not same:
                failures.append("%s/%s: serialize/parse round trip changed the formula" % (group, name))
            w = _formula_weight(value, curve)
            if w is None:
                failures.append("%s/%s: not weight homogeneous" % (group, name))
            if isinstance(value, SymbolicExpr):
                if _formula_parity(value) is None:
                    failures.append("%s/%s: mixed parity" % (group, name))

    if pack.has_group("fundamental_F"):
        F = pack.formula("fundamental_F", "F")
        checks += 1
        if _swap_points(F) != F:
            failures.append("fundamental_F/F: not symmetric under (x,y)<->(z,w)")

    if pack.has_group("sw_printed"):
        sw = pack.formula("sw_printed", "SW")
        checks += 1
        if sw.homogeneous_weight() != curve.sigma_weight:
            failures.append("sw_printed/SW: weight differs from sigma weight %d" % curve.sigma_weight)
        checks += 1
        if sw.parity() != curve.sigma_parity:
            failures.append("sw_printed/SW: parity differs from sigma parity")

    manifest_failures = verify_checksums(pack)
    failures.extend(manifest_failures)
    return {
        "curve": curve.key,
        "checks": checks,
        "failures": failures,
        "ok": not failures,
    }


def file_checksum(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def verify_checksums(pack: FormulaPack) -> list:
    """Compare pack files against the shipped checksum manifest."""
    manifest_path = pack.directory.parent / "checksums.json"
    if not manifest_path.is_file():
        return ["checksum manifest is missing"]
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    failures = []
    prefix = pack.directory.name
    for path in sorted(pack.directory.glob("*")):
        rel = "%s/%s" % (prefix, path.name)
        expected = manifest.get(rel)
        if expected is None:
            failures.append("%s: file not in checksum manifest" % rel)
        elif file_checksum(path) != expected:
            failures.append("%s: checksum mismatch (transcription guard)" % rel)
    return failures
