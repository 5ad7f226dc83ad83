"""Parser and canonical serializer for the formula text format.

Grammar (ASCII, whitespace-insensitive):

    expr     := ('+'|'-')? term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := rational | '(' rational ')' | symbol ('^' integer)?
    rational := integer ('/' integer)?
    symbol   := 'u'N | 'lam'N | 'x' | 'y' | 'z' | 'w' | 'xi'
              | ('p'|'Q') '[' N (',' N)* ']' ('{' ('u'|'v') '}')?

Data files hold named blocks `[name] expr ;` with '#' line comments.
Parsing returns a SparsePoly when no p/Q symbols occur, else a
SymbolicExpr; serialization is canonical (fixed term and factor order),
so parse-serialize round trips are bit exact.
"""

from __future__ import annotations

import re

from .numbers import QQ, qq_str
from .algebra import SparsePoly, UsageError, VariableRegistry
from .symbols import AbelianSymbol, SymbolicExpr


class FormulaSyntaxError(UsageError):
    """Malformed formula text; carries line and column of the offense."""

    def __init__(self, message, line, column):
        super().__init__("%s (line %d, column %d)" % (message, line, column))
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<sym>p\[[0-9,\s]+\](\{[uv]\})?|Q\[[0-9,\s]+\](\{[uv]\})?|lam\d+|u\d+|xi|[xyzw])
  | (?P<op>[-+*/^();])
    """,
    re.VERBOSE,
)


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.i = 0

    def _lineco(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def _scan(self):
        pos = 0
        n = len(self.text)
        while pos < n:
            m = _TOKEN_RE.match(self.text, pos)
            if not m:
                line, col = self._lineco(pos)
                raise FormulaSyntaxError("unexpected character %r" % self.text[pos], line, col)
            if m.lastgroup != "ws":
                self.tokens.append((m.lastgroup, m.group(), m.start()))
            pos = m.end()

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, message, pos):
        line, col = self._lineco(pos)
        raise FormulaSyntaxError(message, line, col)


class Parser:
    """Recursive-descent parser over a scalar-variable registry."""

    def __init__(self, registry: VariableRegistry, allow_symbols: bool = True):
        self.registry = registry
        self.allow_symbols = allow_symbols

    def parse(self, text: str):
        """Parse an expression; SparsePoly if symbol-free, else SymbolicExpr."""
        tok = _Tokenizer(text)
        expr = self._expr(tok)
        kind, value, pos = tok.peek()
        if kind is not None:
            tok.error("trailing input %r" % value, pos)
        return self._shrink(expr)

    def parse_symbolic(self, text: str) -> SymbolicExpr:
        result = self.parse(text)
        if isinstance(result, SparsePoly):
            return SymbolicExpr.from_poly(result)
        return result

    def _shrink(self, expr: SymbolicExpr):
        for (syms, _) in expr.terms:
            if syms:
                return expr
        return expr.poly_part()

    def _expr(self, tok) -> SymbolicExpr:
        acc = SymbolicExpr.zero(self.registry)
        sign = 1
        kind, value, pos = tok.peek()
        if kind == "op" and value in "+-":
            tok.next()
            sign = -1 if value == "-" else 1
        while True:
            acc = acc + self._term(tok, sign)
            kind, value, pos = tok.peek()
            if kind == "op" and value in "+-":
                tok.next()
                sign = -1 if value == "-" else 1
                continue
            return acc

    def _term(self, tok, sign: int) -> SymbolicExpr:
        coeff = QQ(sign)
        symbols = []
        exp = [0] * self.registry.width
        while True:
            coeff = self._factor(tok, coeff, symbols, exp)
            kind, value, pos = tok.peek()
            if kind == "op" and value == "*":
                tok.next()
                continue
            break
        key = (tuple(sorted(symbols)), tuple(exp))
        return SymbolicExpr.from_terms(self.registry, [(key, coeff)])

    def _rational(self, tok):
        kind, value, pos = tok.next()
        if kind != "int":
            tok.error("expected integer, found %r" % value, pos)
        num = int(value)
        kind, value, _ = tok.peek()
        if kind == "op" and value == "/":
            tok.next()
            kind2, value2, pos2 = tok.next()
            if kind2 != "int":
                tok.error("malformed rational: expected denominator", pos2)
            den = int(value2)
            if den == 0:
                tok.error("malformed rational: zero denominator", pos2)
            return QQ(num, den)
        return QQ(num)

    def _factor(self, tok, coeff, symbols, exp):
        kind, value, pos = tok.peek()
        if kind == "int":
            return coeff * self._rational(tok)
        if kind == "op" and value == "(":
            tok.next()
            r = self._rational(tok)
            kind2, value2, pos2 = tok.next()
            if not (kind2 == "op" and value2 == ")"):
                tok.error("expected ')' after rational", pos2)
            return coeff * r
        if kind != "sym":
            tok.error("expected factor, found %r" % value, pos)
        tok.next()
        power = 1
        k2, v2, _ = tok.peek()
        if k2 == "op" and v2 == "^":
            tok.next()
            k3, v3, pos3 = tok.next()
            if k3 != "int":
                tok.error("expected integer exponent", pos3)
            power = int(v3)
        if value[0] in "pQ" and "[" in value:
            if not self.allow_symbols:
                tok.error("p/Q symbols not allowed here", pos)
            sym = self._parse_symbol(value, tok, pos)
            symbols.extend([sym.key()] * power)
        else:
            try:
                i = self.registry.var_index(value)
            except UsageError:
                tok.error("unknown variable %r" % value, pos)
            exp[i] += power
        return coeff

    def _parse_symbol(self, text, tok, pos) -> AbelianSymbol:
        kind = text[0]
        tag = ""
        body = text[1:]
        if body.endswith("}"):
            tag = body[-2]
            body = body[: body.index("{")]
        inner = body.strip()[1:-1]
        try:
            indices = [int(part) for part in inner.split(",")]
        except ValueError:
            tok.error("malformed symbol indices in %r" % text, pos)
        try:
            return AbelianSymbol(kind, indices, tag)
        except UsageError as exc:
            tok.error(str(exc), pos)


# ----------------------------------------------------------------------
# Serialization


def _monomial_factors(registry: VariableRegistry, exp: tuple) -> list:
    out = []
    for name, e in zip(registry.names, exp):
        if e == 1:
            out.append(name)
        elif e > 1:
            out.append("%s^%d" % (name, e))
    return out


def _coeff_prefix(c, factors: list) -> str:
    mag = c if c > 0 else -c
    if factors and mag == 1:
        body = "*".join(factors)
    elif factors:
        body = "*".join([qq_str(mag)] + factors)
    else:
        body = qq_str(mag)
    return body


def serialize_poly(poly: SparsePoly) -> str:
    if not poly.terms:
        return "0"
    pieces = []
    for i, (exp, c) in enumerate(poly.sorted_terms()):
        factors = _monomial_factors(poly.registry, exp)
        body = _coeff_prefix(c, factors)
        if i == 0:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)


def _symbol_text(skey: tuple) -> str:
    kind, indices, tag = skey
    body = "%s[%s]" % (kind, ",".join(str(i) for i in indices))
    if tag:
        body += "{%s}" % tag
    return body


def serialize_symbolic(expr: SymbolicExpr) -> str:
    if not expr.terms:
        return "0"
    pieces = []
    for i, ((syms, exp), c) in enumerate(expr.sorted_terms()):
        factors = _monomial_factors(expr.registry, exp)
        factors.extend(_symbol_text(s) for s in syms)
        body = _coeff_prefix(c, factors)
        if i == 0:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)


def serialize(value) -> str:
    if isinstance(value, SparsePoly):
        return serialize_poly(value)
    if isinstance(value, SymbolicExpr):
        return serialize_symbolic(value)
    raise UsageError("cannot serialize %r" % type(value).__name__)


# ----------------------------------------------------------------------
# Named-block data files

_BLOCK_NAME_RE = re.compile(r"\[([A-Za-z0-9_.\-]+)\]")


def strip_comments(text: str) -> str:
    lines = []
    for line in text.splitlines():
        stripped = line.lstrip()
        lines.append("" if stripped.startswith("#") else line)
    return "\n".join(lines)


def parse_blocks(text: str) -> list:
    """Split file text into (name, body) pairs; bodies end at ';'."""
    clean = strip_comments(text)
    blocks = []
    pos = 0
    while True:
        m = _BLOCK_NAME_RE.search(clean, pos)
        if not m:
            rest = clean[pos:].strip()
            if rest:
                raise UsageError("stray text outside blocks: %r" % rest[:40])
            break
        end = clean.find(";", m.end())
        if end < 0:
            raise UsageError("block %r is missing its ';' terminator" % m.group(1))
        blocks.append((m.group(1), clean[m.end():end].strip()))
        pos = end + 1
    return blocks


def parse_formula_file(path, registry: VariableRegistry) -> dict:
    """Parse a data file into an ordered {name: SparsePoly|SymbolicExpr} dict."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    parser = Parser(registry)
    out = {}
    for name, body in parse_blocks(text):
        if name in out:
            raise UsageError("duplicate block name %r in %s" % (name, path))
        out[name] = parser.parse(body)
    return out
