"""System description files and the shared polynomial expression grammar.

A system file declares parameter symbols (optionally a quadratic field tag)
and the two polynomial right-hand sides:

    # comment
    field sqrt2
    param b22
    xdot = -y + 3*x^2*y + sqrt2*x^3*y
    ydot = x + 1/2*x^2*y^2 - 1/2*x^4

Expressions use explicit '*', '^' for exponents, and '/' only by nonzero
constants.  Printing is canonical: formatting a parsed system and reparsing
yields an identical structure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra.poly import ParamPoly
from .algebra.scalars import QuadNum

MAX_DEGREE = 4


class SysFileError(ValueError):
    """Lexical, syntactic or structural error in a system file."""

    def __init__(self, message: str, line: int | None = None,
                 col: int | None = None):
        loc = "" if line is None else f" (line {line}" + (
            f", col {col})" if col is not None else ")")
        super().__init__(message + loc)
        self.line = line
        self.col = col


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*/^()]))")


def _tokenize(text: str, line: int):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise SysFileError(f"unexpected character {text[pos]!r}",
                                   line, pos + 1)
            break
        if m.group(1):
            out.append(("num", m.group(1), m.start(1) + 1))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2) + 1))
        else:
            out.append(("op", m.group(3), m.start(3) + 1))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


# -- recursive-descent parser to a tiny AST -----------------------------------

class _Parser:
    def __init__(self, tokens, line):
        self.toks = tokens
        self.i = 0
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val, col = self.take()
        if kind != "op" or val != op:
            raise SysFileError(f"expected {op!r}, found {val!r}", self.line, col)

    def parse(self):
        node = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            raise SysFileError(f"trailing input {val!r}", self.line, col)
        return node

    def expr(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            node = self.term()
            if val == "-":
                node = ("neg", node)
        else:
            node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                node = ("add" if val == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.power()
                node = ("mul" if val == "*" else "div", node, rhs)
            else:
                return node

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, col = self.take()
            if kind != "num":
                raise SysFileError("exponent must be a literal integer",
                                   self.line, col)
            return ("pow", base, int(val))
        return base

    def atom(self):
        kind, val, col = self.take()
        if kind == "num":
            return ("int", int(val))
        if kind == "name":
            return ("name", val, col)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "op" and val == "-":
            return ("neg", self.atom())
        raise SysFileError(f"unexpected token {val!r}", self.line, col)


def parse_expression(text: str, line: int = 0):
    return _Parser(_tokenize(text, line), line).parse()


# -- evaluation ----------------------------------------------------------------

_SQRT_NAME = re.compile(r"^sqrt(\d+)$")


class _PlanarValue:
    """Bivariate polynomial in (x, y) with ParamPoly coefficients."""

    __slots__ = ("table", "vars")

    def __init__(self, vars, table):
        self.vars = vars
        self.table = table  # {(i, j): ParamPoly}

    @classmethod
    def const(cls, vars, p: ParamPoly):
        return cls(vars, {} if p.is_zero else {(0, 0): p})

    def add(self, other, sign=1):
        out = dict(self.table)
        for k, v in other.table.items():
            cur = out.get(k)
            nv = v if sign > 0 else -v
            if cur is None:
                out[k] = nv
            else:
                s = cur + nv
                if s.is_zero:
                    del out[k]
                else:
                    out[k] = s
        return _PlanarValue(self.vars, out)

    def neg(self):
        return _PlanarValue(self.vars, {k: -v for k, v in self.table.items()})

    def mul(self, other):
        out: dict = {}
        for (i1, j1), a in self.table.items():
            for (i2, j2), b in other.table.items():
                k = (i1 + i2, j1 + j2)
                p = a * b
                cur = out.get(k)
                if cur is None:
                    out[k] = p
                else:
                    s = cur + p
                    if s.is_zero:
                        del out[k]
                    else:
                        out[k] = s
        return _PlanarValue(self.vars, out)

    def constant_poly(self):
        if not self.table:
            return ParamPoly.zero(self.vars)
        if set(self.table) == {(0, 0)}:
            return self.table[(0, 0)]
        return None


def _eval_ast(node, env: dict, vars, line: int) -> _PlanarValue:
    op = node[0]
    if op == "int":
        return _PlanarValue.const(vars, ParamPoly.constant(vars, node[1]))
    if op == "name":
        name, col = node[1], node[2]
        hit = env.get(name)
        if hit is None:
            raise SysFileError(f"unknown symbol {name!r}", line, col)
        return hit
    if op == "neg":
        return _eval_ast(node[1], env, vars, line).neg()
    if op == "add":
        return _eval_ast(node[1], env, vars, line).add(
            _eval_ast(node[2], env, vars, line))
    if op == "sub":
        return _eval_ast(node[1], env, vars, line).add(
            _eval_ast(node[2], env, vars, line), sign=-1)
    if op == "mul":
        return _eval_ast(node[1], env, vars, line).mul(
            _eval_ast(node[2], env, vars, line))
    if op == "div":
        num = _eval_ast(node[1], env, vars, line)
        den = _eval_ast(node[2], env, vars, line)
        dp = den.constant_poly()
        if dp is None or not dp.is_constant() or dp.is_zero:
            raise SysFileError("division only by nonzero constants", line)
        inv = dp.constant_value()
        inv = (1 / inv) if not isinstance(inv, QuadNum) else inv.inverse()
        return _PlanarValue(num.vars,
                            {k: v.scalar_mul(inv) for k, v in num.table.items()})
    if op == "pow":
        base = _eval_ast(node[1], env, vars, line)
        n = node[2]
        out = _PlanarValue.const(vars, ParamPoly.constant(vars, 1))
        for _ in range(n):
            out = out.mul(base)
        return out
    raise AssertionError(f"bad node {node!r}")


def evaluate_planar(text: str, vars, d: int | None, line: int = 0) -> dict:
    """Parse an xdot/ydot expression into a {(i, j): ParamPoly} table."""
    vars = tuple(vars)
    env = {
        "x": _PlanarValue(vars, {(1, 0): ParamPoly.constant(vars, 1)}),
        "y": _PlanarValue(vars, {(0, 1): ParamPoly.constant(vars, 1)}),
    }
    for v in vars:
        env[v] = _PlanarValue.const(vars, ParamPoly.variable(vars, v))
    if d is not None:
        env[f"sqrt{d}"] = _PlanarValue.const(
            vars, ParamPoly.constant(vars, QuadNum(0, 1, d)))
    ast = parse_expression(text, line)
    return _eval_ast(ast, env, vars, line).table


def evaluate_poly(text: str, vars, d: int | None = None, line: int = 0) -> ParamPoly:
    """Parse an expression over the given variables into a ParamPoly."""
    vars = tuple(vars)
    env = {v: _PlanarValue.const(vars, ParamPoly.variable(vars, v))
           for v in vars}
    if d is not None:
        env[f"sqrt{d}"] = _PlanarValue.const(
            vars, ParamPoly.constant(vars, QuadNum(0, 1, d)))
    ast = parse_expression(text, line)
    val = _eval_ast(ast, env, vars, line)
    p = val.constant_poly()
    if p is None:
        raise SysFileError("expression is not a polynomial in the declared "
                           "variables", line)
    return p


# -- canonical formatting -------------------------------------------------------


def format_scalar(c) -> str:
    if isinstance(c, QuadNum):
        parts = []
        if c.a != 0:
            parts.append(str(c.a))
        b = c.b
        rad = f"sqrt{c.d}"
        if b == 1:
            parts.append(rad)
        elif b == -1:
            parts.append(f"-{rad}")
        else:
            parts.append(f"{b}*{rad}")
        s = parts[0]
        for p in parts[1:]:
            s += ("+" + p) if not p.startswith("-") else p
        return f"({s})" if len(parts) > 1 else s
    return str(c)


def format_param_poly(p: ParamPoly, parens_if_sum: bool = False) -> str:
    """Deterministic, reparseable rendering of a parameter polynomial."""
    if p.is_zero:
        return "0"
    bits = []
    for exp, c in sorted(p.iter_terms()):
        mono = "*".join(f"{v}^{e}" if e > 1 else v
                        for v, e in zip(p.vars, exp) if e)
        cs = format_scalar(c)
        if mono:
            if cs == "1":
                term = mono
            elif cs == "-1":
                term = f"-{mono}"
            else:
                term = f"{cs}*{mono}"
        else:
            term = cs
        bits.append(term)
    out = bits[0]
    for b in bits[1:]:
        out += ("+" + b) if not b.startswith("-") else b
    if parens_if_sum and len(bits) > 1:
        return f"({out})"
    return out


def format_planar_table(table: dict) -> str:
    """Canonical rendering of a {(i, j): ParamPoly} monomial table."""
    keys = sorted((k for k, v in table.items() if not v.is_zero),
                  key=lambda k: (k[0] + k[1], k[1], k[0]))
    if not keys:
        return "0"
    bits = []
    for (i, j) in keys:
        mono_parts = []
        if i:
            mono_parts.append(f"x^{i}" if i > 1 else "x")
        if j:
            mono_parts.append(f"y^{j}" if j > 1 else "y")
        mono = "*".join(mono_parts)
        c = table[(i, j)]
        cs = format_param_poly(c, parens_if_sum=True)
        if mono:
            if cs == "1":
                term = mono
            elif cs == "-1":
                term = f"-{mono}"
            else:
                term = f"{cs}*{mono}"
        else:
            term = cs
        bits.append(term)
    out = bits[0]
    for b in bits[1:]:
        out += ("+" + b) if not b.startswith("-") else b
    return out


# -- the system file itself ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PlanarSystem:
    """Exact planar polynomial system with linear part (-y, x)."""

    vars: tuple[str, ...]          # free parameter symbols
    d: int | None                  # quadratic field tag, or None for Q
    xdot: dict
    ydot: dict

    def degree(self) -> int:
        degs = [i + j for t in (self.xdot, self.ydot)
                for (i, j), c in t.items() if not c.is_zero]
        return max(degs) if degs else 0

    def substitute(self, values: dict) -> "PlanarSystem":
        keep = tuple(v for v in self.vars if v not in values)
        def sub(table):
            out = {}
            for k, c in table.items():
                s = c.substitute(values)
                if not s.is_zero:
                    out[k] = s
            return out
        return PlanarSystem(keep, self.d, sub(self.xdot), sub(self.ydot))

    def to_cherkas(self):
        from .lienard import CherkasSystem
        return CherkasSystem.from_planar(self.xdot, self.ydot, self.vars)

    def to_numeric(self, values: dict[str, float] | None = None,
                   provenance: str = "exact-evaluated"):
        from .verify import NumericSystem
        return NumericSystem.from_tables(self.xdot, self.ydot, values,
                                         provenance)

    def format(self) -> str:
        lines = []
        if self.d is not None:
            lines.append(f"field sqrt{self.d}")
        for v in self.vars:
            lines.append(f"param {v}")
        lines.append(f"xdot = {format_planar_table(self.xdot)}")
        lines.append(f"ydot = {format_planar_table(self.ydot)}")
        return "\n".join(lines) + "\n"


def _structural_checks(ps: PlanarSystem):
    if ps.degree() > MAX_DEGREE:
        raise SysFileError(f"total degree exceeds {MAX_DEGREE}")
    for (_i, j), c in ps.xdot.items():
        if j > 1 and not c.is_zero:
            raise SysFileError("xdot must have y-degree <= 1 "
                               "(quadratic-in-y system shape)")
    for (_i, j), c in ps.ydot.items():
        if j > 2 and not c.is_zero:
            raise SysFileError("ydot must have y-degree <= 2 "
                               "(quadratic-in-y system shape)")
    def coeff(table, i, j):
        c = table.get((i, j))
        return None if c is None or c.is_zero else c
    lin_x = coeff(ps.xdot, 0, 1)
    lin_y = coeff(ps.ydot, 1, 0)
    ok = (lin_x is not None and lin_x.is_constant()
          and lin_x.constant_value() == -1
          and lin_y is not None and lin_y.is_constant()
          and lin_y.constant_value() == 1
          and coeff(ps.xdot, 0, 0) is None and coeff(ps.ydot, 0, 0) is None
          and coeff(ps.xdot, 1, 0) is None and coeff(ps.ydot, 0, 1) is None)
    if not ok:
        raise SysFileError("linear part must be exactly (-y, x)")


def parse_system_text(text: str, path: str = "<string>") -> PlanarSystem:
    d: int | None = None
    params: list[str] = []
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("field "):
            m = _SQRT_NAME.match(body[6:].strip())
            if not m:
                raise SysFileError("field tag must be sqrt<d>", lineno)
            if d is not None:
                raise SysFileError("duplicate field declaration", lineno)
            d = int(m.group(1))
        elif body.startswith("param "):
            name = body[6:].strip()
            if not re.match(r"^[A-Za-z_][A-Za-z0-9_]*$", name) or name in ("x", "y"):
                raise SysFileError(f"bad parameter name {name!r}", lineno)
            if name in params:
                raise SysFileError(f"duplicate parameter {name!r}", lineno)
            params.append(name)
        elif "=" in body:
            lhs, rhs = body.split("=", 1)
            lhs = lhs.strip()
            if lhs not in ("xdot", "ydot"):
                raise SysFileError(f"unknown declaration {lhs!r}", lineno)
            if lhs in raw:
                raise SysFileError(f"duplicate {lhs}", lineno)
            raw[lhs] = (rhs.strip(), lineno)
        else:
            raise SysFileError(f"cannot parse line {body!r}", lineno)
    if "xdot" not in raw or "ydot" not in raw:
        raise SysFileError(f"{path}: file must define both xdot and ydot")
    vars = tuple(params)
    xdot = evaluate_planar(raw["xdot"][0], vars, d, raw["xdot"][1])
    ydot = evaluate_planar(raw["ydot"][0], vars, d, raw["ydot"][1])
    ps = PlanarSystem(vars, d, xdot, ydot)
    _structural_checks(ps)
    return ps


def parse_system(path: str) -> PlanarSystem:
    """Parse a system file; printing then reparsing round-trips exactly."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_system_text(fh.read(), path)


@dataclass(frozen=True)
class IdealFile:
    """Polynomial list fixture: ring variables plus generators."""

    vars: tuple[str, ...]
    d: int | None
    polys: tuple[ParamPoly, ...]


def parse_ideal_text(text: str) -> IdealFile:
    vars: tuple[str, ...] | None = None
    d: int | None = None
    polys: list[ParamPoly] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("vars "):
            if vars is not None:
                raise SysFileError("duplicate vars declaration", lineno)
            names = [v.strip() for v in body[5:].split(">")]
            if any(not re.match(r"^[A-Za-z_][A-Za-z0-9_]*$", v) for v in names):
                raise SysFileError("bad variable list", lineno)
            vars = tuple(names)
        elif body.startswith("field "):
            m = _SQRT_NAME.match(body[6:].strip())
            if not m:
                raise SysFileError("field tag must be sqrt<d>", lineno)
            d = int(m.group(1))
        elif body.startswith("poly "):
            if vars is None:
                raise SysFileError("vars must be declared before poly", lineno)
            polys.append(evaluate_poly(body[5:], vars, d, lineno))
        else:
            raise SysFileError(f"cannot parse line {body!r}", lineno)
    if vars is None or not polys:
        raise SysFileError("ideal file needs vars and at least one poly")
    return IdealFile(vars, d, tuple(polys))


def parse_ideal(path: str) -> IdealFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_ideal_text(fh.read())
