"""
Parsing of polynomial expressions and problem files.

Expression grammar (whitespace insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | VAR | "(" expr ")"

``VAR`` is ``q1..qN`` or ``p1..pN``.  Division is only by nonzero constants,
so ``1/3`` and ``q1^3/3`` are exact rationals.  Float literals are rejected.

A problem file is either JSON::

    {"n": 2, "modes": [1, 1], "omega0": "1",
     "H1": "q1^3/3 - q1*q2^2", "H2": "0",
     "options": {"hopf": true, "params": {"lam0": "0"}},
     "dynamics": {"eps": [0.04, 0.02, 0.01], "x0": [0.3, 0.2, 0.1, 0.4], "T": 1.0}}

or ``key = value`` lines (``#`` starts a comment) using the same keys, with
``modes`` written as ``1, 1``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .averaging import FrequencyData
from .errors import ParseError
from .normalform import PerturbedHamiltonian
from .poly import Poly

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+)|(\d+)|([qp])(\d+)|([A-Za-z_]\w*)|(.))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or not text[pos:].strip():
            break
        col = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(1):
            raise ParseError(f"float literal {m.group(1)!r} not allowed in exact mode", 1, col + 1)
        if m.group(2):
            out.append(("int", int(m.group(2)), col))
        elif m.group(3):
            out.append(("var", (m.group(3), int(m.group(4))), col))
        elif m.group(5):
            raise ParseError(f"unknown identifier {m.group(5)!r}", 1, col + 1)
        elif m.group(6) in "+-*/^()":
            out.append((m.group(6), None, col))
        else:
            raise ParseError(f"unexpected character {m.group(6)!r}", 1, col + 1)
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(self.text[tok[2]:tok[2] + 1])
            raise ParseError(f"expected {kind!r}, found {what}", 1, tok[2] + 1)
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 1, 1)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {self.text[tok[2]]!r}", 1, tok[2] + 1)
        return value

    def expr(self) -> Poly:
        value = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Poly:
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, col = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.degree() > 0:
                    raise ParseError("division by a non-constant expression", 1, col + 1)
                if rhs.is_zero():
                    raise ParseError("division by zero", 1, col + 1)
                value = value / rhs
        return value

    def unary(self) -> Poly:
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            _, k, _ = self.take("int")
            base = base ** k
        return base

    def atom(self) -> Poly:
        kind, val, col = self.peek()
        if kind == "int":
            self.take()
            return Poly.const(self.n, val)
        if kind == "var":
            self.take()
            letter, idx = val
            if not 1 <= idx <= self.n:
                raise ParseError(f"unknown variable {letter}{idx} for n={self.n}", 1, col + 1)
            return Poly.q(self.n, idx) if letter == "q" else Poly.p(self.n, idx)
        if kind == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        what = "end of input" if kind == "end" else repr(self.text[col])
        raise ParseError(f"unexpected {what}", 1, col + 1)


def parse_poly(text: str, n: int) -> Poly:
    """Parse an exact polynomial expression in ``q1..qn, p1..pn``."""
    return _Parser(text, n).parse()


def parse_rational(text) -> Fraction:
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ParseError(f"float {text!r} not allowed; write it as a fraction string")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational: {text!r}") from None


@dataclass
class ProblemSpec:
    n: int
    modes: tuple
    omega0: Fraction
    H1: str
    H2: str | None = None
    hopf: bool = False
    verify: bool = False
    params: dict = field(default_factory=dict)
    dynamics: dict = field(default_factory=dict)
    name: str = ""

    def frequency(self) -> FrequencyData:
        return FrequencyData(self.modes, self.omega0)

    def to_perturbed(self) -> PerturbedHamiltonian:
        freq = self.frequency()
        H1 = parse_poly(self.H1, self.n)
        H2 = parse_poly(self.H2, self.n) if self.H2 not in (None, "") else None
        return PerturbedHamiltonian(freq, H1, H2)


def _line_of(text: str, needle: str) -> int | None:
    idx = text.find(needle)
    return None if idx < 0 else text.count("\n", 0, idx) + 1


def _build(data: dict, text: str) -> ProblemSpec:
    known = {"n", "modes", "omega0", "H1", "H2", "options", "dynamics", "name",
             "hopf", "verify", "params"}
    unknown = set(data) - known
    if unknown:
        raise ParseError(f"unknown key(s): {', '.join(sorted(unknown))}")
    h1 = data.get("H1")
    if h1 is None or not str(h1).strip():
        raise ParseError("H1 required", _line_of(text, "H1"), 1 if "H1" in text else None)
    modes = data.get("modes")
    if modes is None:
        if "n" not in data:
            raise ParseError("either n or modes is required")
        modes = [1] * int(data["n"])
    try:
        modes = tuple(int(m) for m in modes)
    except (TypeError, ValueError):
        raise ParseError(f"modes must be a list of integers, got {modes!r}") from None
    n = int(data.get("n", len(modes)))
    if n != len(modes):
        raise ParseError(f"n = {n} but {len(modes)} mode(s) given")
    opts = dict(data.get("options") or {})
    for key in ("hopf", "verify", "params"):
        if key in data:
            opts[key] = data[key]
    params = {str(k): parse_rational(v) for k, v in (opts.get("params") or {}).items()}
    spec = ProblemSpec(n=n, modes=modes, omega0=parse_rational(data.get("omega0", 1)),
                       H1=str(h1), H2=None if data.get("H2") is None else str(data["H2"]),
                       hopf=bool(opts.get("hopf", False)), verify=bool(opts.get("verify", False)),
                       params=params, dynamics=dict(data.get("dynamics") or {}),
                       name=str(data.get("name", "")))
    for key in ("H1", "H2"):
        expr = getattr(spec, key)
        if expr in (None, ""):
            continue
        try:
            parse_poly(expr, n)
        except ParseError as exc:
            line = _line_of(text, expr)
            offset = text.split("\n")[line - 1].find(expr) if line else 0
            raise ParseError(f"{key}: {exc.args[0].split(' (line')[0]}", line,
                             (exc.column or 1) + max(offset, 0)) from None
    try:
        spec.frequency()
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return spec


def _parse_kv(text: str) -> dict:
    data: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, 1)
        key, value = (s.strip() for s in line.split("=", 1))
        if key in ("modes", "eps", "x0"):
            try:
                data_val = [int(v) if key == "modes" else float(v)
                            for v in value.replace("[", "").replace("]", "").split(",") if v.strip()]
            except ValueError:
                raise ParseError(f"bad list for {key}", lineno, raw.find(value) + 1) from None
            if key == "modes":
                data["modes"] = data_val
            else:
                data.setdefault("dynamics", {})[key] = data_val
        elif key == "n":
            data["n"] = int(value)
        elif key in ("hopf", "verify"):
            data[key] = value.lower() in ("1", "true", "yes", "on")
        elif key == "T":
            data.setdefault("dynamics", {})["T"] = float(value)
        elif key.startswith("param."):
            data.setdefault("params", {})[key[len("param."):]] = value
        else:
            data[key] = value
    return data


def parse_spec(source) -> ProblemSpec:
    """Parse a problem description from text, or from a path when given a :class:`Path`."""
    if isinstance(source, Path):
        text = source.read_text()
        default_name = source.stem
    else:
        text = str(source)
        default_name = ""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    else:
        data = _parse_kv(text)
    spec = _build(data, text)
    if not spec.name:
        spec.name = default_name
    return spec
