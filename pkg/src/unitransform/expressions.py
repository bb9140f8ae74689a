"""Recursive-descent parser and evaluator for analytic expressions in x and t.

Grammar (whitespace insignificant, function application requires
parentheses)::

    expression := term (("+" | "-") term)*
    term       := factor (("*" | "/") factor)*
    factor     := "-" factor | power
    power      := atom ("^" factor)?
    atom       := NUMBER | "pi" | "e" | "x" | "t"
                | FUNC "(" expression ")" | "(" expression ")"
    FUNC       := exp | sin | cos | sqrt | abs | log

"^" binds tighter than unary minus ("-x^2" is -(x^2)) and associates to
the right.  Its exponent must be constant: any variable-free exponent
subtree is folded to a number at parse time, anything else is rejected.
Expressions are real-valued; complex numbers never enter through user
input.  Evaluation is IEEE-754 double precision and raises
:class:`EvaluationError` on domain faults instead of returning NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import ContractViolationError, EvaluationError, ParseError

_CONSTANTS = {"pi": math.pi, "e": math.e}
_FUNCTIONS = ("exp", "sin", "cos", "sqrt", "abs", "log")
_VARIABLES = ("x", "t")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a function name
    arg: "ExpressionAST"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "ExpressionAST"
    right: "ExpressionAST"


ExpressionAST = Union[Num, Const, Var, Unary, BinOp]


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "ident" | "op" | "lparen" | "rparen" | "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^":
            tokens.append(_Token("op", ch, i))
            i += 1
        elif ch == "(":
            tokens.append(_Token("lparen", ch, i))
            i += 1
        elif ch == ")":
            tokens.append(_Token("rparen", ch, i))
            i += 1
        elif ch.isdigit() or ch == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            # exponent part of a float literal, e.g. 1e-3
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            lit = text[i:j]
            try:
                float(lit)
            except ValueError:
                raise ParseError(f"malformed number {lit!r}", i) from None
            tokens.append(_Token("num", lit, i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], i))
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}", tok.pos)
        return self.advance()

    def expression(self) -> ExpressionAST:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> ExpressionAST:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> ExpressionAST:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            arg = self.factor()
            if isinstance(arg, Num):
                return Num(-arg.value)
            return Unary("neg", arg)
        return self.power()

    def power(self) -> ExpressionAST:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            exponent = self.factor()
            if _has_variable(exponent):
                raise ParseError("exponent must be a constant", tok.pos)
            return BinOp("^", base, Num(_fold_constant(exponent, tok.pos)))
        return base

    def atom(self) -> ExpressionAST:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if self.peek().kind == "lparen":
                if name not in _FUNCTIONS:
                    raise ParseError(f"unknown function {name!r}", tok.pos)
                self.advance()
                if self.peek().kind == "rparen":
                    raise ParseError(f"empty argument to {name}", self.peek().pos)
                arg = self.expression()
                closing = self.peek()
                if closing.kind != "rparen":
                    raise ParseError("unbalanced parentheses", closing.pos)
                self.advance()
                return Unary(name, arg)
            if name in _VARIABLES:
                return Var(name)
            if name in _CONSTANTS:
                return Const(name)
            raise ParseError(f"unknown identifier {name!r}", tok.pos)
        if tok.kind == "lparen":
            self.advance()
            if self.peek().kind == "rparen":
                raise ParseError("empty parentheses", self.peek().pos)
            node = self.expression()
            closing = self.peek()
            if closing.kind != "rparen":
                raise ParseError("unbalanced parentheses", closing.pos)
            self.advance()
            return node
        if tok.kind == "rparen":
            raise ParseError("unbalanced parentheses", tok.pos)
        raise ParseError("expected a value", tok.pos)


def _has_variable(node: ExpressionAST) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Unary):
        return _has_variable(node.arg)
    if isinstance(node, BinOp):
        return _has_variable(node.left) or _has_variable(node.right)
    return False


def _fold_constant(node: ExpressionAST, pos: int) -> float:
    try:
        return evaluate(node, x=0.0)
    except EvaluationError as exc:
        raise ParseError(f"exponent does not evaluate: {exc}", pos) from None


def parse(text: str) -> ExpressionAST:
    """Parse expression text; errors carry a character offset."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(_tokenize(text))
    node = parser.expression()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ParseError(f"unexpected trailing input {trailing.text!r}", trailing.pos)
    return node


def variables(ast: ExpressionAST) -> frozenset[str]:
    """Names of the variables that occur in the tree."""
    if isinstance(ast, Var):
        return frozenset((ast.name,))
    if isinstance(ast, Unary):
        return variables(ast.arg)
    if isinstance(ast, BinOp):
        return variables(ast.left) | variables(ast.right)
    return frozenset()


def evaluate(ast: ExpressionAST, x: float, t: float | None = None) -> float:
    """Evaluate the tree at x (and t when the expression uses it)."""
    if isinstance(ast, Num):
        return ast.value
    if isinstance(ast, Const):
        return _CONSTANTS[ast.name]
    if isinstance(ast, Var):
        if ast.name == "x":
            return float(x)
        if t is None:
            raise ContractViolationError("expression uses t but no t value was supplied")
        return float(t)
    if isinstance(ast, Unary):
        v = evaluate(ast.arg, x, t)
        if ast.op == "neg":
            return -v
        if ast.op == "abs":
            return abs(v)
        if ast.op == "sqrt":
            if v < 0:
                raise EvaluationError(f"sqrt of negative value in '{canonical(ast)}'")
            return math.sqrt(v)
        if ast.op == "log":
            if v <= 0:
                raise EvaluationError(f"log of non-positive value in '{canonical(ast)}'")
            return math.log(v)
        try:
            return getattr(math, ast.op)(v)
        except OverflowError:
            raise EvaluationError(f"overflow in '{canonical(ast)}'") from None
    if isinstance(ast, BinOp):
        a = evaluate(ast.left, x, t)
        b = evaluate(ast.right, x, t)
        if ast.op == "+":
            return a + b
        if ast.op == "-":
            return a - b
        if ast.op == "*":
            return a * b
        if ast.op == "/":
            if b == 0.0:
                raise EvaluationError(f"division by zero in '{canonical(ast)}'")
            return a / b
        # "^"
        if not float(b).is_integer() and a <= 0:
            raise EvaluationError(
                f"non-integer power of a non-positive base in '{canonical(ast)}'"
            )
        try:
            out = a**b
        except (OverflowError, ZeroDivisionError):
            raise EvaluationError(f"power failed in '{canonical(ast)}'") from None
        if isinstance(out, complex) or not math.isfinite(out):
            raise EvaluationError(f"power produced a non-finite value in '{canonical(ast)}'")
        return out
    raise ContractViolationError(f"not an expression node: {ast!r}")


def evaluate_array(ast: ExpressionAST, x, t=None):
    """Vectorized evaluation on numpy arrays with the same domain checks.

    ``x`` and ``t`` must broadcast against each other; the result has the
    broadcast shape.  Domain faults raise :class:`EvaluationError` just
    as in the scalar path instead of propagating NaN or infinity.
    """
    import numpy as np

    x = np.asarray(x, dtype=float)
    shape = x.shape if t is None else np.broadcast_shapes(x.shape, np.shape(t))

    def walk(node: ExpressionAST):
        if isinstance(node, Num):
            return node.value
        if isinstance(node, Const):
            return _CONSTANTS[node.name]
        if isinstance(node, Var):
            if node.name == "x":
                return x
            if t is None:
                raise ContractViolationError("expression uses t but no t value was supplied")
            return np.asarray(t, dtype=float)
        if isinstance(node, Unary):
            v = walk(node.arg)
            if node.op == "neg":
                return -v
            if node.op == "abs":
                return np.abs(v)
            if node.op == "sqrt":
                if np.any(np.asarray(v) < 0):
                    raise EvaluationError(f"sqrt of negative value in '{canonical(node)}'")
                return np.sqrt(v)
            if node.op == "log":
                if np.any(np.asarray(v) <= 0):
                    raise EvaluationError(f"log of non-positive value in '{canonical(node)}'")
                return np.log(v)
            with np.errstate(over="ignore"):
                out = getattr(np, node.op)(v)
            if not np.all(np.isfinite(out)):
                raise EvaluationError(f"overflow in '{canonical(node)}'")
            return out
        a = walk(node.left)
        b = walk(node.right)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if np.any(np.asarray(b) == 0.0):
                raise EvaluationError(f"division by zero in '{canonical(node)}'")
            return a / b
        exponent = float(np.asarray(b).reshape(-1)[0])
        if not exponent.is_integer() and np.any(np.asarray(a) <= 0):
            raise EvaluationError(
                f"non-integer power of a non-positive base in '{canonical(node)}'"
            )
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            out = np.asarray(a) ** exponent
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"power produced a non-finite value in '{canonical(node)}'")
        return out

    result = np.asarray(walk(ast), dtype=float)
    if result.shape != shape:
        result = np.broadcast_to(result, shape)
    return result


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _format_number(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def canonical(ast: ExpressionAST) -> str:
    """Normalized text form; parse(canonical(parse(s))) == parse(s)."""

    def render(node: ExpressionAST, parent_prec: int) -> str:
        if isinstance(node, Num):
            text = _format_number(node.value)
            needs = node.value < 0 and parent_prec > _PRECEDENCE["neg"]
            return f"({text})" if needs else text
        if isinstance(node, Const):
            return node.name
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Unary):
            if node.op == "neg":
                inner = render(node.arg, _PRECEDENCE["neg"])
                text = f"-{inner}"
                return f"({text})" if parent_prec > _PRECEDENCE["neg"] else text
            return f"{node.op}({render(node.arg, 0)})"
        prec = _PRECEDENCE[node.op]
        if node.op == "^":
            left = render(node.left, prec + 1)
            right = render(node.right, prec)
            text = f"{left}^{right}"
        else:
            left = render(node.left, prec)
            # left associativity: the right operand needs one level more
            right = render(node.right, prec + 1)
            text = f"{left}{node.op}{right}"
        return f"({text})" if parent_prec > prec else text

    return render(ast, 0)
