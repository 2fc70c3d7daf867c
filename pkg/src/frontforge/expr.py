"""Closed-form real expressions in the variables ``u`` and ``v``.

The module provides a small recursive-descent parser, an evaluator that
works on floats and numpy arrays, and exact symbolic partial derivatives.
Nodes are immutable; derivative and evaluation-order caches are stored on
the nodes themselves so that repeated differentiation shares structure
(the derivative trees form a DAG, not a tree).

Grammar::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | 'u' | 'v' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
"""
from __future__ import annotations

import math
import re

import numpy as np

FUNCTIONS = ("sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "abs")
VARIABLES = ("u", "v")


class ExprError(Exception):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    pass


class ExprDomainError(ExprError, ArithmeticError):
    """Raised when evaluation leaves the natural domain of a node."""

    def __init__(self, message, node):
        text = to_string(node)
        if len(text) > 80:
            text = text[:77] + "..."
        super().__init__(f"{message} in node `{text}`")
        self.node = node


# ---------------------------------------------------------------------------
# Nodes
# ---------------------------------------------------------------------------

class Node:
    __slots__ = ("_deriv", "_order", "__weakref__")

    def __init__(self):
        self._deriv = {}
        self._order = None

    @property
    def children(self):
        return ()

    # building with operators folds constants
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __pow__(self, other):
        return power(self, other)

    def __neg__(self):
        return neg(self)

    def __repr__(self):
        return f"<{type(self).__name__} {to_string(self)}>"

    def __str__(self):
        return to_string(self)

    def sexpr(self):
        """Nested-tuple form, convenient for structural comparison."""
        raise NotImplementedError


class Const(Node):
    __slots__ = ("value",)

    def __init__(self, value):
        super().__init__()
        self.value = float(value)

    def sexpr(self):
        return self.value


class NamedConst(Node):
    __slots__ = ("name", "value")

    def __init__(self, name):
        super().__init__()
        if name != "pi":
            raise ValueError(f"unknown named constant {name!r}")
        self.name = name
        self.value = math.pi

    def sexpr(self):
        return self.name


class Var(Node):
    __slots__ = ("name",)

    def __init__(self, name):
        super().__init__()
        if name not in VARIABLES:
            raise ValueError(f"unknown variable {name!r}")
        self.name = name

    def sexpr(self):
        return self.name


class Unary(Node):
    __slots__ = ("op", "arg")

    def __init__(self, op, arg):
        super().__init__()
        if op != "neg" and op not in FUNCTIONS:
            raise ValueError(f"unknown unary operator {op!r}")
        self.op = op
        self.arg = arg

    @property
    def children(self):
        return (self.arg,)

    def sexpr(self):
        return (self.op, self.arg.sexpr())


class Binary(Node):
    __slots__ = ("op", "left", "right")
    OPS = ("add", "sub", "mul", "div", "pow")

    def __init__(self, op, left, right):
        super().__init__()
        if op not in self.OPS:
            raise ValueError(f"unknown binary operator {op!r}")
        self.op = op
        self.left = left
        self.right = right

    @property
    def children(self):
        return (self.left, self.right)

    def sexpr(self):
        return (self.op, self.left.sexpr(), self.right.sexpr())


class Primitive(Node):
    """Antiderivative in ``u`` of an integrand that does not depend on ``v``.

    ``Primitive(g, u0)(u) = int_{u0}^{u} g(s) ds``, evaluated by adaptive
    Gauss-Legendre quadrature. Not reachable from the text grammar; presets
    use it when no closed-form antiderivative is registered.
    """

    __slots__ = ("integrand", "start", "tol")

    def __init__(self, integrand, start=0.0, tol=1e-13):
        super().__init__()
        if depends_on(integrand, "v"):
            raise ValueError("Primitive integrand must not depend on v")
        self.integrand = integrand
        self.start = float(start)
        self.tol = tol

    @property
    def children(self):
        return (self.integrand,)

    def sexpr(self):
        return ("primitive", self.integrand.sexpr(), self.start)


ZERO = Const(0.0)
ONE = Const(1.0)
U = Var("u")
V = Var("v")


def as_node(x):
    if isinstance(x, Node):
        return x
    if isinstance(x, str):
        return parse(x)
    if isinstance(x, (int, float, np.integer, np.floating)):
        return Const(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an expression")


def _num(x):
    if isinstance(x, Const):
        return x.value
    return None


# -- folding constructors ----------------------------------------------------

def add(a, b):
    a, b = as_node(a), as_node(b)
    x, y = _num(a), _num(b)
    if x is not None and y is not None:
        return Const(x + y)
    if x == 0.0:
        return b
    if y == 0.0:
        return a
    return Binary("add", a, b)


def sub(a, b):
    a, b = as_node(a), as_node(b)
    x, y = _num(a), _num(b)
    if x is not None and y is not None:
        return Const(x - y)
    if y == 0.0:
        return a
    if x == 0.0:
        return neg(b)
    return Binary("sub", a, b)


def mul(a, b):
    a, b = as_node(a), as_node(b)
    x, y = _num(a), _num(b)
    if x is not None and y is not None:
        return Const(x * y)
    if x == 0.0 or y == 0.0:
        return ZERO
    if x == 1.0:
        return b
    if y == 1.0:
        return a
    if x == -1.0:
        return neg(b)
    if y == -1.0:
        return neg(a)
    return Binary("mul", a, b)


def div(a, b):
    a, b = as_node(a), as_node(b)
    x, y = _num(a), _num(b)
    if x is not None and y is not None and y != 0.0:
        return Const(x / y)
    if y == 1.0:
        return a
    if x == 0.0 and y != 0.0:
        return ZERO
    return Binary("div", a, b)


def power(a, b):
    a, b = as_node(a), as_node(b)
    x, y = _num(a), _num(b)
    if x is not None and y is not None:
        r = x ** y if not (x < 0 and not float(y).is_integer()) else math.nan
        if isinstance(r, float) and math.isfinite(r):
            return Const(r)
    if y == 0.0:
        return ONE
    if y == 1.0:
        return a
    return Binary("pow", a, b)


def neg(a):
    a = as_node(a)
    x = _num(a)
    if x is not None:
        return Const(-x)
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    return Unary("neg", a)


def func(name, a):
    a = as_node(a)
    x = _num(a)
    if x is not None:
        with np.errstate(all="ignore"):
            r = float(_UNARY[name](np.float64(x)))
        if math.isfinite(r):
            return Const(r)
    return Unary(name, a)


def sin(a):
    return func("sin", a)


def cos(a):
    return func("cos", a)


def sinh(a):
    return func("sinh", a)


def cosh(a):
    return func("cosh", a)


def exp(a):
    return func("exp", a)


def log(a):
    return func("log", a)


def sqrt(a):
    return func("sqrt", a)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(source):
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos))
        kind = m.lastgroup
        text = m.group(kind)
        start = m.start(kind)
        if text == "**":
            text = "^"
        tokens.append((kind, text, _byte_offset(source, start)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(source, n)))
    return tokens


def _byte_offset(source, index):
    return len(source[:index].encode("utf-8"))


class _Parser:
    def __init__(self, source):
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, t, off = self.take()
        if t != text:
            raise ExprSyntaxError(f"expected {text!r}, found {t or 'end of input'!r}", off)

    def parse(self):
        node = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {text!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = Binary("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            node = Binary("mul" if op == "*" else "div", node, rhs)
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return Unary("neg", self.unary())
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return Binary("pow", base, self.unary())
        return base

    def atom(self):
        kind, text, off = self.take()
        if kind == "num":
            return Const(float(text))
        if kind == "name":
            if text in VARIABLES:
                return Var(text)
            if text == "pi":
                return NamedConst("pi")
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(text, arg)
            raise UnknownIdentifierError(f"unknown identifier {text!r}", off)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", off)


def parse(source):
    """Parse expression text into an AST."""
    if not isinstance(source, str) or not source.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}
_SYM = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}


def _fmt_const(x):
    if x.is_integer() and abs(x) < 1e15:
        s = str(int(x))
    else:
        s = repr(x)
    if x < 0 or "inf" in s or "nan" in s:
        s = f"({s})"
    return s


def to_string(node):
    """Render an AST as text that :func:`parse` reads back to the same values."""
    memo = {}
    for n in _topo(node):
        memo[id(n)] = _print_node(n, memo)
    return memo[id(node)][0]


def _print_node(n, memo):
    if isinstance(n, Const):
        return _fmt_const(n.value), 5
    if isinstance(n, (Var, NamedConst)):
        return n.name, 5
    if isinstance(n, Primitive):
        return f"primitive({memo[id(n.integrand)][0]}, {n.start!r})", 5
    if isinstance(n, Unary):
        s, p = memo[id(n.arg)]
        if n.op == "neg":
            return ("-" + (s if p > 3 else f"({s})")), 3
        return f"{n.op}({s})", 5
    ls, lp = memo[id(n.left)]
    rs, rp = memo[id(n.right)]
    prec = _PREC[n.op]
    if n.op == "pow":
        ls = ls if lp > prec else f"({ls})"
        rs = rs if rp >= 3 else f"({rs})"
    else:
        ls = ls if lp >= prec else f"({ls})"
        right_ok = rp > prec or (rp == prec and n.op in ("add", "mul"))
        rs = rs if right_ok else f"({rs})"
    return f"{ls} {_SYM[n.op]} {rs}", prec


# ---------------------------------------------------------------------------
# Traversal helpers
# ---------------------------------------------------------------------------

def _topo(root):
    """Unique nodes of the DAG under ``root`` in post-order (children first)."""
    if root._order is not None:
        return root._order
    order = []
    seen = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for ch in reversed(node.children):
            if id(ch) not in seen:
                stack.append((ch, False))
    root._order = order
    return order


def depends_on(node, var):
    return any(isinstance(n, Var) and n.name == var for n in _topo(node))


def size(node):
    """Number of distinct nodes in the DAG."""
    return len(_topo(node))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

_UNARY = {
    "neg": np.negative,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


def _check_finite(val, node):
    if not np.all(np.isfinite(val)):
        raise ExprDomainError("non-finite value", node)


def _eval_node(n, vals, u, v):
    if isinstance(n, Const):
        return n.value
    if isinstance(n, NamedConst):
        return n.value
    if isinstance(n, Var):
        return u if n.name == "u" else v
    if isinstance(n, Primitive):
        return _eval_primitive(n, u, v)
    if isinstance(n, Unary):
        x = vals[id(n.arg)]
        if n.op == "log" and np.any(np.asarray(x) <= 0):
            raise ExprDomainError("log of non-positive value", n)
        if n.op == "sqrt" and np.any(np.asarray(x) < 0):
            raise ExprDomainError("sqrt of negative value", n)
        r = _UNARY[n.op](x)
        _check_finite(r, n)
        return r
    a = vals[id(n.left)]
    b = vals[id(n.right)]
    op = n.op
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if np.any(np.asarray(b) == 0):
            raise ExprDomainError("division by zero", n)
        r = np.true_divide(a, b)
        _check_finite(r, n)
        return r
    r = np.power(a, b)
    if not np.all(np.isfinite(r)):
        if np.any((np.asarray(a) == 0) & (np.asarray(b) < 0)):
            raise ExprDomainError("division by zero", n)
        raise ExprDomainError("power outside real domain", n)
    return r


def evaluate_many(roots, u, v):
    """Evaluate several ASTs at the same point(s), sharing common subtrees."""
    u = np.asarray(u, dtype=float) if np.ndim(u) else float(u)
    v = np.asarray(v, dtype=float) if np.ndim(v) else float(v)
    vals = {}
    out = []
    with np.errstate(all="ignore"):
        for root in roots:
            for n in _topo(root):
                if id(n) not in vals:
                    vals[id(n)] = _eval_node(n, vals, u, v)
            out.append(vals[id(root)])
    shape = np.broadcast(u, v).shape
    result = []
    for r in out:
        if shape:
            r = np.broadcast_to(np.asarray(r, dtype=float), shape).copy()
        else:
            r = float(r)
        result.append(r)
    return result


def evaluate(node, u, v):
    """Evaluate ``node`` at ``(u, v)``; scalars in, float out; arrays broadcast."""
    return evaluate_many([node], u, v)[0]


def _eval_primitive(n, u, v):
    from .geomcore import gauss_legendre_integral

    uu = np.atleast_1d(np.asarray(u, dtype=float))
    flat = uu.ravel()
    uniq, inv = np.unique(flat, return_inverse=True)

    def g(s):
        return evaluate(n.integrand, s, np.zeros_like(s))

    # cumulative integrals from the start point outwards over sorted nodes
    knots = np.unique(np.concatenate([uniq, [n.start]]))
    k0 = int(np.searchsorted(knots, n.start))
    seg = gauss_legendre_integral(g, knots[:-1], knots[1:], tol=n.tol)
    cum = np.zeros(len(knots))
    cum[k0 + 1:] = np.cumsum(seg[k0:])
    cum[:k0] = -np.cumsum(seg[:k0][::-1])[::-1]
    res = cum[np.searchsorted(knots, uniq)][inv].reshape(uu.shape)
    if np.ndim(u) == 0:
        return float(res.reshape(-1)[0])
    return res


# ---------------------------------------------------------------------------
# Differentiation
# ---------------------------------------------------------------------------

def _d_node(n, var, d):
    if isinstance(n, (Const, NamedConst)):
        return ZERO
    if isinstance(n, Var):
        return ONE if n.name == var else ZERO
    if isinstance(n, Primitive):
        return n.integrand if var == "u" else ZERO
    if isinstance(n, Unary):
        x = n.arg
        dx = d[id(x)]
        if _num(dx) == 0.0:
            return ZERO
        op = n.op
        if op == "neg":
            return neg(dx)
        if op == "sin":
            g = cos(x)
        elif op == "cos":
            g = neg(sin(x))
        elif op == "tan":
            g = div(ONE, power(cos(x), 2))
        elif op == "sinh":
            g = cosh(x)
        elif op == "cosh":
            g = sinh(x)
        elif op == "tanh":
            g = div(ONE, power(cosh(x), 2))
        elif op == "exp":
            g = n
        elif op == "log":
            return div(dx, x)
        elif op == "sqrt":
            return div(dx, mul(2.0, n))
        elif op == "abs":
            # x/|x|: undefined at 0, reported when evaluated there
            g = div(x, n)
        else:  # pragma: no cover
            raise ExprError(f"no derivative rule for {op}")
        return mul(g, dx)
    a, b = n.left, n.right
    da, db = d[id(a)], d[id(b)]
    op = n.op
    if op == "add":
        return add(da, db)
    if op == "sub":
        return sub(da, db)
    if op == "mul":
        return add(mul(da, b), mul(a, db))
    if op == "div":
        if _num(db) == 0.0:
            return div(da, b)
        return div(sub(mul(da, b), mul(a, db)), power(b, 2))
    # pow
    if _num(db) == 0.0:
        e = _num(b)
        if e is not None:
            return mul(mul(Const(e), power(a, Const(e - 1.0))), da)
        return mul(mul(b, power(a, sub(b, ONE))), da)
    # general a^b = exp(b log a)
    return mul(n, add(mul(db, log(a)), div(mul(b, da), a)))


def differentiate(node, var):
    """Exact partial derivative of ``node`` with respect to ``var`` ('u' or 'v')."""
    if var not in VARIABLES:
        raise ValueError(f"var must be 'u' or 'v', not {var!r}")
    cached = node._deriv.get(var)
    if cached is not None:
        return cached
    d = {}
    for n in _topo(node):
        r = n._deriv.get(var)
        if r is None:
            r = _d_node(n, var, d)
            n._deriv[var] = r
        d[id(n)] = r
    return d[id(node)]


def partial(node, nu, nv):
    """Mixed partial derivative d^(nu+nv) / du^nu dv^nv by iterated differentiation."""
    out = node
    for _ in range(nu):
        out = differentiate(out, "u")
    for _ in range(nv):
        out = differentiate(out, "v")
    return out


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------

def substitute(node, mapping):
    """Replace variables by expressions, e.g. ``{'u': V, 'v': U}`` swaps them."""
    mapping = {k: as_node(x) for k, x in mapping.items()}
    memo = {}
    for n in _topo(node):
        if isinstance(n, Var):
            r = mapping.get(n.name, n)
        elif isinstance(n, (Const, NamedConst)):
            r = n
        elif isinstance(n, Primitive):
            if mapping.get("u", U) is not U:
                raise ExprError("cannot substitute for u inside a Primitive node")
            r = n
        elif isinstance(n, Unary):
            a = memo[id(n.arg)]
            r = neg(a) if n.op == "neg" else func(n.op, a)
        else:
            a, b = memo[id(n.left)], memo[id(n.right)]
            r = {"add": add, "sub": sub, "mul": mul, "div": div, "pow": power}[n.op](a, b)
        memo[id(n)] = r
    return memo[id(node)]
