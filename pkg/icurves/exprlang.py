'''
A small expression language for real functions of arc length ``s``.

Expressions are used to supply the angular function and the intrinsic fraction
function of a curve. The grammar, from loosest to tightest binding, is::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('-' | '+') unary | power
    power := atom ('^' unary)?
    atom  := number | 's' | 'pi' | func '(' expr ')' | '(' expr ')'

so ``^`` is right associative and binds tighter than unary minus, i.e.
``-s^2`` is ``-(s^2)``. Trees are immutable and can be shared between threads.
'''
from __future__ import annotations
from dataclasses import dataclass
import logging
import math
import re
import typing

import numpy as np


logger = logging.getLogger(__name__)

FUNCTIONS = ('sin', 'cos', 'tan', 'asin', 'acos', 'atan', 'sqrt', 'exp', 'log',
    'abs')
CONSTANTS = {'pi': math.pi}
VARIABLE = 's'

_TOKEN_RE = re.compile(r'''
    (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    |(?P<name>[A-Za-z_][A-Za-z_0-9]*)
    |(?P<op>[-+*/^()])
''', re.VERBOSE)

# Binding strength used by the printer. Atoms bind tightest.
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5

_OP_PREC = {'+': _PREC_ADD, '-': _PREC_ADD, '*': _PREC_MUL, '/': _PREC_MUL,
    '^': _PREC_POW}


class ExprError(Exception):
    ''' Base class for all expression errors. '''


class ExprSyntaxError(ExprError):
    ''' The text is not a well-formed expression. '''
    def __init__(self, message: str, offset: int):
        super().__init__(f'{message} at byte offset {offset}')
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    ''' The text names a variable, constant or function that does not exist. '''
    def __init__(self, name: str, offset: int):
        super().__init__(f'unknown identifier {name!r}', offset)
        self.name = name


class ExprDomainError(ExprError):
    ''' Evaluation left the real domain of some operation. '''
    def __init__(self, message: str, s: typing.Optional[float] = None):
        if s is not None:
            message = f'{message} at s={s!r}'
        super().__init__(message)
        self.s = s


class Expr:
    ''' Base class of expression tree nodes. '''
    precedence = _PREC_ATOM

    @property
    def is_constant(self) -> bool:
        ''' True if the tree does not depend on ``s``. '''
        raise NotImplementedError()

    def evaluate(self, s: float) -> float:
        '''
        Evaluate at a single arc length.

        :raises ExprDomainError: if an operation leaves its real domain or the
            result is not finite.
        '''
        try:
            value = self._eval(float(s))
        except ExprDomainError as exc:
            if exc.s is None:
                raise ExprDomainError(str(exc), float(s)) from None
            raise
        except (OverflowError, ZeroDivisionError, ValueError) as exc:
            raise ExprDomainError(str(exc), float(s)) from None
        if not math.isfinite(value):
            raise ExprDomainError('non-finite value', float(s))
        return value

    def evaluate_array(self, s: np.ndarray) -> np.ndarray:
        '''
        Evaluate at many arc lengths at once.

        Any non-finite entry is re-evaluated with :meth:`evaluate` so that the
        raised :class:`ExprDomainError` names the first offending ``s``.
        '''
        s = np.asarray(s, dtype=float)
        with np.errstate(all='ignore'):
            values = np.broadcast_to(self._eval_array(s), s.shape).astype(float)
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            s_bad = float(s.flat[bad[0]])
            self.evaluate(s_bad)
            raise ExprDomainError('non-finite value', s_bad)
        return values

    def sample(self, grid) -> np.ndarray:
        ''' Evaluate on every sample of a :class:`icurves.numerics.Grid`. '''
        return self.evaluate_array(grid.samples)

    def derive(self) -> Expr:
        ''' Symbolic derivative with respect to ``s``. '''
        return self._derive()

    def to_text(self) -> str:
        ''' Render as text that parses back to an equivalent tree. '''
        raise NotImplementedError()

    def to_json(self) -> str:
        return self.to_text()

    @classmethod
    def from_json(cls, json: str) -> Expr:
        return parse(json)

    def __str__(self):
        return self.to_text()

    def _eval(self, s: float) -> float:
        raise NotImplementedError()

    def _eval_array(self, s: np.ndarray) -> np.ndarray:
        raise NotImplementedError()

    def _derive(self) -> Expr:
        raise NotImplementedError()


@dataclass(frozen=True)
class Number(Expr):
    value: float

    @property
    def precedence(self) -> int:  # type: ignore[override]
        return _PREC_NEG if self.value < 0 else _PREC_ATOM

    @property
    def is_constant(self) -> bool:
        return True

    def to_text(self) -> str:
        return repr(float(self.value))

    def _eval(self, s):
        return self.value

    def _eval_array(self, s):
        return np.full(s.shape, self.value)

    def _derive(self):
        return ZERO


@dataclass(frozen=True)
class Variable(Expr):
    @property
    def is_constant(self) -> bool:
        return False

    def to_text(self) -> str:
        return VARIABLE

    def _eval(self, s):
        return s

    def _eval_array(self, s):
        return s

    def _derive(self):
        return ONE


@dataclass(frozen=True)
class Constant(Expr):
    name: str

    @property
    def is_constant(self) -> bool:
        return True

    def to_text(self) -> str:
        return self.name

    def _eval(self, s):
        return CONSTANTS[self.name]

    def _eval_array(self, s):
        return np.full(s.shape, CONSTANTS[self.name])

    def _derive(self):
        return ZERO


@dataclass(frozen=True)
class Negate(Expr):
    operand: Expr
    precedence = _PREC_NEG

    @property
    def is_constant(self) -> bool:
        return self.operand.is_constant

    def to_text(self) -> str:
        return '-' + _wrap(self.operand, self.operand.precedence < _PREC_NEG)

    def _eval(self, s):
        return -self.operand._eval(s)

    def _eval_array(self, s):
        return -self.operand._eval_array(s)

    def _derive(self):
        return neg(self.operand._derive())


@dataclass(frozen=True)
class BinaryOp(Expr):
    op: str
    left: Expr
    right: Expr

    @property
    def precedence(self) -> int:  # type: ignore[override]
        return _OP_PREC[self.op]

    @property
    def is_constant(self) -> bool:
        return self.left.is_constant and self.right.is_constant

    def to_text(self) -> str:
        prec = self.precedence
        if self.op == '^':
            left = _wrap(self.left, self.left.precedence < _PREC_ATOM)
            right = _wrap(self.right, self.right.precedence < _PREC_NEG)
            return f'{left}^{right}'
        left = _wrap(self.left, self.left.precedence < prec)
        right = _wrap(self.right, self.right.precedence <= prec)
        if self.op in '+-':
            return f'{left} {self.op} {right}'
        return f'{left}{self.op}{right}'

    def _eval(self, s):
        a = self.left._eval(s)
        b = self.right._eval(s)
        if self.op == '+':
            return a + b
        elif self.op == '-':
            return a - b
        elif self.op == '*':
            return a * b
        elif self.op == '/':
            if b == 0.0:
                raise ExprDomainError('division by zero')
            return a / b
        return _power(a, b, self._integer_exponent())

    def _eval_array(self, s):
        a = self.left._eval_array(s)
        b = self.right._eval_array(s)
        if self.op == '+':
            return a + b
        elif self.op == '-':
            return a - b
        elif self.op == '*':
            return a * b
        elif self.op == '/':
            return a / b
        n = self._integer_exponent()
        if n is not None:
            return np.asarray(a, dtype=float) ** n
        return np.exp(b * np.log(a))

    def _integer_exponent(self) -> typing.Optional[int]:
        ''' The exponent as an ``int`` if it is an integer literal. '''
        if self.op == '^' and isinstance(self.right, Number) \
                and float(self.right.value).is_integer():
            return int(self.right.value)
        return None

    def _derive(self):
        u, v = self.left, self.right
        du, dv = u._derive(), v._derive()
        if self.op == '+':
            return add(du, dv)
        elif self.op == '-':
            return sub(du, dv)
        elif self.op == '*':
            return add(mul(du, v), mul(u, dv))
        elif self.op == '/':
            return div(sub(mul(du, v), mul(u, dv)), power(v, Number(2.0)))
        # Power rule.
        if isinstance(v, Number):
            return mul(mul(v, power(u, Number(v.value - 1.0))), du)
        if u.is_constant:
            return mul(mul(self, call('log', u)), dv)
        return mul(self, add(mul(dv, call('log', u)), div(mul(v, du), u)))


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr

    @property
    def is_constant(self) -> bool:
        return self.arg.is_constant

    def to_text(self) -> str:
        return f'{self.func}({self.arg.to_text()})'

    def _eval(self, s):
        x = self.arg._eval(s)
        f = self.func
        if f in ('asin', 'acos') and not -1.0 <= x <= 1.0:
            raise ExprDomainError(f'{f} argument {x!r} outside [-1, 1]')
        if f == 'sqrt' and x < 0.0:
            raise ExprDomainError(f'sqrt of negative value {x!r}')
        if f == 'log' and x <= 0.0:
            raise ExprDomainError(f'log of non-positive value {x!r}')
        if f == 'abs':
            return abs(x)
        return getattr(math, f)(x)

    def _eval_array(self, s):
        x = self.arg._eval_array(s)
        return _NUMPY_FUNCTIONS[self.func](x)

    def _derive(self):
        u = self.arg
        du = u._derive()
        f = self.func
        if f == 'sin':
            outer = call('cos', u)
        elif f == 'cos':
            outer = neg(call('sin', u))
        elif f == 'tan':
            outer = div(ONE, power(call('cos', u), Number(2.0)))
        elif f == 'asin':
            outer = div(ONE, call('sqrt', sub(ONE, power(u, Number(2.0)))))
        elif f == 'acos':
            outer = neg(div(ONE, call('sqrt', sub(ONE, power(u, Number(2.0))))))
        elif f == 'atan':
            outer = div(ONE, add(ONE, power(u, Number(2.0))))
        elif f == 'sqrt':
            outer = div(ONE, mul(Number(2.0), self))
        elif f == 'exp':
            outer = self
        elif f == 'log':
            outer = div(ONE, u)
        else:
            outer = div(u, self)
        return mul(outer, du)


_NUMPY_FUNCTIONS: typing.Dict[str, typing.Callable[[np.ndarray], np.ndarray]] = {
    'sin': np.sin,
    'cos': np.cos,
    'tan': np.tan,
    'asin': np.arcsin,
    'acos': np.arccos,
    'atan': np.arctan,
    'sqrt': np.sqrt,
    'exp': np.exp,
    'log': np.log,
    'abs': np.abs,
}

ZERO = Number(0.0)
ONE = Number(1.0)
S = Variable()


def _wrap(e: Expr, parens: bool) -> str:
    text = e.to_text()
    return f'({text})' if parens else text


def _power(a: float, b: float, n: typing.Optional[int]) -> float:
    ''' ``a^b`` with an exact path for integer literal exponents. '''
    if n is not None:
        if a == 0.0 and n < 0:
            raise ExprDomainError('zero raised to a negative power')
        return a ** n
    if a > 0.0:
        return math.exp(b * math.log(a))
    if a == 0.0 and b > 0.0:
        return 0.0
    raise ExprDomainError(f'non-integer power of non-positive base {a!r}')


def _fold(e: Expr) -> Expr:
    ''' Replace a constant tree by its value when evaluation succeeds. '''
    if isinstance(e, Number) or not e.is_constant or isinstance(e, Constant):
        return e
    try:
        return Number(e.evaluate(0.0))
    except ExprDomainError:
        return e


def neg(u: Expr) -> Expr:
    if isinstance(u, Number):
        return Number(-u.value)
    if isinstance(u, Negate):
        return u.operand
    return Negate(u)


def add(u: Expr, v: Expr) -> Expr:
    if u == ZERO:
        return v
    if v == ZERO:
        return u
    return _fold(BinaryOp('+', u, v))


def sub(u: Expr, v: Expr) -> Expr:
    if v == ZERO:
        return u
    if u == ZERO:
        return neg(v)
    return _fold(BinaryOp('-', u, v))


def mul(u: Expr, v: Expr) -> Expr:
    if u == ZERO or v == ZERO:
        return ZERO
    if u == ONE:
        return v
    if v == ONE:
        return u
    return _fold(BinaryOp('*', u, v))


def div(u: Expr, v: Expr) -> Expr:
    if v == ONE:
        return u
    if u == ZERO and v != ZERO:
        return ZERO
    return _fold(BinaryOp('/', u, v))


def power(u: Expr, v: Expr) -> Expr:
    if v == ONE:
        return u
    if v == ZERO:
        return ONE
    return _fold(BinaryOp('^', u, v))


def call(func: str, u: Expr) -> Expr:
    return _fold(Call(func, u))


class _Parser:
    ''' Recursive descent parser over a pre-tokenized string. '''
    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _offset(self, index: int) -> int:
        return len(self.text[:index].encode('utf-8'))

    def _tokenize(self, text):
        tokens = list()
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            match = _TOKEN_RE.match(text, i)
            if not match:
                raise ExprSyntaxError(f'unexpected character {text[i]!r}',
                    self._offset(i))
            kind = match.lastgroup
            tokens.append((kind, match.group(kind), i))
            i = match.end()
        return tokens

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return ('end', '', len(self.text))

    def take(self):
        token = self.peek()
        self.pos += 1
        return token

    def expect(self, text: str):
        kind, value, index = self.peek()
        if value != text or kind != 'op':
            found = 'end of input' if kind == 'end' else repr(value)
            raise ExprSyntaxError(f'expected {text!r} but found {found}',
                self._offset(index))
        self.pos += 1

    def parse(self) -> Expr:
        if not self.tokens:
            raise ExprSyntaxError('empty expression', 0)
        e = self.expr()
        kind, value, index = self.peek()
        if kind != 'end':
            raise ExprSyntaxError(f'unexpected {value!r}', self._offset(index))
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ('+', '-') and self.peek()[0] == 'op':
            op = self.take()[1]
            e = BinaryOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ('*', '/') and self.peek()[0] == 'op':
            op = self.take()[1]
            e = BinaryOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        kind, value, _ = self.peek()
        if kind == 'op' and value == '-':
            self.take()
            operand = self.unary()
            if isinstance(operand, Number):
                return Number(-operand.value)
            return Negate(operand)
        if kind == 'op' and value == '+':
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == 'op' and value == '^':
            self.take()
            return BinaryOp('^', base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, value, index = self.take()
        if kind == 'number':
            return Number(float(value))
        if kind == 'name':
            if value == VARIABLE:
                return S
            if value in CONSTANTS:
                return Constant(value)
            if value in FUNCTIONS:
                self.expect('(')
                arg = self.expr()
                self.expect(')')
                return Call(value, arg)
            raise UnknownIdentifierError(value, self._offset(index))
        if kind == 'op' and value == '(':
            e = self.expr()
            self.expect(')')
            return e
        found = 'end of input' if kind == 'end' else repr(value)
        raise ExprSyntaxError(f'expected an operand but found {found}',
            self._offset(index))


def parse(text: str) -> Expr:
    '''
    Parse an expression in ``s``.

    :raises ExprSyntaxError: with the byte offset of the problem.
    :raises UnknownIdentifierError: for names other than ``s``, ``pi`` and the
        supported functions.
    '''
    e = _Parser(text).parse()
    logger.debug('Parsed %r as %s', text, e)
    return e


def eval_(e: Expr, s: float) -> float:
    ''' Evaluate ``e`` at arc length ``s``. '''
    return e.evaluate(s)


def derive(e: Expr) -> Expr:
    ''' Symbolic derivative of ``e`` with constant folding. '''
    return e.derive()
