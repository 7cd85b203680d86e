"""Exact arithmetic in the field of fractions of multivariate Laurent polynomials.

Every scalar in this package is a :class:`FieldElem`: a quotient of two
Laurent polynomials over Q in named symbols.  All the parameter families we
work with (``t_ij``, bubble values, rescaling units ``D_i``) are invertible
symbols, so in practice denominators stay monomial and elements normalize to
plain Laurent polynomials; general polynomial denominators are still
supported, with equality decided by cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction

# A monomial is a sorted tuple of (symbol, exponent) with nonzero exponents;
# a polynomial is a dict {monomial: coefficient} with nonzero coefficients.
# Coefficients are ints where possible and Fractions otherwise (the two mix
# freely and compare equal, and integer arithmetic is much faster).
ONE_MONO = ()


def _div_coeff(a, b):
    if b == 1:
        return a
    if b == -1:
        return -a
    return Fraction(a) / b


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for sym, e in m2:
        ne = exps.get(sym, 0) + e
        if ne:
            exps[sym] = ne
        else:
            del exps[sym]
    return tuple(sorted(exps.items()))


def _mono_pow(m, k):
    if k == 0 or not m:
        return ONE_MONO
    return tuple((sym, e * k) for sym, e in m)


def _poly_add(p1, p2):
    out = dict(p1)
    for m, c in p2.items():
        nc = out.get(m, 0) + c
        if nc:
            out[m] = nc
        else:
            out.pop(m, None)
    return out


def _poly_neg(p):
    return {m: -c for m, c in p.items()}


def _poly_mul(p1, p2):
    if not p1 or not p2:
        return {}
    if len(p1) == 1 and len(p2) == 1:
        (m1, c1), = p1.items()
        (m2, c2), = p2.items()
        return {_mono_mul(m1, m2): c1 * c2}
    if len(p1) > len(p2):
        p1, p2 = p2, p1
    out = {}
    for m1, c1 in p1.items():
        for m2, c2 in p2.items():
            m = _mono_mul(m1, m2)
            nc = out.get(m, 0) + c1 * c2
            if nc:
                out[m] = nc
            else:
                del out[m]
    return out


def _poly_scale(p, c):
    if not c:
        return {}
    return {m: co * c for m, co in p.items()}


_DEN_ONE = {ONE_MONO: 1}


class FieldElem:
    """An exact Laurent-rational scalar.

    Internally a pair of polynomials ``num/den``; a single-monomial
    denominator is always folded into the numerator, so the common case is a
    pure Laurent polynomial with ``den == 1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None or den is _DEN_ONE:
            self.num = num
            self.den = _DEN_ONE
            return
        if not den:
            raise ZeroDivisionError("denominator is zero")
        if not num:
            den = _DEN_ONE
        elif len(den) == 1:
            # fold monomial denominator into the (Laurent) numerator
            (m, c), = den.items()
            if not m and c == 1:
                pass
            elif not m:
                num = {mm: _div_coeff(cc, c) for mm, cc in num.items()}
            else:
                inv = _mono_pow(m, -1)
                num = {_mono_mul(mm, inv): _div_coeff(cc, c) for mm, cc in num.items()}
            den = _DEN_ONE
        else:
            # make the lexicographically least denominator monomial monic
            lead = min(den)
            c = den[lead]
            if c != 1:
                num = {m: _div_coeff(cc, c) for m, cc in num.items()}
                den = {m: _div_coeff(cc, c) for m, cc in den.items()}
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int(n):
        return FieldElem({ONE_MONO: n} if n else {})

    @staticmethod
    def from_fraction(q):
        q = Fraction(q)
        if q.denominator == 1:
            return FieldElem.from_int(q.numerator)
        return FieldElem({ONE_MONO: q} if q else {})

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.den == _DEN_ONE and self.num == _DEN_ONE

    def is_invertible(self):
        return bool(self.num)

    def is_monomial(self):
        return len(self.num) == 1 and len(self.den) == 1

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if self.den is _DEN_ONE and other.den is _DEN_ONE:
            return FieldElem(_poly_add(self.num, other.num))
        if self.den == other.den:
            return FieldElem(_poly_add(self.num, other.num), dict(self.den))
        return FieldElem(
            _poly_add(_poly_mul(self.num, other.den), _poly_mul(other.num, self.den)),
            _poly_mul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        if self.den is _DEN_ONE:
            return FieldElem(_poly_neg(self.num))
        return FieldElem(_poly_neg(self.num), dict(self.den))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if self.den is _DEN_ONE and other.den is _DEN_ONE:
            return FieldElem(_poly_mul(self.num, other.num))
        return FieldElem(_poly_mul(self.num, other.num), _poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if not other.num:
            raise ZeroDivisionError("division by zero FieldElem")
        if self.den is _DEN_ONE and len(other.num) == 1 and other.den is _DEN_ONE:
            return FieldElem(dict(self.num), dict(other.num))
        return FieldElem(_poly_mul(self.num, other.den), _poly_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def inv(self):
        return ONE / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k == 0:
            return ONE
        base = self if k > 0 else self.inv()
        out = ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        other = _coerce(other)
        if self.den == other.den:
            return self.num == other.num
        return _poly_mul(self.num, other.den) == _poly_mul(other.num, self.den)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        # canonical enough for the pure-polynomial fast path, which is the
        # only place elements are used as dict keys
        if self.den == _DEN_ONE:
            return hash(frozenset(self.num.items()))
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    # -- rendering ---------------------------------------------------------

    def __str__(self):
        num = _poly_str(self.num)
        if self.den == _DEN_ONE:
            return num
        den = _poly_str(self.den)
        if len(self.den) > 1:
            den = "(" + den + ")"
        if len(self.num) > 1:
            num = "(" + num + ")"
        return f"{num} / {den}"

    def __repr__(self):
        return f"FieldElem({self})"


def _coerce(x):
    if isinstance(x, FieldElem):
        return x
    if isinstance(x, int):
        return FieldElem.from_int(x)
    if isinstance(x, Fraction):
        return FieldElem.from_fraction(x)
    raise TypeError(f"cannot coerce {x!r} to FieldElem")


ZERO = FieldElem({})
ONE = FieldElem({ONE_MONO: 1})
MINUS_ONE = FieldElem({ONE_MONO: -1})


def sym(name):
    """The symbol ``name`` as a field element."""
    if not name or not (name[0].isalpha() or name[0] == "_"):
        raise ValueError(f"bad symbol name {name!r}")
    return FieldElem({((name, 1),): 1})


def _mono_str(m, c):
    parts = []
    for s, e in m:
        parts.append(s if e == 1 else f"{s}^{e}")
    body = "*".join(parts)
    if not body:
        return str(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c}*{body}"


def _poly_str(p):
    if not p:
        return "0"
    chunks = []
    for m in sorted(p):
        s = _mono_str(m, p[m])
        if chunks and not s.startswith("-"):
            chunks.append("+ " + s)
        elif chunks:
            chunks.append("- " + s[1:])
        else:
            chunks.append(s)
    return " ".join(chunks)


# -- expression grammar ----------------------------------------------------
#
#   expr   := term (('+' | '-') term)*
#   term   := factor (('*' | '/') factor)*
#   factor := '-' factor | atom ('^' sint)?
#   atom   := ident | integer | '(' expr ')'
#
# This grammar is part of the parameter-file contract.


class ExprError(ValueError):
    pass


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*/^()":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(int(text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise ExprError(f"unexpected character {ch!r} in expression")
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise ExprError(f"expected {tok!r}, got {got!r}")

    def expr(self):
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.next()
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.factor()
        while self.peek() in ("*", "/"):
            op = self.next()
            rhs = self.factor()
            out = out * rhs if op == "*" else out / rhs
        return out

    def factor(self):
        if self.peek() == "-":
            self.next()
            return -self.factor()
        base = self.atom()
        if self.peek() == "^":
            self.next()
            sign = 1
            if self.peek() == "-":
                self.next()
                sign = -1
            k = self.next()
            if not isinstance(k, int):
                raise ExprError(f"exponent must be an integer, got {k!r}")
            return base ** (sign * k)
        return base

    def atom(self):
        tok = self.next()
        if isinstance(tok, int):
            return FieldElem.from_int(tok)
        if tok == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if isinstance(tok, str) and (tok[0].isalpha() or tok[0] == "_"):
            return sym(tok)
        raise ExprError(f"unexpected token {tok!r}")


def parse_expr(text):
    """Parse a Laurent-rational expression string into a FieldElem."""
    parser = _Parser(_tokenize(text))
    out = parser.expr()
    if parser.peek() is not None:
        raise ExprError(f"trailing input at token {parser.peek()!r}")
    return out
