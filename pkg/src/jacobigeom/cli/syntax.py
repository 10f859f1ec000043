"""Lexer, AST, recursive-descent parser and printer for structure documents.

    document  := statement*
    statement := chart | sample | binding | command      (ended by newline or ';')
    chart     := "chart" "(" IDENT ("," IDENT)* ")"
    sample    := "sample" "(" IDENT "=" expr ("," IDENT "=" expr)* ")"
    binding   := IDENT "=" expr
    command   := VERB [arg ("," arg)*]        VERB is a hyphenated word
    arg       := IDENT "=" expr | expr
    expr      := term (("+" | "-") term)*
    term      := unary (("*" | "/") unary)*
    unary     := "-" unary | power
    power     := atom ("^" atom)*
    atom      := INT | IDENT | "@" IDENT | IDENT "(" [arg ("," arg)*] ")" | "(" expr ")"

``^`` is the wedge product, and the power operator when the left side is a
scalar.  ``dx`` is the coordinate 1-form, ``@x`` the coordinate vector field,
``j`` the jet of the constant 1 and ``one`` the identity derivation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import DSLSyntaxError

RESERVED_WORDS = frozenset({"chart", "sample", "i", "j", "one", "d"})


# ---- tokens --------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str       # INT IDENT OP NL EOF
    text: str
    line: int
    col: int
    end: int        # column just past the token


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    depth = 0
    for ln, line in enumerate(text.splitlines() or [""], start=1):
        k = 0
        while k < len(line):
            ch = line[k]
            if ch in " \t\r":
                k += 1
                continue
            if ch == "#":
                break
            col = k + 1
            if ch.isdigit():
                m = k
                while m < len(line) and line[m].isdigit():
                    m += 1
                toks.append(Token("INT", line[k:m], ln, col, m + 1))
                k = m
            elif ch.isalpha() or ch == "_":
                m = k
                while m < len(line) and (line[m].isalnum() or line[m] == "_"):
                    m += 1
                toks.append(Token("IDENT", line[k:m], ln, col, m + 1))
                k = m
            elif ch in "+-*/^()=,@;":
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth = max(depth - 1, 0)
                if ch == ";":
                    toks.append(Token("NL", ";", ln, col, col + 1))
                else:
                    toks.append(Token("OP", ch, ln, col, col + 1))
                k += 1
            else:
                raise DSLSyntaxError(f"unexpected character {ch!r}", ln, col)
        if depth == 0:
            toks.append(Token("NL", "\n", ln, len(line) + 1, len(line) + 2))
    last = len(text.splitlines()) or 1
    toks.append(Token("EOF", "", last, 1, 1))
    return toks


# ---- AST ------------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    id: str


@dataclass(frozen=True)
class Vec:
    coord: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...] = ()
    kwargs: tuple[tuple[str, "Expr"], ...] = ()


Expr = Union[Num, Name, Vec, Neg, BinOp, Call]


@dataclass(frozen=True)
class ChartDecl:
    names: tuple[str, ...]
    line: int = 0


@dataclass(frozen=True)
class SampleDecl:
    values: tuple[tuple[str, Expr], ...]
    line: int = 0


@dataclass(frozen=True)
class Binding:
    name: str
    expr: Expr
    line: int = 0


@dataclass(frozen=True)
class Command:
    verb: str
    args: tuple[Expr, ...] = ()
    kwargs: tuple[tuple[str, Expr], ...] = ()
    line: int = 0


Statement = Union[ChartDecl, SampleDecl, Binding, Command]


@dataclass(frozen=True)
class Document:
    statements: tuple[Statement, ...]

    @property
    def commands(self) -> list[Command]:
        return [s for s in self.statements if isinstance(s, Command)]

    def canonical(self) -> "Document":
        """Same document with source positions dropped."""
        out = []
        for s in self.statements:
            if isinstance(s, ChartDecl):
                out.append(ChartDecl(s.names))
            elif isinstance(s, SampleDecl):
                out.append(SampleDecl(s.values))
            elif isinstance(s, Binding):
                out.append(Binding(s.name, s.expr))
            else:
                out.append(Command(s.verb, s.args, s.kwargs))
        return Document(tuple(out))


# ---- parser ----------------------------------------------------------------------------

class Parser:
    def __init__(self, text: str, verbs: frozenset[str] | None = None):
        self.toks = tokenize(text)
        self.pos = 0
        self.verbs = verbs

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        raise DSLSyntaxError(msg, t.line, t.col)

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            want = text or kind
            got = self.tok.text if self.tok.kind not in ("NL", "EOF") else "end of statement"
            self.error(f"expected {want!r}, got {got!r}")
        return self.advance()

    # statements
    def document(self) -> Document:
        stmts = []
        while not self.at("EOF"):
            if self.at("NL"):
                self.advance()
                continue
            stmts.append(self.statement())
            if not self.at("EOF"):
                self.expect("NL")
        return Document(tuple(stmts))

    def statement(self) -> Statement:
        t = self.tok
        if t.kind != "IDENT":
            self.error(f"statement cannot start with {t.text!r}")
        if t.text == "chart" and self.peek().text == "(":
            return self.chart_decl()
        if t.text == "sample" and self.peek().text == "(":
            return self.sample_decl()
        if self.peek().kind == "OP" and self.peek().text == "=":
            name = self.advance()
            if name.text in RESERVED_WORDS:
                self.error(f"cannot bind reserved name {name.text!r}", name)
            self.advance()
            return Binding(name.text, self.expr(), t.line)
        return self.command()

    def chart_decl(self) -> ChartDecl:
        line = self.advance().line
        self.expect("OP", "(")
        names: list[str] = []
        while True:
            t = self.expect("IDENT")
            if t.text in names:
                self.error(f"duplicate coordinate {t.text!r}", t)
            if t.text in RESERVED_WORDS or t.text.startswith("d"):
                self.error(f"invalid coordinate name {t.text!r}", t)
            names.append(t.text)
            if self.at("OP", ","):
                self.advance()
                continue
            break
        self.expect("OP", ")")
        return ChartDecl(tuple(names), line)

    def sample_decl(self) -> SampleDecl:
        line = self.advance().line
        self.expect("OP", "(")
        vals: list[tuple[str, Expr]] = []
        seen: set[str] = set()
        while True:
            t = self.expect("IDENT")
            if t.text in seen:
                self.error(f"duplicate sample coordinate {t.text!r}", t)
            seen.add(t.text)
            self.expect("OP", "=")
            vals.append((t.text, self.expr()))
            if self.at("OP", ","):
                self.advance()
                continue
            break
        self.expect("OP", ")")
        return SampleDecl(tuple(vals), line)

    def command(self) -> Command:
        first = self.advance()
        parts = [first.text]
        end = first.end
        # a verb is a hyphenated word written without spaces
        while (self.at("OP", "-") and self.tok.col == end
               and self.peek().kind == "IDENT" and self.peek().col == self.tok.end):
            self.advance()
            w = self.advance()
            parts.append(w.text)
            end = w.end
        verb = "-".join(parts)
        if self.verbs is not None and verb not in self.verbs:
            self.error(f"unknown command {verb!r}", first)
        args, kwargs = [], []
        if not (self.at("NL") or self.at("EOF")):
            args, kwargs = self.arglist()
        return Command(verb, tuple(args), tuple(kwargs), first.line)

    def arglist(self, closer: str | None = None):
        args: list[Expr] = []
        kwargs: list[tuple[str, Expr]] = []
        while True:
            if self.at("IDENT") and self.peek().kind == "OP" and self.peek().text == "=":
                k = self.advance()
                self.advance()
                if any(k.text == kk for kk, _ in kwargs):
                    self.error(f"repeated keyword {k.text!r}", k)
                kwargs.append((k.text, self.expr()))
            else:
                if kwargs:
                    self.error("positional argument after keyword argument")
                args.append(self.expr())
            if self.at("OP", ","):
                self.advance()
                continue
            return args, kwargs

    # expressions
    def expr(self) -> Expr:
        left = self.term()
        while self.at("OP", "+") or self.at("OP", "-"):
            op = self.advance().text
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("OP", "*") or self.at("OP", "/"):
            op = self.advance().text
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.at("OP", "-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        left = self.atom()
        while self.at("OP", "^"):
            self.advance()
            left = BinOp("^", left, self.atom())
        return left

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return Num(int(t.text))
        if t.kind == "IDENT":
            self.advance()
            if self.at("OP", "("):
                self.advance()
                args, kwargs = ([], [])
                if not self.at("OP", ")"):
                    args, kwargs = self.arglist()
                self.expect("OP", ")")
                return Call(t.text, tuple(args), tuple(kwargs))
            return Name(t.text)
        if t.kind == "OP" and t.text == "@":
            self.advance()
            name = self.expect("IDENT")
            if name.col != t.end:
                self.error("'@' must be followed directly by a coordinate", name)
            return Vec(name.text)
        if t.kind == "OP" and t.text == "(":
            self.advance()
            e = self.expr()
            self.expect("OP", ")")
            return e
        got = t.text if t.kind not in ("NL", "EOF") else "end of statement"
        self.error(f"expected an expression, got {got!r}")


def parse(text: str, verbs: frozenset[str] | None = None) -> Document:
    return Parser(text, verbs).document()


def parse_expr(text: str) -> Expr:
    p = Parser(text)
    while p.at("NL"):
        p.advance()
    e = p.expr()
    while p.at("NL"):
        p.advance()
    if not p.at("EOF"):
        p.error(f"unexpected {p.tok.text!r} after expression")
    return e


# ---- printer ---------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return 5


def show(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Vec):
        return "@" + e.coord
    if isinstance(e, Neg):
        inner = show(e.operand)
        return "-" + (inner if _prec(e.operand) >= 3 else f"({inner})")
    if isinstance(e, Call):
        return f"{e.func}({_args(e.args, e.kwargs)})"
    p = _PREC[e.op]
    left, right = show(e.left), show(e.right)
    if _prec(e.left) < p:
        left = f"({left})"
    # left-associative: equal precedence on the right needs parentheses
    if _prec(e.right) <= p or (e.op == "^" and _prec(e.right) < 5):
        right = f"({right})"
    if e.op == "^":
        return f"{left}^{right}"
    return f"{left} {e.op} {right}"


def _args(args, kwargs) -> str:
    parts = [show(a) for a in args] + [f"{k}={show(v)}" for k, v in kwargs]
    return ", ".join(parts)


def show_statement(s: Statement) -> str:
    if isinstance(s, ChartDecl):
        return f"chart ({', '.join(s.names)})"
    if isinstance(s, SampleDecl):
        return "sample (" + ", ".join(f"{k}={show(v)}" for k, v in s.values) + ")"
    if isinstance(s, Binding):
        return f"{s.name} = {show(s.expr)}"
    rest = _args(s.args, s.kwargs)
    return f"{s.verb} {rest}" if rest else s.verb


def show_document(doc: Document) -> str:
    return "".join(show_statement(s) + "\n" for s in doc.statements)
