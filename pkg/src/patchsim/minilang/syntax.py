"""Lexer, parser, AST, and pretty-printer for the mini-language.

Statements are numbered densely 0..n-1 in source order at parse time; the
tracer emits these IDs. Node equality ignores source positions so that a
program compares equal to its pretty-printed-and-reparsed self.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

KEYWORDS = {
    "fn", "let", "if", "else", "while", "return",
    "throw", "try", "catch", "assert", "true", "false",
}

_TWO_CHAR = {"==", "!=", "<=", ">=", "&&", "||"}
_ONE_CHAR = set("(){}[],;=<>+-*/%!")


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # name, int, string, punct, eof
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":  # comment to end of line
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if source[i : i + 2] in _TWO_CHAR:
            toks.append(Token("punct", source[i : i + 2], line, start_col))
            i += 2
            col += 2
            continue
        if c in _ONE_CHAR:
            toks.append(Token("punct", c, line, start_col))
            i += 1
            col += 1
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            toks.append(Token("int", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            toks.append(Token("name", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c == '"':
            j = i + 1
            out = []
            while j < n and source[j] != '"':
                if source[j] == "\n":
                    raise ParseError("unterminated string", line, start_col)
                if source[j] == "\\":
                    if j + 1 >= n:
                        raise ParseError("dangling escape", line, start_col)
                    esc = source[j + 1]
                    if esc == "n":
                        out.append("\n")
                    elif esc in ('"', "\\"):
                        out.append(esc)
                    else:
                        raise ParseError(f"unknown escape \\{esc}", line, start_col)
                    j += 2
                else:
                    out.append(source[j])
                    j += 1
            if j >= n:
                raise ParseError("unterminated string", line, start_col)
            toks.append(Token("string", "".join(out), line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


# Expressions ---------------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class StrLit:
    value: str


@dataclass(frozen=True)
class ArrayLit:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Index:
    base: "Expr"
    index: "Expr"


Expr = Union[IntLit, BoolLit, StrLit, ArrayLit, Name, BinOp, UnaryOp, Call, Index]


# Statements ----------------------------------------------------------------


@dataclass(frozen=True)
class Let:
    stmt_id: int
    var: str
    value: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assign:
    stmt_id: int
    var: str
    value: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class IndexAssign:
    stmt_id: int
    var: str
    index: Expr
    value: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class If:
    stmt_id: int
    cond: Expr
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class While:
    stmt_id: int
    cond: Expr
    body: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Return:
    stmt_id: int
    value: Expr | None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Throw:
    stmt_id: int
    tag: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TryCatch:
    stmt_id: int
    body: tuple["Stmt", ...]
    tag: str
    handler: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assert:
    stmt_id: int
    cond: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExprStmt:
    stmt_id: int
    value: Expr
    line: int = field(default=0, compare=False)


Stmt = Union[Let, Assign, IndexAssign, If, While, Return, Throw, TryCatch, Assert, ExprStmt]


@dataclass(frozen=True)
class Function:
    name: str
    params: tuple[str, ...]
    body: tuple[Stmt, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Program:
    functions: tuple[Function, ...]
    n_statements: int
    source: str = field(default="", compare=False)

    def function(self, name: str) -> Function | None:
        for f in self.functions:
            if f.name == name:
                return f
        return None

    def statement_owners(self) -> dict[int, str]:
        """Map every statement ID to the name of the function holding it."""
        owners: dict[int, str] = {}

        def walk(stmts, fname):
            for s in stmts:
                owners[s.stmt_id] = fname
                for sub in _substatements(s):
                    walk(sub, fname)

        for f in self.functions:
            walk(f.body, f.name)
        return owners

    def statement_lines(self) -> dict[int, int]:
        """Map every statement ID to its 1-based source line."""
        lines: dict[int, int] = {}

        def walk(stmts):
            for s in stmts:
                lines[s.stmt_id] = s.line
                for sub in _substatements(s):
                    walk(sub)

        for f in self.functions:
            walk(f.body)
        return lines


def _substatements(s: Stmt) -> tuple[tuple[Stmt, ...], ...]:
    if isinstance(s, If):
        return (s.then, s.orelse)
    if isinstance(s, While):
        return (s.body,)
    if isinstance(s, TryCatch):
        return (s.body, s.handler)
    return ()


class _Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0
        self.next_id = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, message: str):
        t = self.peek()
        raise ParseError(message, t.line, t.col)

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.kind != "punct" or t.text != text:
            self.fail(f"expected {text!r}, found {t.text or t.kind!r}")
        return self.advance()

    def expect_name(self) -> Token:
        t = self.peek()
        if t.kind != "name" or t.text in KEYWORDS:
            self.fail(f"expected identifier, found {t.text or t.kind!r}")
        return self.advance()

    def at_keyword(self, kw: str) -> bool:
        t = self.peek()
        return t.kind == "name" and t.text == kw

    def eat_keyword(self, kw: str):
        if not self.at_keyword(kw):
            self.fail(f"expected {kw!r}")
        return self.advance()

    def take_id(self) -> int:
        i = self.next_id
        self.next_id += 1
        return i

    # program := fndef*
    def parse_program(self, source: str) -> Program:
        functions = []
        names = set()
        while self.peek().kind != "eof":
            f = self.parse_function()
            if f.name in names:
                raise ParseError(f"duplicate function {f.name!r}", f.line, 1)
            names.add(f.name)
            functions.append(f)
        return Program(tuple(functions), self.next_id, source)

    def parse_function(self) -> Function:
        kw = self.eat_keyword("fn")
        name = self.expect_name().text
        self.expect("(")
        params = []
        if not (self.peek().kind == "punct" and self.peek().text == ")"):
            params.append(self.expect_name().text)
            while self.peek().text == ",":
                self.advance()
                params.append(self.expect_name().text)
        self.expect(")")
        if len(set(params)) != len(params):
            raise ParseError(f"duplicate parameter in {name!r}", kw.line, kw.col)
        body = self.parse_block()
        return Function(name, tuple(params), body, line=kw.line)

    def parse_block(self) -> tuple[Stmt, ...]:
        self.expect("{")
        stmts = []
        while not (self.peek().kind == "punct" and self.peek().text == "}"):
            if self.peek().kind == "eof":
                self.fail("unterminated block")
            stmts.append(self.parse_statement())
        self.expect("}")
        return tuple(stmts)

    def parse_statement(self) -> Stmt:
        t = self.peek()
        if t.kind == "name" and t.text in KEYWORDS:
            if t.text == "let":
                sid, line = self.take_id(), self.advance().line
                var = self.expect_name().text
                self.expect("=")
                value = self.parse_expr()
                self.expect(";")
                return Let(sid, var, value, line=line)
            if t.text == "if":
                sid, line = self.take_id(), self.advance().line
                self.expect("(")
                cond = self.parse_expr()
                self.expect(")")
                then = self.parse_block()
                orelse: tuple[Stmt, ...] = ()
                if self.at_keyword("else"):
                    self.advance()
                    orelse = self.parse_block()
                return If(sid, cond, then, orelse, line=line)
            if t.text == "while":
                sid, line = self.take_id(), self.advance().line
                self.expect("(")
                cond = self.parse_expr()
                self.expect(")")
                body = self.parse_block()
                return While(sid, cond, body, line=line)
            if t.text == "return":
                sid, line = self.take_id(), self.advance().line
                value = None
                if not (self.peek().kind == "punct" and self.peek().text == ";"):
                    value = self.parse_expr()
                self.expect(";")
                return Return(sid, value, line=line)
            if t.text == "throw":
                sid, line = self.take_id(), self.advance().line
                tag = self.expect_name().text
                self.expect(";")
                return Throw(sid, tag, line=line)
            if t.text == "try":
                sid, line = self.take_id(), self.advance().line
                body = self.parse_block()
                self.eat_keyword("catch")
                self.expect("(")
                tag = self.expect_name().text
                self.expect(")")
                handler = self.parse_block()
                return TryCatch(sid, body, tag, handler, line=line)
            if t.text == "assert":
                sid, line = self.take_id(), self.advance().line
                cond = self.parse_expr()
                self.expect(";")
                return Assert(sid, cond, line=line)
            self.fail(f"unexpected keyword {t.text!r}")
        # assignment or expression statement: needs lookahead after the lvalue
        if t.kind == "name":
            save = self.pos
            sid = self.take_id()
            name = self.advance()
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.text == "=":
                self.advance()
                value = self.parse_expr()
                self.expect(";")
                return Assign(sid, name.text, value, line=name.line)
            if nxt.kind == "punct" and nxt.text == "[":
                # could be a[i] = v; or an expression like a[i] + 1;
                self.advance()
                index = self.parse_expr()
                self.expect("]")
                if self.peek().kind == "punct" and self.peek().text == "=":
                    self.advance()
                    value = self.parse_expr()
                    self.expect(";")
                    return IndexAssign(sid, name.text, index, value, line=name.line)
            self.pos = save  # plain expression statement: reparse from the name
        sid = self.next_id - 1 if t.kind == "name" else self.take_id()
        value = self.parse_expr()
        self.expect(";")
        return ExprStmt(sid, value, line=t.line)

    # precedence climbing
    _LEVELS = (("||",), ("&&",), ("==", "!="), ("<", "<=", ">", ">="), ("+", "-"), ("*", "/", "%"))

    def parse_expr(self, level: int = 0) -> Expr:
        if level == len(self._LEVELS):
            return self.parse_unary()
        left = self.parse_expr(level + 1)
        while self.peek().kind == "punct" and self.peek().text in self._LEVELS[level]:
            op = self.advance().text
            right = self.parse_expr(level + 1)
            left = BinOp(op, left, right)
        return left

    def parse_unary(self) -> Expr:
        t = self.peek()
        if t.kind == "punct" and t.text in ("!", "-"):
            self.advance()
            return UnaryOp(t.text, self.parse_unary())
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        e = self.parse_atom()
        while self.peek().kind == "punct" and self.peek().text == "[":
            self.advance()
            idx = self.parse_expr()
            self.expect("]")
            e = Index(e, idx)
        return e

    def parse_atom(self) -> Expr:
        t = self.peek()
        if t.kind == "int":
            self.advance()
            return IntLit(int(t.text))
        if t.kind == "string":
            self.advance()
            return StrLit(t.text)
        if t.kind == "name":
            if t.text == "true":
                self.advance()
                return BoolLit(True)
            if t.text == "false":
                self.advance()
                return BoolLit(False)
            if t.text in KEYWORDS:
                self.fail(f"unexpected keyword {t.text!r} in expression")
            self.advance()
            if self.peek().kind == "punct" and self.peek().text == "(":
                self.advance()
                args = []
                if not (self.peek().kind == "punct" and self.peek().text == ")"):
                    args.append(self.parse_expr())
                    while self.peek().text == ",":
                        self.advance()
                        args.append(self.parse_expr())
                self.expect(")")
                return Call(t.text, tuple(args))
            return Name(t.text)
        if t.kind == "punct" and t.text == "(":
            self.advance()
            e = self.parse_expr()
            self.expect(")")
            return e
        if t.kind == "punct" and t.text == "[":
            self.advance()
            items = []
            if not (self.peek().kind == "punct" and self.peek().text == "]"):
                items.append(self.parse_expr())
                while self.peek().text == ",":
                    self.advance()
                    items.append(self.parse_expr())
            self.expect("]")
            return ArrayLit(tuple(items))
        self.fail(f"unexpected token {t.text or t.kind!r}")


def parse(source: str) -> Program:
    return _Parser(tokenize(source)).parse_program(source)


# Pretty-printer ------------------------------------------------------------

_PRECEDENCE = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, "<=": 4, ">": 4, ">=": 4,
               "+": 5, "-": 5, "*": 6, "/": 6, "%": 6}
_UNARY_PRECEDENCE = 7


def _fmt_expr(e: Expr, parent_prec: int = 0) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, StrLit):
        body = e.value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{body}"'
    if isinstance(e, Name):
        return e.ident
    if isinstance(e, ArrayLit):
        return "[" + ", ".join(_fmt_expr(x) for x in e.items) + "]"
    if isinstance(e, Call):
        return e.func + "(" + ", ".join(_fmt_expr(a) for a in e.args) + ")"
    if isinstance(e, Index):
        return _fmt_expr(e.base, _UNARY_PRECEDENCE + 1) + "[" + _fmt_expr(e.index) + "]"
    if isinstance(e, UnaryOp):
        inner = _fmt_expr(e.operand, _UNARY_PRECEDENCE)
        text = e.op + inner
        return f"({text})" if parent_prec > _UNARY_PRECEDENCE else text
    if isinstance(e, BinOp):
        prec = _PRECEDENCE[e.op]
        # left-associative: the right child needs strictly higher precedence
        text = f"{_fmt_expr(e.left, prec)} {e.op} {_fmt_expr(e.right, prec + 1)}"
        return f"({text})" if parent_prec > prec else text
    raise TypeError(f"not an expression: {e!r}")


def _fmt_stmts(stmts, indent: int, out: list[str]):
    pad = "  " * indent
    for s in stmts:
        if isinstance(s, Let):
            out.append(f"{pad}let {s.var} = {_fmt_expr(s.value)};")
        elif isinstance(s, Assign):
            out.append(f"{pad}{s.var} = {_fmt_expr(s.value)};")
        elif isinstance(s, IndexAssign):
            out.append(f"{pad}{s.var}[{_fmt_expr(s.index)}] = {_fmt_expr(s.value)};")
        elif isinstance(s, If):
            out.append(f"{pad}if ({_fmt_expr(s.cond)}) {{")
            _fmt_stmts(s.then, indent + 1, out)
            if s.orelse:
                out.append(f"{pad}}} else {{")
                _fmt_stmts(s.orelse, indent + 1, out)
            out.append(f"{pad}}}")
        elif isinstance(s, While):
            out.append(f"{pad}while ({_fmt_expr(s.cond)}) {{")
            _fmt_stmts(s.body, indent + 1, out)
            out.append(f"{pad}}}")
        elif isinstance(s, Return):
            out.append(f"{pad}return {_fmt_expr(s.value)};" if s.value is not None else f"{pad}return;")
        elif isinstance(s, Throw):
            out.append(f"{pad}throw {s.tag};")
        elif isinstance(s, TryCatch):
            out.append(f"{pad}try {{")
            _fmt_stmts(s.body, indent + 1, out)
            out.append(f"{pad}}} catch ({s.tag}) {{")
            _fmt_stmts(s.handler, indent + 1, out)
            out.append(f"{pad}}}")
        elif isinstance(s, Assert):
            out.append(f"{pad}assert {_fmt_expr(s.cond)};")
        elif isinstance(s, ExprStmt):
            out.append(f"{pad}{_fmt_expr(s.value)};")
        else:
            raise TypeError(f"not a statement: {s!r}")


def pretty_print(p: Program) -> str:
    out: list[str] = []
    for f in p.functions:
        out.append(f"fn {f.name}({', '.join(f.params)}) {{")
        _fmt_stmts(f.body, 1, out)
        out.append("}")
        out.append("")
    return "\n".join(out)


def function_text(f: Function) -> str:
    """Canonical text of one function, for change detection across versions."""
    out = [f"fn {f.name}({', '.join(f.params)}) {{"]
    _fmt_stmts(f.body, 1, out)
    out.append("}")
    return "\n".join(out)
