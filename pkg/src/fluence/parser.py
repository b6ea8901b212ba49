"""Recursive descent parser for the surface language.

Grammar sketch (layout tokens come from the lexer):

    module     ::= import* item*
    import     ::= "import" STRING NEWLINE
    item       ::= definition | expr NEWLINE          -- at most one final expr
    definition ::= "def" name "(" patterns ")" ":" body
                 | "def" pattern "=" body
    body       ::= expr NEWLINE
                 | NEWLINE INDENT definition* expr NEWLINE? DEDENT
    expr       ::= "if" binary ":" arm "else" ":" arm
                 | "match" binary ":" NEWLINE INDENT clause+ DEDENT
                 | "fun" "(" patterns ")" ":" arm
                 | binary
    binary     ::= precedence climbing:  or < and < comparisons < `f` < ++
                   < + - < * / % < **   (all left-associative)
    unary      ::= "@doc" "(" expr ")" unary | postfix
    postfix    ::= primary { "(" args ")" | "." name | "[" expr "]" }

List elements, comprehension heads and qualifier bodies parse at ``binary``
level; keyword forms there need parentheses.  The language is entirely
expression-based: assignment outside ``def``, ``return`` and friends are
rejected.
"""

from __future__ import annotations

from .errors import ParseError, Span
from .lexer import RESERVED, Token, tokenize
from .surface import (
    Block, Definition, FunClause, MatchClause, ParaToken, ParaUnquote,
    Pattern, PConstr, PDict, PList, PVar, PWild, QDecl, QGen, QGuard,
    SBinary, SCall, SConstr, SDict, SDoc, SDynProject, SFloat, SIf,
    SInfixFun, SInt, SLambda, SList, SListComp, SMatch, SOp, SParagraph,
    SProject, SStr, SurfaceModule, SVar, VarDef,
)

BINARY_LEVELS = [
    {"or"},
    {"and"},
    {"==", "!=", "<", "<=", ">", ">="},
    {"`"},
    {"++"},
    {"+", "-"},
    {"*", "/", "%"},
    {"**"},
]

FIRST_CLASS_OPS = {"+", "-", "*", "/", "%", "**", "++",
                   "==", "!=", "<", "<=", ">", ">=", "and", "or"}


def _is_constructor_name(name: str) -> bool:
    return name[0].isupper()


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    # -- token plumbing -----------------------------------------------------

    def _peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.toks) - 1)
        return self.toks[i]

    def _next(self) -> Token:
        tok = self._peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def _at(self, kind: str, text: str | None = None) -> bool:
        tok = self._peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def _expect(self, kind: str, text: str | None = None) -> Token:
        tok = self._peek()
        if not self._at(kind, text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.text or tok.kind!r}", tok.span)
        return self._next()

    def _prev_span(self) -> Span:
        return self.toks[self.pos - 1].span

    def _finish_line(self) -> None:
        """Consume the newline ending an item; block-final expressions
        already consumed theirs before the dedent."""
        if self._at("newline"):
            self._next()
        elif self.toks[self.pos - 1].kind != "dedent":
            self._expect("newline")

    def _fail(self, message: str) -> ParseError:
        return ParseError(message, self._peek().span)

    # -- module -------------------------------------------------------------

    def parse_module(self) -> SurfaceModule:
        imports = []
        while self._at("keyword", "import"):
            self._next()
            path = self._expect("string")
            imports.append(path.text)
            self._expect("newline")
        definitions: list[Definition] = []
        final = None
        while not self._at("eof"):
            if self._at("keyword", "import"):
                raise self._fail("imports must precede definitions")
            if final is not None:
                raise self._fail("a program has exactly one final expression")
            if self._at("keyword", "def"):
                definitions.append(self._definition())
            else:
                final = self._expr()
                if self._at("op", "="):
                    raise self._fail("assignment is not a statement; use 'def'")
                self._finish_line()
        return SurfaceModule(tuple(imports), tuple(definitions), final)

    def _definition(self) -> Definition:
        start = self._expect("keyword", "def").span
        if (self._at("ident") and not _is_constructor_name(self._peek().text)
                and self._peek(1).kind == "punct" and self._peek(1).text == "("):
            name = self._next().text
            self._expect("punct", "(")
            params = self._patterns_until(")")
            if not params:
                raise self._fail("a function clause needs at least one parameter")
            self._expect("punct", ":")
            body = self._body()
            return FunClause(name, tuple(params), body, start.to(self._prev_span()))
        pattern = self._pattern()
        self._expect("op", "=")
        body = self._body()
        return VarDef(pattern, body, start.to(self._prev_span()))

    def _body(self) -> Block:
        if self._at("newline"):
            return self._block()
        result = self._expr()
        self._finish_line()
        return Block.of(result)

    def _block(self) -> Block:
        self._expect("newline")
        self._expect("indent")
        defs = []
        while self._at("keyword", "def"):
            defs.append(self._definition())
        if self._at("dedent"):
            raise self._fail("block must end with an expression")
        result = self._expr()
        if self._at("newline"):
            self._next()
        self._expect("dedent")
        return Block(tuple(defs), result)

    def _arm(self) -> Block:
        if self._at("newline"):
            return self._block()
        return Block.of(self._expr())

    # -- expressions ----------------------------------------------------------

    def _expr(self):
        tok = self._peek()
        if tok.kind == "keyword":
            if tok.text == "if":
                return self._if()
            if tok.text == "match":
                return self._match()
            if tok.text == "fun":
                return self._lambda()
            if tok.text in RESERVED:
                raise self._fail(f"reserved word {tok.text!r} cannot start an expression")
        return self._binary(0)

    def _if(self) -> SIf:
        start = self._next().span
        cond = self._binary(0)
        self._expect("punct", ":")
        then = self._arm()
        self._expect("keyword", "else")
        self._expect("punct", ":")
        orelse = self._arm()
        return SIf(cond, then, orelse, start.to(self._prev_span()))

    def _match(self) -> SMatch:
        start = self._next().span
        scrutinee = self._binary(0)
        self._expect("punct", ":")
        if not self._at("newline"):
            raise self._fail("match clauses require an indented block")
        self._expect("newline")
        self._expect("indent")
        clauses = []
        while not self._at("dedent"):
            cstart = self._peek().span
            pattern = self._pattern()
            self._expect("punct", ":")
            if self._at("newline"):
                body = self._block()
            else:
                body = Block.of(self._expr())
                self._finish_line()
            clauses.append(MatchClause(pattern, body, cstart.to(self._prev_span())))
        self._expect("dedent")
        if not clauses:
            raise self._fail("match needs at least one clause")
        return SMatch(scrutinee, tuple(clauses), start.to(self._prev_span()))

    def _lambda(self) -> SLambda:
        start = self._next().span
        self._expect("punct", "(")
        params = self._patterns_until(")")
        if not params:
            raise self._fail("'fun' needs at least one parameter")
        self._expect("punct", ":")
        body = self._arm()
        return SLambda(tuple(params), body, start.to(self._prev_span()))

    def _binary(self, level: int):
        if level >= len(BINARY_LEVELS):
            return self._unary()
        ops = BINARY_LEVELS[level]
        left = self._binary(level + 1)
        while True:
            tok = self._peek()
            if "`" in ops and tok.kind == "punct" and tok.text == "`":
                self._next()
                name = self._expect("ident")
                if _is_constructor_name(name.text):
                    raise ParseError("infix function must be lowercase", name.span)
                self._expect("punct", "`")
                right = self._binary(level + 1)
                span = _term_span(left).to(self._prev_span())
                left = SInfixFun(name.text, left, right, span)
                continue
            is_op = (tok.kind == "op" or (tok.kind == "keyword" and tok.text in ("and", "or")))
            if is_op and tok.text in ops:
                self._next()
                right = self._binary(level + 1)
                span = _term_span(left).to(self._prev_span())
                left = SBinary(tok.text, left, right, span)
                continue
            return left

    def _unary(self):
        if self._at("keyword", "@doc"):
            start = self._next().span
            self._expect("punct", "(")
            doc = self._expr()
            self._expect("punct", ")")
            target = self._unary()
            return SDoc(doc, target, start.to(self._prev_span()))
        return self._postfix()

    def _postfix(self):
        node = self._primary()
        while True:
            if self._at("punct", "("):
                self._next()
                args = self._call_args()
                node = SCall(node, tuple(args), _term_span(node).to(self._prev_span()))
            elif self._at("punct", "."):
                self._next()
                name = self._expect("ident")
                node = SProject(node, name.text, _term_span(node).to(name.span))
            elif self._at("punct", "["):
                self._next()
                key = self._expr()
                self._expect("punct", "]")
                node = SDynProject(node, key, _term_span(node).to(self._prev_span()))
            else:
                return node

    def _call_args(self) -> list:
        args = [self._expr()]
        while self._at("punct", ","):
            self._next()
            args.append(self._expr())
        self._expect("punct", ")")
        return args

    def _primary(self):
        tok = self._peek()
        if tok.kind == "int":
            self._next()
            return SInt(int(tok.text), tok.span)
        if tok.kind == "float":
            self._next()
            return SFloat(float(tok.text), tok.span)
        if tok.kind == "op" and tok.text == "-" and self._peek(1).kind in ("int", "float"):
            self._next()
            num = self._next()
            span = tok.span.to(num.span)
            if num.kind == "int":
                return SInt(-int(num.text), span)
            return SFloat(-float(num.text), span)
        if tok.kind == "string":
            self._next()
            return SStr(tok.text, tok.span)
        if tok.kind == "para_open":
            return self._paragraph()
        if tok.kind == "ident":
            self._next()
            if _is_constructor_name(tok.text):
                args = []
                if self._at("punct", "("):
                    self._next()
                    args = self._call_args()
                return SConstr(tok.text, tuple(args), tok.span.to(self._prev_span()))
            return SVar(tok.text, tok.span)
        if tok.kind == "punct" and tok.text == "(":
            self._next()
            inner = self._peek()
            is_op_tok = (inner.kind == "op" or
                         (inner.kind == "keyword" and inner.text in ("and", "or")))
            if is_op_tok and inner.text in FIRST_CLASS_OPS and \
                    self._peek(1).kind == "punct" and self._peek(1).text == ")":
                self._next()
                close = self._next()
                return SOp(inner.text, tok.span.to(close.span))
            expr = self._expr()
            self._expect("punct", ")")
            return expr
        if tok.kind == "punct" and tok.text == "[":
            return self._list_or_comprehension()
        if tok.kind == "punct" and tok.text == "{":
            return self._dict()
        if tok.kind == "keyword" and tok.text in ("if", "match", "fun", "@doc"):
            return self._expr()
        if tok.kind == "keyword" and tok.text in RESERVED:
            raise ParseError(f"reserved word {tok.text!r} used in expression", tok.span)
        raise ParseError(f"unexpected {tok.text or tok.kind!r}", tok.span)

    def _paragraph(self) -> SParagraph:
        start = self._expect("para_open").span
        elements = []
        while not self._at("para_close"):
            tok = self._peek()
            if tok.kind == "para_text":
                self._next()
                elements.append(ParaToken(tok.text, tok.span))
            elif tok.kind == "unquote_open":
                self._next()
                term = self._expr()
                close = self._expect("unquote_close")
                elements.append(ParaUnquote(term, tok.span.to(close.span)))
            else:
                raise ParseError("malformed paragraph literal", tok.span)
        close = self._next()
        return SParagraph(tuple(elements), start.to(close.span))

    def _list_or_comprehension(self):
        start = self._expect("punct", "[").span
        if self._at("punct", "]"):
            close = self._next()
            return SList((), start.to(close.span))
        head = self._binary(0)
        if self._peek().kind == "keyword" and self._peek().text in ("for", "if", "def"):
            qualifiers = []
            while not self._at("punct", "]"):
                qualifiers.append(self._qualifier())
            close = self._next()
            return SListComp(head, tuple(qualifiers), start.to(close.span))
        elems = [head]
        while self._at("punct", ","):
            self._next()
            elems.append(self._binary(0))
        close = self._expect("punct", "]")
        return SList(tuple(elems), start.to(close.span))

    def _qualifier(self):
        tok = self._peek()
        if tok.kind == "keyword" and tok.text == "for":
            self._next()
            self._expect("punct", "(")
            pattern = self._pattern()
            self._expect("punct", ")")
            self._expect("keyword", "in")
            source = self._binary(0)
            return QGen(pattern, source, tok.span.to(self._prev_span()))
        if tok.kind == "keyword" and tok.text == "if":
            self._next()
            cond = self._binary(0)
            return QGuard(cond, tok.span.to(self._prev_span()))
        if tok.kind == "keyword" and tok.text == "def":
            self._next()
            pattern = self._pattern()
            self._expect("op", "=")
            term = self._binary(0)
            return QDecl(pattern, term, tok.span.to(self._prev_span()))
        raise ParseError("expected 'for', 'if' or 'def' qualifier", tok.span)

    def _dict(self) -> SDict:
        start = self._expect("punct", "{").span
        entries = []
        if not self._at("punct", "}"):
            while True:
                key = self._expect("ident")
                if _is_constructor_name(key.text):
                    raise ParseError("dictionary keys are lowercase identifiers", key.span)
                self._expect("punct", ":")
                entries.append((key.text, self._expr()))
                if not self._at("punct", ","):
                    break
                self._next()
        close = self._expect("punct", "}")
        return SDict(tuple(entries), start.to(close.span))

    # -- patterns -----------------------------------------------------------

    def _patterns_until(self, close: str) -> list[Pattern]:
        patterns = []
        if not self._at("punct", close):
            patterns.append(self._pattern())
            while self._at("punct", ","):
                self._next()
                patterns.append(self._pattern())
        self._expect("punct", close)
        return patterns

    def _pattern(self) -> Pattern:
        tok = self._peek()
        if tok.kind == "ident":
            self._next()
            if _is_constructor_name(tok.text):
                args: list[Pattern] = []
                if self._at("punct", "("):
                    self._next()
                    args = self._patterns_until(")")
                return PConstr(tok.text, tuple(args), tok.span.to(self._prev_span()))
            if tok.text == "_":
                return PWild(tok.span)
            return PVar(tok.text, tok.span)
        if tok.kind == "punct" and tok.text == "[":
            return self._list_pattern()
        if tok.kind == "punct" and tok.text == "{":
            return self._dict_pattern()
        if tok.kind == "punct" and tok.text == "(":
            self._next()
            inner = self._pattern()
            self._expect("punct", ")")
            return inner
        if tok.kind in ("int", "float", "string"):
            raise ParseError("literal patterns are not supported; match on constructors",
                             tok.span)
        raise ParseError(f"expected a pattern, found {tok.text or tok.kind!r}", tok.span)

    def _list_pattern(self) -> PList:
        start = self._expect("punct", "[").span
        elems: list[Pattern] = []
        rest: Pattern | None = None
        while not self._at("punct", "]"):
            if self._at("op", "*"):
                star = self._next()
                name = self._expect("ident")
                rest = PWild(name.span) if name.text == "_" else PVar(name.text, name.span)
                if not elems:
                    raise ParseError("'*rest' needs at least one preceding element",
                                     star.span)
                break
            elems.append(self._pattern())
            if self._at("punct", ","):
                self._next()
            else:
                break
        close = self._expect("punct", "]")
        return PList(tuple(elems), rest, start.to(close.span))

    def _dict_pattern(self) -> PDict:
        start = self._expect("punct", "{").span
        entries = []
        while not self._at("punct", "}"):
            key = self._expect("ident")
            self._expect("punct", ":")
            entries.append((key.text, self._pattern()))
            if self._at("punct", ","):
                self._next()
            else:
                break
        close = self._expect("punct", "}")
        if not entries:
            raise ParseError("dictionary pattern needs at least one field", start)
        return PDict(tuple(entries), start.to(close.span))


def _term_span(term) -> Span:
    return term.span


def parse_module(tokens: list[Token]) -> SurfaceModule:
    """Parse a token stream into a surface module."""
    return Parser(tokens).parse_module()


def parse_source(source: str, file: str = "<input>") -> SurfaceModule:
    """Tokenize and parse source text."""
    return parse_module(tokenize(source, file))
