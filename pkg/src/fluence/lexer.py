"""Indentation-sensitive tokenizer.

Layout follows the offside rule: a line more indented than the one that
opened its block produces INDENT, and returning to an enclosing column
produces matching DEDENTs.  Newlines and layout are suppressed inside
brackets.  Paragraph literals ``p"..."`` are lexed in a sub-mode where
``{`` opens an unquote splice (containing ordinary tokens) and all other
characters accumulate into paragraph text tokens.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LexError, Span

KEYWORDS = {
    "def", "if", "else", "match", "fun", "for", "in", "import", "and", "or",
}

# Statement-style words from the host language family; the grammar has no
# productions for them, so using one is always an error.
RESERVED = {
    "return", "break", "continue", "while", "class", "lambda", "pass",
    "global", "nonlocal", "yield", "not", "del", "raise", "case",
}

OPERATORS = [
    "**", "==", "!=", "<=", ">=", "++", "*", "/", "%", "+", "-", "<", ">", "=",
]

PUNCT = "()[]{},:.`"

STRING_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\", "{": "{", "}": "}"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span

    def __repr__(self) -> str:
        return f"{self.kind}({self.text!r})"


class Lexer:
    def __init__(self, source: str, file: str = "<input>"):
        self.src = source
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []
        self.indents = [0]
        self.bracket_depth = 0
        self.line_open = False  # content emitted since last NEWLINE

    # -- character helpers -------------------------------------------------

    def _peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.src[i] if i < len(self.src) else ""

    def _advance(self) -> str:
        c = self.src[self.pos]
        self.pos += 1
        if c == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return c

    def _here(self) -> Span:
        return Span(self.file, self.line, self.col, self.line, self.col)

    def _span_from(self, line: int, col: int) -> Span:
        return Span(self.file, line, col, self.line, self.col)

    def _emit(self, kind: str, text: str, span: Span) -> None:
        self.tokens.append(Token(kind, text, span))

    # -- layout ------------------------------------------------------------

    def _start_line(self) -> None:
        """Measure indentation and emit INDENT/DEDENT; skip blank lines."""
        while True:
            start_line, start_col = self.line, self.col
            width = 0
            while self._peek() == " ":
                self._advance()
                width += 1
            if self._peek() == "\t":
                raise LexError("tab in indentation", self._here())
            if self._peek() == "#":
                while self._peek() not in ("", "\n"):
                    self._advance()
            if self._peek() == "\n":
                self._advance()
                continue
            if self._peek() == "":
                return
            span = Span(self.file, start_line, start_col, self.line, self.col)
            if width > self.indents[-1]:
                self.indents.append(width)
                self._emit("indent", "", span)
            else:
                while width < self.indents[-1]:
                    self.indents.pop()
                    self._emit("dedent", "", span)
                if width != self.indents[-1]:
                    raise LexError(
                        "unindent does not match any enclosing block", span
                    )
            return

    def _end_line(self) -> None:
        if self.line_open:
            self._emit("newline", "", self._here())
            self.line_open = False

    # -- main loop ----------------------------------------------------------

    def tokenize(self) -> list[Token]:
        self._start_line()
        while self.pos < len(self.src):
            c = self._peek()
            if c == "\n":
                self._advance()
                if self.bracket_depth == 0:
                    self._end_line()
                    self._start_line()
                continue
            if c in " \t":
                self._advance()
                continue
            if c == "#":
                while self._peek() not in ("", "\n"):
                    self._advance()
                continue
            self.line_open = True
            if c == "p" and self._peek(1) == '"':
                self._paragraph()
            elif c.isdigit():
                self._number()
            elif c.isalpha() or c == "_":
                self._word()
            elif c == '"':
                self._string()
            elif c == "@":
                self._at()
            else:
                self._operator_or_punct()
        self._end_line()
        end = self._here()
        while len(self.indents) > 1:
            self.indents.pop()
            self._emit("dedent", "", end)
        self._emit("eof", "", end)
        return self.tokens

    # -- token scanners ------------------------------------------------------

    def _number(self) -> None:
        line, col = self.line, self.col
        text = ""
        while self._peek().isdigit():
            text += self._advance()
        if self._peek() == "." and self._peek(1).isdigit():
            text += self._advance()
            while self._peek().isdigit():
                text += self._advance()
            self._emit("float", text, self._span_from(line, col))
        else:
            self._emit("int", text, self._span_from(line, col))

    def _word(self) -> None:
        line, col = self.line, self.col
        text = ""
        while self._peek().isalnum() or self._peek() == "_":
            text += self._advance()
        span = self._span_from(line, col)
        if text in KEYWORDS or text in RESERVED:
            self._emit("keyword", text, span)
        else:
            self._emit("ident", text, span)

    def _at(self) -> None:
        line, col = self.line, self.col
        self._advance()
        text = ""
        while self._peek().isalnum():
            text += self._advance()
        span = self._span_from(line, col)
        if text != "doc":
            raise LexError(f"unknown decorator '@{text}'", span)
        self._emit("keyword", "@doc", span)

    def _string(self) -> None:
        line, col = self.line, self.col
        self._advance()
        out = []
        while True:
            c = self._peek()
            if c in ("", "\n"):
                raise LexError("unterminated string literal", self._span_from(line, col))
            self._advance()
            if c == '"':
                break
            if c == "\\":
                esc = self._peek()
                if esc not in STRING_ESCAPES:
                    raise LexError(f"bad escape '\\{esc}'", self._here())
                self._advance()
                out.append(STRING_ESCAPES[esc])
            else:
                out.append(c)
        self._emit("string", "".join(out), self._span_from(line, col))

    def _operator_or_punct(self) -> None:
        line, col = self.line, self.col
        for op in OPERATORS:
            if self.src.startswith(op, self.pos):
                for _ in op:
                    self._advance()
                self._emit("op", op, self._span_from(line, col))
                return
        c = self._peek()
        if c in PUNCT:
            self._advance()
            if c in "([{":
                self.bracket_depth += 1
            elif c in ")]}":
                self.bracket_depth = max(0, self.bracket_depth - 1)
            self._emit("punct", c, self._span_from(line, col))
            return
        raise LexError(f"unexpected character {c!r}", self._here())

    # -- paragraph sub-mode ---------------------------------------------------

    def _paragraph(self) -> None:
        line, col = self.line, self.col
        self._advance()  # p
        self._advance()  # "
        self._emit("para_open", 'p"', self._span_from(line, col))
        while True:
            tline, tcol = self.line, self.col
            text = []
            while True:
                c = self._peek()
                if c == "":
                    raise LexError(
                        "unterminated paragraph literal",
                        Span(self.file, line, col, self.line, self.col),
                    )
                if c in ('"', "{"):
                    break
                self._advance()
                if c == "\\":
                    esc = self._peek()
                    if esc not in STRING_ESCAPES:
                        raise LexError(f"bad escape '\\{esc}'", self._here())
                    self._advance()
                    text.append(STRING_ESCAPES[esc])
                else:
                    text.append(c)
            if text:
                self._emit("para_text", "".join(text), self._span_from(tline, tcol))
            if self._peek() == '"':
                uline, ucol = self.line, self.col
                self._advance()
                self._emit("para_close", '"', self._span_from(uline, ucol))
                return
            # unquote splice: ordinary tokens until the matching brace
            uline, ucol = self.line, self.col
            self._advance()
            self._emit("unquote_open", "{", self._span_from(uline, ucol))
            self._unquote(Span(self.file, uline, ucol, uline, ucol))

    def _unquote(self, open_span: Span) -> None:
        depth = 0
        while True:
            c = self._peek()
            if c == "":
                raise LexError("unterminated unquote splice", open_span)
            if c in " \t\n":
                self._advance()
                continue
            if c == "#":
                while self._peek() not in ("", "\n"):
                    self._advance()
                continue
            if c == "}" and depth == 0:
                uline, ucol = self.line, self.col
                self._advance()
                self._emit("unquote_close", "}", self._span_from(uline, ucol))
                return
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
            if c == "p" and self._peek(1) == '"':
                self._paragraph()
            elif c.isdigit():
                self._number()
            elif c.isalpha() or c == "_":
                self._word()
            elif c == '"':
                self._string()
            elif c == "@":
                self._at()
            else:
                self._operator_or_punct()


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    """Tokenize source text, resolving layout to indent/dedent tokens."""
    return Lexer(source, file).tokenize()
