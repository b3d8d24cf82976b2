"""
MiniJ front end: lexer and recursive-descent parser.

MiniJ is the Java-like subset the product line tooling works on:

    unit      := import* classDecl
    import    := "import" qname ";"
    classDecl := "class" IDENT "{" member* "}"
    member    := fieldDecl | methodDecl
    fieldDecl := type IDENT ("=" exprText)? ";"
    methodDecl:= type IDENT "(" params? ")" block
    params    := type IDENT ("," type IDENT)*
    block     := "{" stmt* "}"
    stmt      := ifStmt | whileStmt | forStmt | returnStmt | exprStmt
    ifStmt    := "if" "(" exprText ")" block ("else" block)?
    whileStmt := "while" "(" exprText ")" block
    forStmt   := "for" "(" exprText ")" block
    returnStmt:= "return" exprText? ";"
    exprStmt  := exprText ";"

Comments are skipped. Node text is the node's own tokens joined by single
spaces, so formatting never changes node identity; string literals are kept
byte-exact.
"""
import bisect
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Set, Tuple

from src.models.ast import AstNode, SourceFile
from src.models.enums import NodeKind
from src.models.errors import MiniJSyntaxError

logger = logging.getLogger(__name__)

STATEMENT_KEYWORDS = frozenset({"if", "else", "while", "for", "return", "class", "import"})

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<open_comment>/\*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<char>'(?:[^'\\\n]|\\.)+')
  | (?P<number>\d[\w.]*)
  | (?P<ident>[A-Za-z_$][\w$]*)
  | (?P<op>>>>=|<<=|>>=|>>>|==|!=|<=|>=|&&|\|\||\+\+|--|\+=|-=|\*=|/=|%=|&=|\|=|\^=|<<|>>|->|::
          |[-+*/%=<>!&|^~?:;,.()\[\]{}@])
""", re.VERBOSE | re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str       # ident, number, string, char, op, eof
    value: str
    line: int
    column: int


def tokenize(text: str, path: str = None) -> List[Token]:
    """
    Split MiniJ text into tokens, skipping whitespace and comments.

    Raises:
        MiniJSyntaxError: on an unterminated literal or comment, or a stray character.
    """
    line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]

    def position(offset: int) -> Tuple[int, int]:
        line = bisect.bisect_right(line_starts, offset)
        return line, offset - line_starts[line - 1] + 1

    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            line, column = position(pos)
            char = text[pos]
            if char in "\"'":
                raise MiniJSyntaxError("unterminated literal", line, column, path)
            raise MiniJSyntaxError(f"unexpected character {char!r}", line, column, path)
        kind = match.lastgroup
        if kind == "open_comment":
            line, column = position(pos)
            raise MiniJSyntaxError("unterminated block comment", line, column, path)
        if kind not in ("ws", "line_comment", "block_comment"):
            line, column = position(pos)
            tokens.append(Token(kind, match.group(), line, column))
        pos = match.end()
    line, column = position(len(text))
    tokens.append(Token("eof", "", line, column))
    return tokens


@lru_cache(maxsize=65536)
def split_tokens(text: str) -> Tuple[str, ...]:
    """Token values of an already-normalized node text"""
    return tuple(t.value for t in tokenize(text) if t.kind != "eof")


class MiniJParser:
    """Recursive-descent parser over a token list"""

    def __init__(self, tokens: List[Token], path: str = None):
        self._tokens = tokens
        self._pos = 0
        self._path = path

    # -- token helpers -------------------------------------------------

    def _peek(self, offset: int = 0) -> Token:
        index = min(self._pos + offset, len(self._tokens) - 1)
        return self._tokens[index]

    def _at(self, value: str) -> bool:
        token = self._peek()
        return token.kind in ("op", "ident") and token.value == value

    def _advance(self) -> Token:
        token = self._peek()
        if token.kind != "eof":
            self._pos += 1
        return token

    def _error(self, message: str, token: Token = None) -> MiniJSyntaxError:
        token = token or self._peek()
        found = "end of file" if token.kind == "eof" else repr(token.value)
        return MiniJSyntaxError(f"{message}, found {found}", token.line, token.column, self._path)

    def _expect(self, value: str) -> Token:
        if not self._at(value):
            raise self._error(f"expected {value!r}")
        return self._advance()

    def _expect_ident(self) -> Token:
        token = self._peek()
        if token.kind != "ident" or token.value in STATEMENT_KEYWORDS:
            raise self._error("expected identifier")
        return self._advance()

    @staticmethod
    def _join(tokens: List[Token]) -> str:
        return " ".join(t.value for t in tokens)

    # -- grammar -------------------------------------------------------

    def parse_unit(self) -> AstNode:
        children: List[AstNode] = []
        seen: Set[str] = set()
        while self._at("import"):
            node = self._parse_import()
            if node.text in seen:
                raise self._error(f"duplicate import {node.text!r}", self._tokens[self._pos - 1])
            seen.add(node.text)
            children.append(node)
        if self._peek().kind == "eof":
            raise self._error("a file must declare a class")
        children.append(self._parse_class())
        if self._peek().kind != "eof":
            raise self._error("expected end of file (one class per file)")
        return AstNode(NodeKind.COMPILATION_UNIT, "", tuple(children))

    def _parse_import(self) -> AstNode:
        tokens = [self._expect("import"), self._expect_ident()]
        while self._at("."):
            tokens.append(self._advance())
            if self._at("*"):
                tokens.append(self._advance())
                break
            tokens.append(self._expect_ident())
        tokens.append(self._expect(";"))
        return AstNode(NodeKind.IMPORT, self._join(tokens))

    def _parse_qname(self) -> List[Token]:
        tokens = [self._expect_ident()]
        while self._at("."):
            tokens.append(self._advance())
            tokens.append(self._expect_ident())
        return tokens

    def _parse_type(self) -> List[Token]:
        tokens = self._parse_qname()
        while self._at("["):
            tokens.append(self._advance())
            tokens.append(self._expect("]"))
        return tokens

    def _parse_class(self) -> AstNode:
        header = [self._expect("class"), self._expect_ident()]
        self._expect("{")
        members: List[AstNode] = []
        seen: Set[str] = set()
        while not self._at("}"):
            if self._peek().kind == "eof":
                raise self._error("expected '}' to close class")
            start = self._peek()
            member = self._parse_member()
            if member.text in seen:
                raise self._error(f"duplicate member {member.text!r}", start)
            seen.add(member.text)
            members.append(member)
        self._expect("}")
        return AstNode(NodeKind.CLASS_DECL, self._join(header), tuple(members))

    def _parse_member(self) -> AstNode:
        tokens = self._parse_type()
        tokens.append(self._expect_ident())
        if self._at("("):
            return self._parse_method(tokens)
        if self._at("="):
            tokens.append(self._advance())
            tokens.extend(self._parse_expr_text(terminator=";"))
        tokens.append(self._expect(";"))
        return AstNode(NodeKind.FIELD_DECL, self._join(tokens))

    def _parse_method(self, header: List[Token]) -> AstNode:
        header.append(self._expect("("))
        params: List[AstNode] = []
        names: Set[str] = set()
        if not self._at(")"):
            while True:
                param = self._parse_type()
                name = self._expect_ident()
                if name.value in names:
                    raise self._error(f"duplicate parameter {name.value!r}", name)
                names.add(name.value)
                param.append(name)
                params.append(AstNode(NodeKind.PARAM, self._join(param)))
                header.extend(param)
                if not self._at(","):
                    break
                header.append(self._advance())
        header.append(self._expect(")"))
        body = self._parse_block("{")
        return AstNode(NodeKind.METHOD_DECL, self._join(header), tuple(params) + (body,))

    def _parse_block(self, text: str) -> AstNode:
        self._expect("{")
        statements: List[AstNode] = []
        while not self._at("}"):
            if self._peek().kind == "eof":
                raise self._error("expected '}' to close block")
            statements.append(self._parse_statement())
        self._expect("}")
        return AstNode(NodeKind.BLOCK, text, tuple(statements))

    def _parse_statement(self) -> AstNode:
        if self._at("if"):
            header = [self._advance()] + self._parse_condition(allow_semicolons=False)
            blocks = [self._parse_block("{")]
            if self._at("else"):
                self._advance()
                blocks.append(self._parse_block("else {"))
            return AstNode(NodeKind.IF_STMT, self._join(header), tuple(blocks))
        if self._at("while"):
            header = [self._advance()] + self._parse_condition(allow_semicolons=False)
            return AstNode(NodeKind.WHILE_STMT, self._join(header), (self._parse_block("{"),))
        if self._at("for"):
            header = [self._advance()] + self._parse_condition(allow_semicolons=True)
            return AstNode(NodeKind.FOR_STMT, self._join(header), (self._parse_block("{"),))
        if self._at("return"):
            tokens = [self._advance()]
            if not self._at(";"):
                tokens.extend(self._parse_expr_text(terminator=";"))
            tokens.append(self._expect(";"))
            return AstNode(NodeKind.RETURN_STMT, self._join(tokens))
        if self._at("else"):
            raise self._error("'else' without 'if'")
        if self._at("{"):
            raise self._error("nested blocks must belong to a statement")
        tokens = self._parse_expr_text(terminator=";")
        tokens.append(self._expect(";"))
        return AstNode(NodeKind.EXPR_STMT, self._join(tokens))

    def _parse_condition(self, allow_semicolons: bool) -> List[Token]:
        tokens = [self._expect("(")]
        tokens.extend(self._parse_expr_text(terminator=")", allow_semicolons=allow_semicolons))
        tokens.append(self._expect(")"))
        return tokens

    def _parse_expr_text(self, terminator: str, allow_semicolons: bool = False) -> List[Token]:
        """Balanced token run up to `terminator` at depth 0 (terminator not consumed)"""
        tokens: List[Token] = []
        depth = 0
        while True:
            token = self._peek()
            if token.kind == "eof":
                raise self._error(f"expected {terminator!r}")
            if depth == 0 and token.kind == "op" and token.value == terminator:
                break
            if token.kind == "op":
                if token.value in ("{", "}"):
                    raise self._error("braces are not allowed in an expression")
                if token.value == ";" and not (allow_semicolons and depth == 0):
                    raise self._error(f"expected {terminator!r}")
                if token.value in ("(", "["):
                    depth += 1
                elif token.value in (")", "]"):
                    if depth == 0:
                        raise self._error("unbalanced closing bracket")
                    depth -= 1
            elif token.kind == "ident" and depth == 0 and token.value in STATEMENT_KEYWORDS:
                raise self._error(f"statement keyword {token.value!r} inside an expression")
            tokens.append(self._advance())
        if not tokens:
            raise self._error("expected an expression")
        return tokens


def parse(file: SourceFile) -> AstNode:
    """
    Parse one MiniJ file into a CompilationUnit.

    Args:
        file: Source file (relative path and text)

    Returns:
        CompilationUnit node; leaf statements appear in source order

    Raises:
        MiniJSyntaxError: with line and column on malformed input
    """
    logger.debug(f"Parsing {file.path}")
    return MiniJParser(tokenize(file.text, file.path), file.path).parse_unit()
