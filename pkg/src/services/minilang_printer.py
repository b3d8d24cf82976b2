"""
Canonical MiniJ printer.

Prints syntax trees and artefact trees alike (both expose `kind` and
`children`; the text is `text` on syntax nodes and `value` on artefacts).
Output is one statement per line with fixed indentation and no blank lines;
`else {` opens its own line after the then-block's closing brace.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, List

from src.models.ast import AstNode
from src.models.enums import NodeKind
from src.services.minilang_parser import split_tokens, tokenize

DEFAULT_INDENT = 4
ELSE_BLOCK = "else {"

_CALL_KEYWORDS = frozenset({"if", "while", "for", "return", "else", "class", "import"})
_NO_SPACE_BEFORE = frozenset({")", "]", ";", ",", "."})
_NO_SPACE_AFTER = frozenset({"(", "[", ".", "!", "~"})


@dataclass(frozen=True)
class PrintedLine:
    """A printed line and the node owning it (closing braces belong to the opener)"""
    depth: int
    text: str
    owner: Any


def node_text(node: Any) -> str:
    return node.text if isinstance(node, AstNode) else node.value


def _is_word(token: str) -> bool:
    return token[:1].isalnum() or token[:1] in "_$\"'"


@lru_cache(maxsize=4096)
def _can_touch(left: str, right: str) -> bool:
    """True when `left` and `right` written without a space still lex as the same two tokens"""
    try:
        return [t.value for t in tokenize(left + right) if t.kind != "eof"] == [left, right]
    except Exception:
        return False


def _wants_space(prev: str, token: str) -> bool:
    if token in _NO_SPACE_BEFORE or prev in _NO_SPACE_AFTER:
        return False
    if token in ("(", "[") and prev not in _CALL_KEYWORDS and (_is_word(prev) or prev in (")", "]")):
        return False
    if token in ("++", "--") and (_is_word(prev) or prev in (")", "]")):
        return False
    return True


@lru_cache(maxsize=65536)
def render_text(text: str) -> str:
    """Re-space normalized node text for display; re-lexing yields the same tokens"""
    tokens = split_tokens(text)
    if not tokens:
        return ""
    parts = [tokens[0]]
    for prev, token in zip(tokens, tokens[1:]):
        if _wants_space(prev, token) or not _can_touch(prev, token):
            parts.append(" ")
        parts.append(token)
    return "".join(parts)


class MiniJPrinter:
    """
    Tree printer. Subclasses hook `emit` to decorate the lines a node
    produces (the annotated SPL printer wraps them in directives).
    """

    def __init__(self, indent: int = DEFAULT_INDENT):
        self.indent = indent

    def lines(self, root: Any) -> List[PrintedLine]:
        out: List[PrintedLine] = []
        self.emit(root, 0, out)
        return out

    def format(self, lines: List[PrintedLine]) -> str:
        return "".join(" " * (self.indent * line.depth) + line.text + "\n" for line in lines)

    def print(self, root: Any) -> str:
        return self.format(self.lines(root))

    def emit(self, node: Any, depth: int, out: List[PrintedLine]) -> None:
        self.emit_node(node, depth, out)

    def emit_node(self, node: Any, depth: int, out: List[PrintedLine]) -> None:
        kind = node.kind
        if kind == NodeKind.COMPILATION_UNIT:
            for child in node.children:
                self.emit(child, depth, out)
        elif kind in (NodeKind.IMPORT, NodeKind.FIELD_DECL, NodeKind.EXPR_STMT, NodeKind.RETURN_STMT):
            out.append(PrintedLine(depth, render_text(node_text(node)), node))
        elif kind == NodeKind.PARAM:
            # part of the method signature
            return
        elif kind == NodeKind.BLOCK:
            if node_text(node) == ELSE_BLOCK:
                out.append(PrintedLine(depth, ELSE_BLOCK, node))
                for child in node.children:
                    self.emit(child, depth + 1, out)
                out.append(PrintedLine(depth, "}", node))
            else:
                for child in node.children:
                    self.emit(child, depth, out)
        elif kind == NodeKind.IF_STMT:
            out.append(PrintedLine(depth, render_text(node_text(node)) + " {", node))
            blocks = [c for c in node.children if node_text(c) != ELSE_BLOCK]
            elses = [c for c in node.children if node_text(c) == ELSE_BLOCK]
            for block in blocks:
                self.emit(block, depth + 1, out)
            out.append(PrintedLine(depth, "}", node))
            for block in elses:
                self.emit(block, depth, out)
        else:
            # ClassDecl, MethodDecl, WhileStmt, ForStmt
            out.append(PrintedLine(depth, render_text(node_text(node)) + " {", node))
            for child in node.children:
                self.emit(child, depth + 1, out)
            out.append(PrintedLine(depth, "}", node))


def print_tree(root: Any, indent: int = DEFAULT_INDENT) -> str:
    """
    Print a CompilationUnit (syntax node or root artefact) in canonical form.

    parse(print(t)) is structurally equal to t.
    """
    return MiniJPrinter(indent).print(root)
