"""MiniJ source and syntax tree models"""
from dataclasses import dataclass, field
from typing import Iterator, Tuple

from .enums import NodeKind
from .errors import InvalidPath


def normalize_path(path: str) -> str:
    """Validate a product-relative path and return it with forward slashes"""
    if not path or not path.strip():
        raise InvalidPath("Source path cannot be empty")
    normalized = path.replace("\\", "/")
    if normalized.startswith("/") or (len(normalized) > 1 and normalized[1] == ":"):
        raise InvalidPath(f"Source path must be relative: {path}")
    segments = [s for s in normalized.split("/") if s not in ("", ".")]
    if not segments:
        raise InvalidPath(f"Source path cannot be empty: {path}")
    if ".." in segments:
        raise InvalidPath(f"Source path cannot contain '..': {path}")
    return "/".join(segments)


@dataclass(frozen=True)
class SourceFile:
    """One file of a product variant"""
    path: str
    text: str

    def __post_init__(self):
        object.__setattr__(self, 'path', normalize_path(self.path))


@dataclass(frozen=True, eq=False)
class AstNode:
    """
    MiniJ syntax node.

    `text` holds the whitespace-normalized tokens of the node's own header or
    leaf content, children excluded. Identity is by instance: two statements
    with the same text are distinct nodes.
    """
    kind: NodeKind
    text: str
    children: Tuple['AstNode', ...] = field(default_factory=tuple)

    def walk(self) -> Iterator['AstNode']:
        """Pre-order traversal"""
        yield self
        for child in self.children:
            yield from child.walk()

    def same_shape(self, other: 'AstNode') -> bool:
        """Structural equality: kind, text and children, recursively"""
        if self.kind != other.kind or self.text != other.text:
            return False
        if len(self.children) != len(other.children):
            return False
        return all(a.same_shape(b) for a, b in zip(self.children, other.children))

    def statement_texts(self) -> Tuple[str, ...]:
        """ExprStmt/ReturnStmt texts in in-order traversal"""
        return tuple(
            node.text for node in self.walk()
            if node.kind in (NodeKind.EXPR_STMT, NodeKind.RETURN_STMT)
        )
