"""
Artefact identification.

Turns a MiniJ syntax tree into an Artefact-Tree whose ids are recursive
content hashes: a child's base hashes its value together with its parent's
id, so equal values only share an id under the same parental hierarchy.
Equal statements under one parent are told apart by a twin index.

Hash: FNV-1a 64 over UTF-8 bytes. Hash input for a child is
``value \\x1f parent_key`` (``\\x1f twin`` appended for statements), where
parent_key is the parent's base in 16 hex digits, suffixed ``_d<dup>`` when
the parent is a duplicate. The root hashes its file path alone.
"""
import logging
from typing import Dict, Optional, Tuple

from src.models.artefact import Artefact, ArtefactId, ArtefactTree
from src.models.ast import AstNode, normalize_path
from src.models.enums import NodeKind

logger = logging.getLogger(__name__)

FNV_OFFSET_BASIS = 0xcbf29ce484222325
FNV_PRIME = 0x100000001b3
_MASK_64 = 0xFFFFFFFFFFFFFFFF
_SEPARATOR = "\x1f"


def content_hash(data) -> int:
    """
    FNV-1a 64-bit hash.

    Args:
        data: bytes, or str (hashed as UTF-8)

    Returns:
        Unsigned 64-bit integer
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    h = FNV_OFFSET_BASIS
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK_64
    return h


def root_id(path: str) -> ArtefactId:
    return ArtefactId(content_hash(path))


def child_id(parent: ArtefactId, kind: NodeKind, value: str, twin: int = 1) -> ArtefactId:
    """Id of a child artefact (dup 1) under `parent`"""
    payload = f"{value}{_SEPARATOR}{parent.parent_key}"
    if kind.is_statement:
        payload += f"{_SEPARATOR}{twin}"
        return ArtefactId(content_hash(payload), twin)
    return ArtefactId(content_hash(payload))


def twin_indexes(children) -> Tuple[int, ...]:
    """Twin index of each child: equal statements get 1, 2, ... in order of appearance"""
    counts: Dict[Tuple[NodeKind, str], int] = {}
    result = []
    for child in children:
        if child.kind.is_statement:
            key = (child.kind, child.text if isinstance(child, AstNode) else child.value)
            counts[key] = counts.get(key, 0) + 1
            result.append(counts[key])
        else:
            result.append(1)
    return tuple(result)


def _identify_children(node: AstNode, parent: Artefact, origin: Optional[str]) -> None:
    for child, twin in zip(node.children, twin_indexes(node.children)):
        artefact = Artefact(
            id=child_id(parent.id, child.kind, child.text, twin),
            kind=child.kind,
            value=child.text,
            origin={origin} if origin else set(),
        )
        parent.children.append(artefact)
        _identify_children(child, artefact, origin)


def identify(ast: AstNode, path: str, origin: str = None) -> ArtefactTree:
    """
    Build the Artefact-Tree of one parsed file.

    Args:
        ast: parsed CompilationUnit
        path: file path relative to the product root (the root artefact's value)
        origin: optional product name recorded on every artefact

    Returns:
        ArtefactTree with the same shape as `ast`
    """
    if ast.kind != NodeKind.COMPILATION_UNIT:
        raise ValueError(f"Expected a CompilationUnit, got {ast.kind.value}")
    path = normalize_path(path)
    root = Artefact(
        id=root_id(path),
        kind=NodeKind.COMPILATION_UNIT,
        value=path,
        origin={origin} if origin else set(),
    )
    _identify_children(ast, root, origin)
    logger.debug(f"Identified {sum(1 for _ in root.walk())} artefacts in {path}")
    return ArtefactTree(path=path, root=root)
