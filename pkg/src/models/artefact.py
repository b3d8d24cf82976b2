"""Artefact-tree data models"""
import re
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Set, Tuple

from .enums import NodeKind

_RENDERED_ID = re.compile(r"^A([0-9a-f]{16})(?:_t(\d+))?(?:_d(\d+))?$")


@dataclass(frozen=True, order=True)
class ArtefactId:
    """
    Artefact identifier.

    Rendered as ``A<base-hex>``, with ``_t<twin>`` when twin > 1 and
    ``_d<dup>`` when dup > 1. The base is always printed on 16 hex digits,
    which keeps rendering injective.
    """
    base: int
    twin: int = 1
    dup: int = 1

    def __post_init__(self):
        if not 0 <= self.base < 2 ** 64:
            raise ValueError(f"Artefact base hash out of range: {self.base}")
        if self.twin < 1 or self.dup < 1:
            raise ValueError("twin and dup must be positive")

    @property
    def key(self) -> Tuple[int, int]:
        """(base, twin) pair used to align statement sequences"""
        return (self.base, self.twin)

    @property
    def parent_key(self) -> str:
        """Contribution of this id to the base hash of its children"""
        if self.dup > 1:
            return f"{self.base:016x}_d{self.dup}"
        return f"{self.base:016x}"

    def with_dup(self, dup: int) -> 'ArtefactId':
        return ArtefactId(self.base, self.twin, dup)

    def render(self) -> str:
        text = f"A{self.base:016x}"
        if self.twin > 1:
            text += f"_t{self.twin}"
        if self.dup > 1:
            text += f"_d{self.dup}"
        return text

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def parse(cls, rendered: str) -> 'ArtefactId':
        match = _RENDERED_ID.match(rendered.strip())
        if not match:
            raise ValueError(f"Not a rendered artefact id: {rendered!r}")
        base, twin, dup = match.groups()
        return cls(int(base, 16), int(twin or 1), int(dup or 1))


@dataclass(eq=False)
class Artefact:
    """
    Implementation element identified from source code.

    The root artefact of a tree has the file's relative path as value.
    `origin` collects the names of the products that contributed it.
    """
    id: ArtefactId
    kind: NodeKind
    value: str
    children: List['Artefact'] = field(default_factory=list)
    origin: Set[str] = field(default_factory=set)

    def walk(self) -> Iterator['Artefact']:
        """Pre-order traversal"""
        yield self
        for child in self.children:
            yield from child.walk()

    def walk_with_parent(self, parent: Optional['Artefact'] = None) -> Iterator[Tuple['Artefact', Optional['Artefact']]]:
        yield self, parent
        for child in self.children:
            yield from child.walk_with_parent(self)

    @property
    def rendered_id(self) -> str:
        return self.id.render()


@dataclass(eq=False)
class ArtefactTree:
    """One ART per file path"""
    path: str
    root: Artefact

    def artefacts(self) -> Iterator[Artefact]:
        return self.root.walk()

    def rendered_ids(self) -> List[str]:
        return [a.rendered_id for a in self.root.walk()]
