"""Formal Concept Analysis data models"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .errors import EmptyContext, InvalidContext


@dataclass
class FormalContext:
    """Binary context: objects x attributes incidence"""
    objects: List[str]
    attributes: List[str]
    incidence: List[List[bool]]

    def __post_init__(self):
        if not self.objects:
            raise EmptyContext("Formal context has no objects")
        if len(set(self.objects)) != len(self.objects):
            raise InvalidContext("Duplicate object names in formal context")
        if len(set(self.attributes)) != len(self.attributes):
            raise InvalidContext("Duplicate attribute names in formal context")
        if len(self.incidence) != len(self.objects):
            raise InvalidContext("Incidence rows do not match objects")
        for row in self.incidence:
            if len(row) != len(self.attributes):
                raise InvalidContext("Incidence columns do not match attributes")

    @classmethod
    def from_sets(cls, objects: Sequence[str], attributes: Sequence[str],
                  rows: Dict[str, Set[str]]) -> 'FormalContext':
        """Build from object name -> attribute set"""
        return cls(
            objects=list(objects),
            attributes=list(attributes),
            incidence=[[a in rows.get(o, ()) for a in attributes] for o in objects],
        )

    def object_attributes(self, obj: str) -> FrozenSet[str]:
        row = self.incidence[self.objects.index(obj)]
        return frozenset(a for a, has in zip(self.attributes, row) if has)

    def attribute_objects(self, attribute: str) -> FrozenSet[str]:
        col = self.attributes.index(attribute)
        return frozenset(o for o, row in zip(self.objects, self.incidence) if row[col])


@dataclass(frozen=True)
class Concept:
    """Formal concept with the objects and attributes it introduces"""
    index: int
    extent: FrozenSet[str]
    intent: FrozenSet[str]
    introduced_objects: FrozenSet[str]
    introduced_attributes: FrozenSet[str]


@dataclass
class AocPoset:
    """Attribute-object concepts with their transitively reduced order (parent, child)"""
    concepts: List[Concept]
    order: List[Tuple[int, int]] = field(default_factory=list)

    def concept(self, index: int) -> Concept:
        return self.concepts[index]

    def parents(self, index: int) -> List[int]:
        return sorted(p for p, c in self.order if c == index)

    def children(self, index: int) -> List[int]:
        return sorted(c for p, c in self.order if p == index)

    def ancestors(self, index: int) -> Set[int]:
        """Strict ancestors (larger extents)"""
        found: Set[int] = set()
        pending = self.parents(index)
        while pending:
            current = pending.pop()
            if current not in found:
                found.add(current)
                pending.extend(self.parents(current))
        return found


@dataclass
class ConstraintSet:
    """
    Variability and constraints mined from a context.

    `common_name` names the common group (the top concept) when there is one;
    `groups` maps a group name to its co-occurring attributes; implications
    are transitively reduced (source requires target); exclusions are
    unordered group pairs stored name-sorted. `dead` lists attributes no
    object holds.
    """
    common: FrozenSet[str] = frozenset()
    common_name: Optional[str] = None
    groups: Dict[str, FrozenSet[str]] = field(default_factory=dict)
    implications: List[Tuple[str, str]] = field(default_factory=list)
    mutual_exclusions: List[Tuple[str, str]] = field(default_factory=list)
    dead: FrozenSet[str] = frozenset()

    def group_of(self, attribute: str) -> str:
        for name, members in self.groups.items():
            if attribute in members:
                return name
        raise KeyError(attribute)

    def implication_closure(self) -> Set[Tuple[FrozenSet[str], FrozenSet[str]]]:
        """Transitive closure of implications, expressed over group contents"""
        succ: Dict[str, Set[str]] = {g: set() for g in self.groups}
        for source, target in self.implications:
            succ[source].add(target)
        closure = set()
        for start in self.groups:
            seen: Set[str] = set()
            pending = list(succ[start])
            while pending:
                current = pending.pop()
                if current not in seen:
                    seen.add(current)
                    pending.extend(succ[current])
            for target in seen:
                closure.add((self.groups[start], self.groups[target]))
        return closure

    def exclusion_pairs(self) -> Set[FrozenSet[FrozenSet[str]]]:
        return {frozenset((self.groups[a], self.groups[b])) for a, b in self.mutual_exclusions}

    def partition(self) -> Set[FrozenSet[str]]:
        return set(self.groups.values())

    def expand_implications(self) -> Set[Tuple[str, str]]:
        """Implications at attribute granularity (closure included)"""
        return {(a, b) for source, target in self.implication_closure() for a in source for b in target}
