"""Variability model and feature trace data models"""
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple

from .enums import ModelLevel


@dataclass(frozen=True)
class VariabilityNode:
    """A co-occurrence group, or the common group"""
    name: str
    attributes: FrozenSet[str]
    common: bool = False


@dataclass
class VariabilityModel:
    """
    Artefact (AVM) or feature (FVM) variability model.

    Implication edges are (source, target): selecting the source requires the
    target. Exclusion edges are unordered pairs stored name-sorted.
    """
    level: ModelLevel
    nodes: List[VariabilityNode]
    implications: List[Tuple[str, str]] = field(default_factory=list)
    exclusions: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def common_node(self) -> Optional[VariabilityNode]:
        for node in self.nodes:
            if node.common:
                return node
        return None

    def node(self, name: str) -> VariabilityNode:
        for node in self.nodes:
            if node.name == name:
                return node
        raise KeyError(name)

    def group_of(self, attribute: str) -> Optional[VariabilityNode]:
        for node in self.nodes:
            if attribute in node.attributes:
                return node
        return None

    def variable_nodes(self) -> List[VariabilityNode]:
        return [n for n in self.nodes if not n.common]


@dataclass
class FeatureTraceTable:
    """
    Manual feature location: artefact group name -> feature expression.

    A single name traces a feature, several names a feature interaction
    (conjunction). `iteration` is the repository iteration the table was
    applied at; group names are only meaningful for that iteration.
    """
    entries: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    iteration: Optional[int] = None

    def expression(self, group: str) -> Optional[Tuple[str, ...]]:
        return self.entries.get(group)

    def is_empty(self) -> bool:
        return not self.entries

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'FeatureTraceTable':
        """
        Read a `group -> [feature, ...]` mapping (a bare string is one feature)

        Raises:
            ValueError: not an object, or an expression that is neither a
                string nor a list of strings
        """
        if not isinstance(data, Mapping):
            raise ValueError("Trace map must be a JSON object")
        entries: Dict[str, Tuple[str, ...]] = {}
        for group, expression in data.items():
            names = [expression] if isinstance(expression, str) else expression
            if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
                raise ValueError(f"Group {group} must map to a feature name or a list of feature names")
            entries[str(group)] = tuple(n.strip() for n in names)
        return cls(entries=entries)

    def to_dict(self) -> Dict[str, List[str]]:
        return {group: list(expression) for group, expression in sorted(self.entries.items())}
