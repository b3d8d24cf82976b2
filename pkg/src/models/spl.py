"""Software product line repository models"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

from .artefact import Artefact, ArtefactTree
from .variability import FeatureTraceTable


@dataclass
class ProductRecord:
    """An integrated product: declared features and its artefact configuration"""
    name: str
    features: List[str]
    artefact_configuration: FrozenSet[str]

    def __post_init__(self):
        self.artefact_configuration = frozenset(self.artefact_configuration)


@dataclass
class SplRepository:
    """
    In-memory SPL state at iteration i.

    `super_arts` maps a relative path to its merged super-ART; `products`
    keeps integration order.
    """
    name: str
    iteration: int = 0
    super_arts: Dict[str, ArtefactTree] = field(default_factory=dict)
    products: List[ProductRecord] = field(default_factory=list)
    traces: FeatureTraceTable = field(default_factory=FeatureTraceTable)

    def product(self, name: str) -> Optional[ProductRecord]:
        for record in self.products:
            if record.name == name:
                return record
        return None

    def product_names(self) -> List[str]:
        return [p.name for p in self.products]

    def features(self) -> List[str]:
        """Every declared feature, first-seen order"""
        seen: Dict[str, None] = {}
        for record in self.products:
            for feature in record.features:
                seen.setdefault(feature, None)
        return list(seen)

    def sorted_paths(self) -> List[str]:
        return sorted(self.super_arts)

    def artefacts(self) -> List[Artefact]:
        """Every artefact, pre-order per super-ART, paths sorted"""
        result = []
        for path in self.sorted_paths():
            result.extend(self.super_arts[path].artefacts())
        return result

    def artefact_ids(self) -> List[str]:
        return [a.rendered_id for a in self.artefacts()]
