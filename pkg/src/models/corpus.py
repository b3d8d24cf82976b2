"""Product family specification models"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class FileTemplate:
    """
    Shared skeleton file. Lines holding only `//@<anchor>` are replaced by the
    fragments woven at that anchor. A template owned by a feature is only
    emitted for products selecting it.
    """
    path: str
    template: str
    feature: Optional[str] = None


@dataclass(frozen=True)
class Fragment:
    """MiniJ code contributed by a feature at an anchor; rank orders fragments of one anchor"""
    feature: str
    path: str
    anchor: str
    code: str
    rank: int = 0


@dataclass(frozen=True)
class ProductSpec:
    name: str
    features: Tuple[str, ...]


@dataclass
class FamilySpec:
    """Feature pool, skeleton files, anchored fragments and product subsets"""
    name: str
    feature_pool: List[str]
    files: List[FileTemplate]
    fragments: List[Fragment]
    products: List[ProductSpec] = field(default_factory=list)
    requires: List[Tuple[str, str]] = field(default_factory=list)
    excludes: List[Tuple[str, str]] = field(default_factory=list)
    product_count: int = 0

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FamilySpec':
        return cls(
            name=data.get("name", "family"),
            feature_pool=list(data["featurePool"]),
            files=[FileTemplate(f["path"], f["template"], f.get("feature")) for f in data.get("files", [])],
            fragments=[
                Fragment(f["feature"], f["path"], f["anchor"], f["code"], int(f.get("rank", 0)))
                for f in data.get("fragments", [])
            ],
            products=[ProductSpec(p["name"], tuple(p["features"])) for p in data.get("products", [])],
            requires=[tuple(pair) for pair in data.get("requires", [])],
            excludes=[tuple(pair) for pair in data.get("excludes", [])],
            product_count=int(data.get("productCount", 0)),
        )

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "name": self.name,
            "featurePool": list(self.feature_pool),
            "files": [],
            "fragments": [],
            "products": [{"name": p.name, "features": list(p.features)} for p in self.products],
            "requires": [list(pair) for pair in self.requires],
            "excludes": [list(pair) for pair in self.excludes],
        }
        for f in self.files:
            entry = {"path": f.path, "template": f.template}
            if f.feature is not None:
                entry["feature"] = f.feature
            data["files"].append(entry)
        for f in self.fragments:
            data["fragments"].append({
                "feature": f.feature, "path": f.path, "anchor": f.anchor,
                "code": f.code, "rank": f.rank,
            })
        if self.product_count:
            data["productCount"] = self.product_count
        return data


@dataclass
class NamedProduct:
    """Concrete product variant: name, declared features and sources (path -> text)"""
    name: str
    features: List[str]
    files: Dict[str, str]
