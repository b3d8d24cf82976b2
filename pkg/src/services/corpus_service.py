"""
Product family synthesis.

A FamilySpec holds skeleton files with `//@<anchor>` lines and feature
fragments woven at those anchors. Synthesizing a family yields one source
set per product; the bundled hello family rebuilds the Welcome example, and
`random_family_spec` builds seeded families with twins and interleavings.
"""
import json
import random
import re
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

from src.models.corpus import FamilySpec, FileTemplate, Fragment, NamedProduct, ProductSpec
from src.models.errors import CompositionError, InvalidFamilySpec
from src.models.fca import ConstraintSet, FormalContext
from src.services.fca_service import FcaService
from src.utils.logger import LoggerMixin

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus_data"
HELLO_FAMILY = CORPUS_DIR / "hello_family.json"
DEFAULT_PRODUCT_COUNT = 4
MAX_SAMPLING_ATTEMPTS = 2000

_ANCHOR_RE = re.compile(r"^(\s*)//@([A-Za-z_][\w-]*)\s*$")

_VOCABULARY = (
    "total = total + 1;",
    "total = total * 2;",
    "total = total - step;",
    "log(total);",
    "step = step + 1;",
)


def _anchors(template: str) -> Set[str]:
    return {m.group(2) for m in (_ANCHOR_RE.match(line) for line in template.splitlines()) if m}


def _respects(features: FrozenSet[str], spec: FamilySpec) -> bool:
    if any(a in features and b not in features for a, b in spec.requires):
        return False
    return not any(a in features and b in features for a, b in spec.excludes)


def _close(features: Set[str], spec: FamilySpec) -> Set[str]:
    closed = set(features)
    changed = True
    while changed:
        changed = False
        for a, b in spec.requires:
            if a in closed and b not in closed:
                closed.add(b)
                changed = True
    return closed


def _weave(template: FileTemplate, fragments: Dict[str, List[Fragment]], product: str) -> str:
    lines = []
    for line in template.template.splitlines():
        match = _ANCHOR_RE.match(line)
        if match is None:
            lines.append(line)
            continue
        indent, anchor = match.groups()
        woven = sorted(fragments.get(anchor, []), key=lambda f: f.rank)
        for previous, current in zip(woven, woven[1:]):
            if previous.rank == current.rank:
                raise CompositionError(
                    f"{product}: features {previous.feature} and {current.feature} collide at "
                    f"anchor {anchor} of {template.path} (rank {current.rank})"
                )
        for fragment in woven:
            lines.extend(indent + code for code in fragment.code.splitlines())
    return "".join(line + "\n" for line in lines)


class CorpusService(LoggerMixin):
    """Loads, checks and synthesizes product families"""

    def __init__(self, fca: FcaService = None):
        self.fca = fca or FcaService()

    @staticmethod
    def load_family_spec(path) -> FamilySpec:
        """Read a FamilySpec JSON file"""
        try:
            with open(path, encoding="utf-8") as handle:
                data = json.load(handle)
            return FamilySpec.from_dict(data)
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidFamilySpec(f"Invalid family spec {path}: {e}") from e

    def hello_family_spec(self) -> FamilySpec:
        return self.load_family_spec(HELLO_FAMILY)

    @staticmethod
    def dump_family_spec(spec: FamilySpec) -> str:
        return json.dumps(spec.to_dict(), indent=2, sort_keys=True) + "\n"

    def validate_family_spec(self, spec: FamilySpec) -> None:
        """
        Check a spec for consistency.

        Raises:
            InvalidFamilySpec: unknown feature, path or anchor, a duplicated
                product name, or a product breaking requires/excludes
        """
        pool = set(spec.feature_pool)
        if not pool:
            raise InvalidFamilySpec("Feature pool is empty")
        templates = {}
        for template in spec.files:
            if template.path in templates:
                raise InvalidFamilySpec(f"File {template.path} declared twice")
            if template.feature is not None and template.feature not in pool:
                raise InvalidFamilySpec(f"File {template.path} owned by unknown feature {template.feature}")
            templates[template.path] = _anchors(template.template)
        for fragment in spec.fragments:
            if fragment.feature not in pool:
                raise InvalidFamilySpec(f"Fragment of unknown feature {fragment.feature}")
            if fragment.path not in templates:
                raise InvalidFamilySpec(f"Fragment targets unknown file {fragment.path}")
            if fragment.anchor not in templates[fragment.path]:
                raise InvalidFamilySpec(f"File {fragment.path} has no anchor {fragment.anchor}")
        for a, b in list(spec.requires) + list(spec.excludes):
            if a not in pool or b not in pool:
                raise InvalidFamilySpec(f"Constraint {a}/{b} names an unknown feature")
        names = [p.name for p in spec.products]
        if len(set(names)) != len(names):
            raise InvalidFamilySpec("Product names must be unique")
        for product in spec.products:
            features = frozenset(product.features)
            if not features:
                raise InvalidFamilySpec(f"Product {product.name} selects no feature")
            if not features <= pool:
                raise InvalidFamilySpec(f"Product {product.name} selects unknown features")
            if not _respects(features, spec):
                raise InvalidFamilySpec(f"Product {product.name} breaks the family constraints")

    def sample_products(self, spec: FamilySpec, seed: int) -> List[ProductSpec]:
        """Draw distinct valid feature subsets, closed under requires"""
        count = spec.product_count or DEFAULT_PRODUCT_COUNT
        rng = random.Random(seed)
        pool = list(spec.feature_pool)
        chosen: List[FrozenSet[str]] = []
        for _ in range(MAX_SAMPLING_ATTEMPTS):
            if len(chosen) == count:
                break
            picked = {f for f in pool if rng.random() < 0.5} or {rng.choice(pool)}
            features = frozenset(_close(picked, spec))
            if features not in chosen and _respects(features, spec):
                chosen.append(features)
        if len(chosen) < count:
            raise InvalidFamilySpec(f"Cannot draw {count} distinct valid products from {spec.name}")
        order = {f: i for i, f in enumerate(pool)}
        return [
            ProductSpec(f"P{i + 1}", tuple(sorted(features, key=order.get)))
            for i, features in enumerate(chosen)
        ]

    def product_specs(self, spec: FamilySpec, seed: int) -> List[ProductSpec]:
        return list(spec.products) if spec.products else self.sample_products(spec, seed)

    def synthesize(self, spec: FamilySpec, seed: int = 0) -> List[NamedProduct]:
        """
        Build every product of a family.

        Args:
            spec: family specification
            seed: drives product sampling when the family lists no products

        Returns:
            Products in spec order, each with exactly the fragments of its features

        Raises:
            InvalidFamilySpec: inconsistent spec
            CompositionError: two selected fragments share an anchor and rank
        """
        self.validate_family_spec(spec)
        products = []
        for product in self.product_specs(spec, seed):
            selected = set(product.features)
            by_file: Dict[str, Dict[str, List[Fragment]]] = {}
            for fragment in spec.fragments:
                if fragment.feature in selected:
                    by_file.setdefault(fragment.path, {}).setdefault(fragment.anchor, []).append(fragment)
            files = {
                template.path: _weave(template, by_file.get(template.path, {}), product.name)
                for template in spec.files
                if template.feature is None or template.feature in selected
            }
            products.append(NamedProduct(product.name, list(product.features), files))
        self.logger.info(f"Synthesized {len(products)} products of family {spec.name}")
        return products

    @staticmethod
    def feature_context(products: Sequence[NamedProduct], pool: Iterable[str]) -> FormalContext:
        rows = {p.name: set(p.features) for p in products}
        used = [f for f in pool if any(f in row for row in rows.values())]
        return FormalContext.from_sets([p.name for p in products], used, rows)

    def ground_truth_constraints(self, spec: FamilySpec, seed: int = 0) -> ConstraintSet:
        """Definitional constraints over the products' feature subsets"""
        self.validate_family_spec(spec)
        products = [
            NamedProduct(p.name, list(p.features), {}) for p in self.product_specs(spec, seed)
        ]
        return self.fca.definitional_constraints(self.feature_context(products, spec.feature_pool))

    def random_family_spec(self, seed: int, feature_count: int = 4, file_count: int = 2,
                           product_count: int = 4, fragment_size: int = 3,
                           fragments_per_feature: int = 2) -> FamilySpec:
        """
        Seeded random family.

        Statements are drawn from a small vocabulary shared with the skeleton,
        so products hold twins and merges need duplicates. Every product selects
        the `Base` feature.
        """
        rng = random.Random(seed)
        features = [f"F{i}" for i in range(1, feature_count + 1)]
        files: List[FileTemplate] = []
        fragments: List[Fragment] = []
        anchors = ("a0", "a1", "a2")
        for index in range(file_count):
            path = f"src/C{index}.java"
            files.append(FileTemplate(path, (
                f"class C{index} {{\n"
                "    int total = 0;\n"
                "    int step = 1;\n"
                "    //@fields\n"
                "    void run() {\n"
                "        total = 0;\n"
                "        //@a0\n"
                "        total = total + 1;\n"
                "        //@a1\n"
                "        log(total);\n"
                "        //@a2\n"
                "    }\n"
                "    //@members\n"
                "}\n"
            )))
            rank = 0
            for feature in features:
                tag = f"{feature.lower()}_{index}"
                if rng.random() < 0.5:
                    fragments.append(Fragment(feature, path, "fields", f"int {tag} = {rng.randint(0, 9)};", rank))
                    rank += 1
                for _ in range(rng.randint(1, fragments_per_feature)):
                    code = [rng.choice(_VOCABULARY) for _ in range(rng.randint(1, fragment_size))]
                    if rng.random() < 0.2:
                        code = ["if ( total > step ) {"] + ["    " + c for c in code] + ["}"]
                    fragments.append(Fragment(feature, path, rng.choice(anchors), "\n".join(code), rank))
                    rank += 1
                if rng.random() < 0.25:
                    body = "\n".join("    " + rng.choice(_VOCABULARY) for _ in range(rng.randint(1, fragment_size)))
                    fragments.append(Fragment(feature, path, "members", f"void {tag}() {{\n{body}\n}}", rank))
                    rank += 1
        for feature in features:
            if rng.random() < 0.3:
                files.append(FileTemplate(
                    f"src/{feature}Util.java",
                    f"class {feature}Util {{\n    int uses = 0;\n    void touch() {{\n        uses = uses + 1;\n    }}\n}}\n",
                    feature,
                ))

        pool = ["Base"] + features
        requires: List[Tuple[str, str]] = [(f, "Base") for f in features]
        excludes: List[Tuple[str, str]] = []
        if feature_count >= 3 and rng.random() < 0.5:
            excludes.append((features[0], features[-1]))
        spec = FamilySpec(
            name=f"random-{seed}",
            feature_pool=pool,
            files=files,
            fragments=fragments,
            requires=requires,
            excludes=excludes,
            product_count=min(product_count, 2 ** feature_count - (2 ** (feature_count - 2) if excludes else 0)),
        )
        spec.products = self.sample_products(spec, seed)
        return spec
