"""
Product integration.

Merges a product's Artefact-Trees into the SPL's super-ARTs. Members
(imports, fields, methods, parameters, blocks of an if) merge by id; the
statements of a block are aligned with an LCS-based super-sequence so both
the SPL's sequence and the product's embed in the result, and a statement
needed at a second position is copied under a new duplicate id.
"""
import copy
import logging
from typing import Iterable, List, Sequence, Set

from src.models.artefact import Artefact, ArtefactId, ArtefactTree
from src.models.ast import SourceFile
from src.models.corpus import NamedProduct
from src.models.enums import NodeKind
from src.models.errors import DuplicateProductName, InternalCollision, InvalidProduct
from src.models.spl import ProductRecord, SplRepository
from src.services.identification_utils import child_id, identify, root_id
from src.services.minilang_parser import parse
from src.services.sequence_utils import mint_duplicates, super_sequence_slots
from src.utils.logger import LoggerMixin

logger = logging.getLogger(__name__)


class _TreeMerger:
    """Merges one product ART into one super-ART in place"""

    def __init__(self, product: str, super_art: ArtefactTree, configuration: Set[str]):
        self.product = product
        self.super_art = super_art
        self.configuration = configuration
        self.taken: Set[ArtefactId] = {a.id for a in super_art.artefacts()}
        self.added = 0

    def merge(self, product_art: ArtefactTree) -> None:
        self._unify(self.super_art.root, product_art.root)
        self._merge_children(self.super_art.root, product_art.root)

    def _unify(self, existing: Artefact, incoming: Artefact) -> None:
        if existing.kind != incoming.kind or existing.value != incoming.value:
            raise InternalCollision(
                f"Artefact {existing.rendered_id} in {self.super_art.path} holds "
                f"{existing.value!r}, product {self.product} brings {incoming.value!r}"
            )
        existing.origin.add(self.product)
        self.configuration.add(existing.rendered_id)

    def _merge_children(self, spl_node: Artefact, product_node: Artefact) -> None:
        if spl_node.kind == NodeKind.BLOCK:
            self._merge_statements(spl_node, product_node)
        else:
            self._merge_members(spl_node, product_node)

    def _merge_members(self, spl_node: Artefact, product_node: Artefact) -> None:
        by_id = {child.id: child for child in spl_node.children}
        for child in product_node.children:
            artefact_id = child_id(spl_node.id, child.kind, child.value, child.id.twin)
            existing = by_id.get(artefact_id)
            if existing is None:
                grafted = self._graft(child, artefact_id)
                spl_node.children.insert(_member_position(spl_node.children, child.kind), grafted)
                by_id[artefact_id] = grafted
            else:
                self._unify(existing, child)
                self._merge_children(existing, child)

    def _merge_statements(self, spl_block: Artefact, product_block: Artefact) -> None:
        current = spl_block.children
        incoming = product_block.children
        incoming_ids = [
            child_id(spl_block.id, child.kind, child.value, child.id.twin) for child in incoming
        ]
        slots = super_sequence_slots([a.id.key for a in current], [a.key for a in incoming_ids])
        minted = mint_duplicates(
            [current[i].id if i is not None else incoming_ids[j] for i, j in slots],
            [i is not None for i, _ in slots],
        )
        merged: List[Artefact] = []
        for (i, j), artefact_id in zip(slots, minted):
            if i is None:
                merged.append(self._graft(incoming[j], artefact_id))
                continue
            merged.append(current[i])
            if j is not None:
                self._unify(current[i], incoming[j])
                self._merge_children(current[i], incoming[j])
        if len(merged) != len(current):
            logger.debug(
                f"{self.super_art.path}: block {spl_block.rendered_id} grew "
                f"from {len(current)} to {len(merged)} statements"
            )
        spl_block.children = merged

    def _graft(self, node: Artefact, artefact_id: ArtefactId) -> Artefact:
        """Copy a product subtree into the SPL under `artefact_id`"""
        if artefact_id in self.taken:
            raise InternalCollision(
                f"Artefact id {artefact_id.render()} already used in {self.super_art.path}"
            )
        self.taken.add(artefact_id)
        self.added += 1
        grafted = Artefact(id=artefact_id, kind=node.kind, value=node.value, origin={self.product})
        self.configuration.add(grafted.rendered_id)
        for child in node.children:
            grafted.children.append(
                self._graft(child, child_id(artefact_id, child.kind, child.value, child.id.twin))
            )
        return grafted


def _member_position(children: List[Artefact], kind: NodeKind) -> int:
    """New members go after the last sibling of their kind; a first import goes first"""
    for index in range(len(children) - 1, -1, -1):
        if children[index].kind == kind:
            return index + 1
    return 0 if kind == NodeKind.IMPORT else len(children)


class IntegrationService(LoggerMixin):
    """Integrates products into an SPL repository, one iteration per product"""

    def integrate(self, repo: SplRepository, name: str, files: Sequence[SourceFile],
                  features: Sequence[str]) -> SplRepository:
        """
        Integrate a product into the SPL.

        Args:
            repo: SPL at iteration i (left untouched)
            name: unused product name
            files: the product's sources
            features: feature names declared for the product

        Returns:
            New SplRepository at iteration i+1

        Raises:
            DuplicateProductName: name already integrated
            InvalidProduct: no files, no features, or a repeated path
            MiniJSyntaxError: a file does not parse
            InternalCollision: two different artefacts share an id
        """
        self._check_product(repo, name, files, features)

        # Parse and identify every file before touching the SPL
        product_arts = [identify(parse(f), f.path, origin=name) for f in files]

        # Merge into copies of the super-ARTs
        super_arts = copy.deepcopy(repo.super_arts)
        configuration: Set[str] = set()
        added = 0
        for art in product_arts:
            existing = super_arts.get(art.path)
            if existing is None:
                existing = ArtefactTree(
                    path=art.path,
                    root=Artefact(root_id(art.path), NodeKind.COMPILATION_UNIT, art.path),
                )
                super_arts[art.path] = existing
                added += 1
            merger = _TreeMerger(name, existing, configuration)
            merger.merge(art)
            added += merger.added

        # Record the product
        declared = list(dict.fromkeys(f.strip() for f in features if f and f.strip()))
        self.logger.info(
            f"Integrated {name} ({len(files)} files, {len(configuration)} artefacts, "
            f"{added} new) at iteration {repo.iteration + 1}"
        )
        return SplRepository(
            name=repo.name,
            iteration=repo.iteration + 1,
            super_arts=super_arts,
            products=list(repo.products) + [ProductRecord(name, declared, frozenset(configuration))],
            traces=repo.traces,
        )

    def integrate_family(self, repo: SplRepository, products: Iterable[NamedProduct]) -> SplRepository:
        """Integrate products one by one, checking that no artefact ever disappears"""
        for product in products:
            before = set(repo.artefact_ids())
            files = [SourceFile(path, text) for path, text in sorted(product.files.items())]
            repo = self.integrate(repo, product.name, files, product.features)
            missing = before - set(repo.artefact_ids())
            if missing:
                raise RuntimeError(f"Integrating {product.name} lost {len(missing)} artefacts")
        return repo

    @staticmethod
    def _check_product(repo: SplRepository, name: str, files: Sequence[SourceFile],
                       features: Sequence[str]) -> None:
        if not name or not name.strip():
            raise InvalidProduct("Product name cannot be empty")
        if repo.product(name) is not None:
            raise DuplicateProductName(f"Product {name} is already integrated")
        if not files:
            raise InvalidProduct(f"Product {name} has no source files")
        paths = [f.path for f in files]
        if len(set(paths)) != len(paths):
            raise InvalidProduct(f"Product {name} lists a file path twice")
        if not [f for f in features if f and f.strip()]:
            raise InvalidProduct(f"Product {name} declares no features")
