"""
Round-trip validation.

Integrates a product family, regenerates each product from its recorded
artefact configuration and compares it with the canonically printed
original. The comparison is a structural diff counting inserted, deleted and
updated nodes plus moved statements; reordering of members, imports or other
non-statement nodes is ignored.
"""
import itertools
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import pandas as pd

from src.models.ast import AstNode, SourceFile
from src.models.corpus import NamedProduct
from src.models.enums import NodeKind
from src.models.errors import EmptyProduct
from src.models.spl import SplRepository
from src.models.validation import REPORT_COLUMNS, DiffReport, RoundTripResult
from src.services.codegen_service import CodegenService
from src.services.integration_service import IntegrationService
from src.services.minilang_parser import parse
from src.services.minilang_printer import MiniJPrinter
from src.services.sequence_utils import lcs_pairs
from src.utils.logger import LoggerMixin

MAX_ALL_ORDERS = 4


def _key(node: AstNode) -> Tuple[NodeKind, str]:
    return (node.kind, node.text)


class _PrintedTree:
    """A parsed file with the canonical lines each node owns"""

    def __init__(self, root: AstNode):
        self.root = root
        self.lines = MiniJPrinter().lines(root)
        self.owned: Dict[int, List[int]] = {}
        for index, line in enumerate(self.lines):
            self.owned.setdefault(id(line.owner), []).append(index)

    def own_lines(self, node: AstNode) -> List[int]:
        return self.owned.get(id(node), [])

    def subtree_lines(self, node: AstNode) -> List[int]:
        return [i for n in node.walk() for i in self.own_lines(n)]


class _TreeDiff:
    """Pairwise node matching of two files, accumulating edit counts"""

    def __init__(self, original: _PrintedTree, regenerated: _PrintedTree, report: DiffReport):
        self.original = original
        self.regenerated = regenerated
        self.report = report
        self.touched_original: Set[int] = set()
        self.touched_regenerated: Set[int] = set()

    def run(self) -> None:
        self._match_children(self.original.root, self.regenerated.root)

    def _match_children(self, old: AstNode, new: AstNode) -> None:
        old_children, new_children = list(old.children), list(new.children)
        pairs: List[Tuple[AstNode, AstNode]] = []
        left = list(range(len(old_children)))
        right = list(range(len(new_children)))

        if old.kind == NodeKind.BLOCK:
            anchors = lcs_pairs([_key(c) for c in old_children], [_key(c) for c in new_children])
            pairs.extend((old_children[i], new_children[j]) for i, j in anchors)
            matched_old = {i for i, _ in anchors}
            matched_new = {j for _, j in anchors}
            left = [i for i in left if i not in matched_old]
            right = [j for j in right if j not in matched_new]
            # equal statements left over changed position
            for i, j in self._pair_greedily(old_children, new_children, left, right, _key):
                self.report.statement_moves += 1
                self.touched_original.update(self.original.subtree_lines(old_children[i]))
                pairs.append((old_children[i], new_children[j]))
                left.remove(i)
                right.remove(j)
        else:
            for i, j in self._pair_greedily(old_children, new_children, left, right, _key):
                pairs.append((old_children[i], new_children[j]))
                left.remove(i)
                right.remove(j)

        for i, j in self._pair_greedily(old_children, new_children, left, right, lambda n: n.kind):
            self.report.updates += 1
            self.touched_original.update(self.original.own_lines(old_children[i]))
            pairs.append((old_children[i], new_children[j]))
            left.remove(i)
            right.remove(j)

        for i in left:
            self._delete(old_children[i])
        for j in right:
            self._insert(new_children[j])
        for old_child, new_child in pairs:
            self._match_children(old_child, new_child)

    @staticmethod
    def _pair_greedily(old_children, new_children, left, right, key) -> List[Tuple[int, int]]:
        """First-fit pairing of unmatched children with equal keys, in order"""
        pairs = []
        free = list(right)
        for i in left:
            for j in free:
                if key(old_children[i]) == key(new_children[j]):
                    pairs.append((i, j))
                    free.remove(j)
                    break
        return pairs

    def _delete(self, node: AstNode) -> None:
        self.report.deletions += sum(1 for _ in node.walk())
        self.touched_original.update(self.original.subtree_lines(node))

    def _insert(self, node: AstNode) -> None:
        # one line per inserted node: its opening line, never a closing brace
        for inserted in node.walk():
            self.report.insertions += 1
            lines = self.regenerated.own_lines(inserted)
            if lines:
                self.touched_regenerated.add(lines[0])


def _parse_files(files: Mapping[str, str]) -> Dict[str, AstNode]:
    sources = [SourceFile(path, text) for path, text in files.items()]
    return {source.path: parse(source) for source in sources}


def report_frame(results: Iterable[RoundTripResult]) -> pd.DataFrame:
    return pd.DataFrame([r.as_row() for r in results], columns=REPORT_COLUMNS)


def report_csv(results: Iterable[RoundTripResult]) -> str:
    """CSV report: product,insertions,deletions,updates,statementMoves,modifiedLoc,totalLoc,repErr"""
    return report_frame(results).to_csv(index=False, lineterminator="\n")


class ValidationService(LoggerMixin):
    """Structural diffs and round trips of product families"""

    def __init__(self, integration: IntegrationService = None, codegen: CodegenService = None):
        self.integration = integration or IntegrationService()
        self.codegen = codegen or CodegenService()

    def ast_diff(self, original: Mapping[str, str], regenerated: Mapping[str, str]) -> DiffReport:
        """
        Structural diff of two products (path -> source text).

        Statements of a block are aligned on (kind, text) with an LCS; equal
        statements left over count as moves, same-kind leftovers as updates, and
        the rest as deleted or inserted subtrees. Other children are matched as a
        multiset. Deletions, updates and moves touch lines of the original;
        each inserted node touches its first line in the regenerated product, so
        modified_loc never exceeds total_loc_original plus insertions. Each line
        counts once.

        Raises:
            MiniJSyntaxError: either side does not parse
        """
        old_trees = _parse_files(original)
        new_trees = _parse_files(regenerated)
        report = DiffReport()
        empty = AstNode(NodeKind.COMPILATION_UNIT, "")
        for path in sorted(set(old_trees) | set(new_trees)):
            old = _PrintedTree(old_trees.get(path, empty))
            new = _PrintedTree(new_trees.get(path, empty))
            report.total_loc_original += len(old.lines)
            diff = _TreeDiff(old, new, report)
            diff.run()
            report.modified_loc += len(diff.touched_original) + len(diff.touched_regenerated)
        return report

    @staticmethod
    def rep_err(report: DiffReport) -> float:
        """
        Percentage of the original's lines affected by the differences.

        Raises:
            EmptyProduct: the original product has no line of code
        """
        if report.total_loc_original <= 0:
            raise EmptyProduct("Original product has no lines of code")
        return 100.0 * report.modified_loc / report.total_loc_original

    def round_trip(self, products: Sequence[NamedProduct], order: Optional[Sequence[str]] = None,
                   name: str = "round-trip") -> List[RoundTripResult]:
        """
        Integrate `products` into a fresh repository, then regenerate and diff each.

        Args:
            products: the family
            order: optional integration order by product name (default: as given)
            name: name of the scratch repository

        Returns:
            One result per product, in integration order
        """
        by_name = {p.name: p for p in products}
        sequence = [by_name[n] for n in order] if order is not None else list(products)

        # Integrate
        repo = self.integration.integrate_family(SplRepository(name=name), sequence)

        # Regenerate and diff
        results = []
        for product in sequence:
            regenerated = self.codegen.generate_integrated_product(repo, product.name)
            report = self.ast_diff(product.files, regenerated.files)
            results.append(RoundTripResult(product.name, report, self.rep_err(report)))
        worst = max((r.rep_err for r in results), default=0.0)
        self.logger.info(f"Round trip over {len(results)} products, worst rep_err {worst:.2f}%")
        return results

    def round_trip_all_orders(self, products: Sequence[NamedProduct]) -> Dict[Tuple[str, ...], List[RoundTripResult]]:
        """Round trip under every integration order of a family of at most four products"""
        if len(products) > MAX_ALL_ORDERS:
            raise ValueError(f"All-orders validation takes at most {MAX_ALL_ORDERS} products")
        names = [p.name for p in products]
        return {
            order: self.round_trip(products, order)
            for order in itertools.permutations(names)
        }
