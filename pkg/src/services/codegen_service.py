"""
Annotated SPL generation and product generation.

The SPL is printed from the super-ARTs with the canonical printer; every
variable artefact is wrapped in `//#if <condition>` ... `//#endif` lines
indented like the code they hold. Products are derived either by evaluating
the simplified SPL for a feature selection or by pruning the super-ARTs to
an artefact configuration.
"""
import os
from typing import Dict, Iterable, List, Set, Tuple

from src.models.artefact import Artefact
from src.models.codegen import AnnotatedFile, AnnotatedSpl, Annotation, GeneratedProduct, GenerationWarning
from src.models.enums import AnnotationMode, NodeKind
from src.models.errors import OrphanSelection, UnknownArtefactId, UnknownFeature, UnknownProduct
from src.models.spl import SplRepository
from src.services.annotation_utils import evaluate, simplify_file
from src.services.minilang_printer import DEFAULT_INDENT, MiniJPrinter, PrintedLine, node_text
from src.services.variability_service import VariabilityService
from src.utils.logger import LoggerMixin

UNTRACED_GROUP = "untraced-group"
STALE_TRACES = "stale-traces"
MUTUAL_EXCLUSION = "mutual-exclusion"


class AnnotatingPrinter(MiniJPrinter):
    """Canonical printer wrapping labelled artefacts in directive lines"""

    def __init__(self, labels: Dict[str, Annotation], indent: int = DEFAULT_INDENT):
        super().__init__(indent)
        self.labels = labels

    def emit(self, node: Artefact, depth: int, out: List[PrintedLine]) -> None:
        annotation = self.labels.get(node.rendered_id)
        transparent = node.kind == NodeKind.BLOCK and node_text(node) == "{"
        if annotation is None or node.kind == NodeKind.COMPILATION_UNIT or transparent:
            self.emit_node(node, depth, out)
            return
        wrapped: List[PrintedLine] = []
        self.emit_node(node, depth, wrapped)
        if not wrapped:
            return
        out.append(PrintedLine(depth, annotation.opening(), None))
        out.extend(wrapped)
        out.append(PrintedLine(depth, annotation.closing(), None))


def _prune(artefact: Artefact, selected: Set[str]) -> Artefact:
    return Artefact(
        id=artefact.id,
        kind=artefact.kind,
        value=artefact.value,
        children=[_prune(c, selected) for c in artefact.children if c.rendered_id in selected],
        origin=set(artefact.origin),
    )


class CodegenService(LoggerMixin):
    """Prints annotated SPLs and derives products from a repository"""

    def __init__(self, indent: int = DEFAULT_INDENT, variability: VariabilityService = None):
        self.indent = indent
        self.variability = variability or VariabilityService()

    def _labels(self, repo: SplRepository,
                mode: AnnotationMode) -> Tuple[Dict[str, Annotation], List[GenerationWarning]]:
        """Annotation per rendered artefact id; unlabelled artefacts print bare"""
        warnings: List[GenerationWarning] = []
        if not repo.products:
            return {}, warnings
        constraints = self.variability.artefact_constraints(repo)
        if mode == AnnotationMode.IDS:
            labels = {
                artefact_id: Annotation((artefact_id,))
                for members in constraints.groups.values() for artefact_id in members
            }
            return labels, warnings

        traces = {}
        if mode == AnnotationMode.FEATURES and not repo.traces.is_empty():
            if not self.variability.traces_are_current(repo):
                warnings.append(GenerationWarning(
                    STALE_TRACES,
                    f"trace table applied at iteration {repo.traces.iteration}, repository is at "
                    f"iteration {repo.iteration}; using group labels",
                ))
            else:
                traces = repo.traces.entries

        labels: Dict[str, Annotation] = {}
        untraced = []
        for name, members in constraints.groups.items():
            expression = traces.get(name)
            if expression is None and mode == AnnotationMode.FEATURES:
                untraced.append(name)
            annotation = Annotation(tuple(expression) if expression else (name,))
            labels.update((artefact_id, annotation) for artefact_id in members)
        common_trace = traces.get(constraints.common_name) if constraints.common_name else None
        if common_trace:
            labels.update((artefact_id, Annotation(tuple(common_trace))) for artefact_id in constraints.common)
        if untraced:
            warnings.append(GenerationWarning(
                UNTRACED_GROUP, f"groups labelled by name: {', '.join(untraced)}"
            ))
        return labels, warnings

    def generate_spl(self, repo: SplRepository, mode: AnnotationMode = AnnotationMode.FEATURES) -> AnnotatedSpl:
        """
        Naive annotated SPL: every variable artefact carries its own annotation.

        Common artefacts print bare, except in features mode when the common
        group is traced to a feature.
        """
        labels, warnings = self._labels(repo, mode)
        printer = AnnotatingPrinter(labels, self.indent)
        files = []
        for path in repo.sorted_paths():
            lines = printer.lines(repo.super_arts[path].root)
            files.append(AnnotatedFile(path, [" " * (self.indent * line.depth) + line.text for line in lines]))
        for warning in warnings:
            self.logger.warning(warning.render())
        self.logger.info(
            f"Generated SPL {repo.name} in {mode.value} mode: {len(files)} files, "
            f"{sum(f.annotation_count() for f in files)} annotations"
        )
        return AnnotatedSpl(files=files, warnings=warnings)

    def simplify_spl(self, spl: AnnotatedSpl) -> AnnotatedSpl:
        files = [simplify_file(f) for f in spl.files]
        self.logger.debug(f"Simplified {len(files)} annotated files")
        return AnnotatedSpl(files=files, warnings=list(spl.warnings))

    def _mutual_exclusion_warnings(self, repo: SplRepository, selection: Set[str]) -> List[GenerationWarning]:
        fvm = self.variability.build_fvm(repo)
        warnings = []
        for a, b in fvm.exclusions:
            left = sorted(fvm.node(a).attributes & selection)
            right = sorted(fvm.node(b).attributes & selection)
            if left and right:
                warnings.append(GenerationWarning(
                    MUTUAL_EXCLUSION,
                    f"{', '.join(left)} and {', '.join(right)} never appear together in an integrated product",
                ))
        return warnings

    def generate_product_by_features(self, repo: SplRepository, features: Iterable[str]) -> GeneratedProduct:
        """
        Derive a product from a feature selection.

        A region is kept when every conjunct of its condition is selected. A
        selection breaking a mutual exclusion of the FVM is generated anyway,
        with a warning. Files left without code are not emitted.

        Raises:
            UnknownFeature: a selected feature is declared by no product
        """
        selection = {f.strip() for f in features if f and f.strip()}
        unknown = sorted(selection - set(repo.features()))
        if unknown:
            raise UnknownFeature(f"Unknown features: {', '.join(unknown)}")

        warnings = self._mutual_exclusion_warnings(repo, selection) if repo.products else []
        spl = self.simplify_spl(self.generate_spl(repo, AnnotationMode.FEATURES))
        warnings.extend(spl.warnings)

        # Evaluate every file; files without code are dropped
        files = {}
        for annotated in spl.files:
            lines = evaluate(annotated, selection)
            if lines:
                files[annotated.path] = "".join(line + "\n" for line in lines)
        for warning in warnings:
            self.logger.warning(warning.render())
        self.logger.info(f"Generated product for {sorted(selection)}: {len(files)} files")
        return GeneratedProduct(files=files, warnings=warnings)

    def generate_product_by_artefacts(self, repo: SplRepository, configuration: Iterable[str]) -> GeneratedProduct:
        """
        Derive a product from an artefact configuration.

        Each super-ART is pruned to the selected artefacts and printed; a file is
        emitted when its root artefact is selected.

        Raises:
            UnknownArtefactId: an id is in no super-ART
            OrphanSelection: an artefact is selected without its parent
        """
        selected = {c.strip() for c in configuration if c and c.strip()}
        unknown = sorted(selected - set(repo.artefact_ids()))
        if unknown:
            shown = ", ".join(unknown[:5]) + (" ..." if len(unknown) > 5 else "")
            raise UnknownArtefactId(f"{len(unknown)} unknown artefact ids: {shown}")

        printer = MiniJPrinter(self.indent)
        files: Dict[str, str] = {}
        for path in repo.sorted_paths():
            root = repo.super_arts[path].root
            for artefact, parent in root.walk_with_parent():
                if parent is not None and artefact.rendered_id in selected and parent.rendered_id not in selected:
                    raise OrphanSelection(
                        f"{artefact.rendered_id} ({artefact.kind.value}) selected without its parent "
                        f"{parent.rendered_id} in {path}"
                    )
            if root.rendered_id in selected:
                files[path] = printer.print(_prune(root, selected))
        self.logger.info(f"Generated product from {len(selected)} artefacts: {len(files)} files")
        return GeneratedProduct(files=files)

    def generate_integrated_product(self, repo: SplRepository, name: str) -> GeneratedProduct:
        """Regenerate an integrated product from its recorded artefact configuration"""
        record = repo.product(name)
        if record is None:
            raise UnknownProduct(f"Product {name} is not integrated")
        return self.generate_product_by_artefacts(repo, record.artefact_configuration)

    @staticmethod
    def write_files(files: Dict[str, str], output_dir: str) -> List[str]:
        """Write path -> text under `output_dir`; returns the written paths"""
        written = []
        for path in sorted(files):
            target = os.path.join(output_dir, *path.split("/"))
            os.makedirs(os.path.dirname(target), exist_ok=True)
            with open(target, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(files[path])
            written.append(target)
        return written

    def write_annotated(self, files: Iterable[AnnotatedFile], output_dir: str) -> List[str]:
        return self.write_files({f.path: f.text for f in files}, output_dir)
