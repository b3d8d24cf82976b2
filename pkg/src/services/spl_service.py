"""
SPL service: the pipeline over an on-disk repository.

Each operation loads the repository, runs one phase (integration, SPL
generation, product generation, tracing, model export, validation or
corpus synthesis) and, for writers, saves it back under the repository
lock. Domain errors come back as `Err` values; the command line turns them
into exit code 2.
"""
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd

from src.models.ast import SourceFile
from src.models.codegen import AnnotatedSpl, GeneratedProduct
from src.models.corpus import FamilySpec, NamedProduct
from src.models.enums import AnnotationMode, ModelLevel
from src.models.errors import InvalidProduct, SplError
from src.models.result import Err, Ok, Result
from src.models.spl import ProductRecord, SplRepository
from src.models.validation import RoundTripResult
from src.models.variability import FeatureTraceTable
from src.repositories.spl_repository import SplRepositoryStore, dump_json
from src.services.codegen_service import CodegenService
from src.services.corpus_service import CorpusService
from src.services.integration_service import IntegrationService
from src.services.validation_service import ValidationService, report_csv, report_frame
from src.services.variability_service import VariabilityService
from src.utils.config import Settings, load_settings
from src.utils.logger import LoggerMixin, log_error

logger = logging.getLogger(__name__)

PRODUCTS_MANIFEST = "products.json"


@dataclass
class ValidationRun:
    """Round-trip results, per integration order when every order was tried"""
    results: List[RoundTripResult]
    orders: Dict[tuple, List[RoundTripResult]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        runs = list(self.orders.values()) or [self.results]
        return all(r.rep_err == 0.0 for run in runs for r in run)

    def csv(self) -> str:
        if not self.orders:
            return report_csv(self.results)
        frames = []
        for order, results in self.orders.items():
            frame = report_frame(results)
            frame.insert(0, "order", "-".join(order))
            frames.append(frame)
        return pd.concat(frames, ignore_index=True).to_csv(index=False, lineterminator="\n")


def read_product_dir(directory: str, suffix: str) -> List[SourceFile]:
    """Every `suffix` file under `directory`, with paths relative to it"""
    if not os.path.isdir(directory):
        raise InvalidProduct(f"Product directory {directory} does not exist")
    files = []
    for current, dirs, names in os.walk(directory):
        dirs.sort()
        for file_name in sorted(names):
            if file_name.endswith(suffix):
                full = os.path.join(current, file_name)
                relative = os.path.relpath(full, directory).replace(os.sep, "/")
                with open(full, encoding="utf-8") as handle:
                    files.append(SourceFile(relative, handle.read()))
    return files


def read_artefact_config(path: str) -> List[str]:
    """
    Artefact ids from a JSON list or a file of one id per line

    Raises:
        ValueError: malformed JSON, or a JSON value that is not a list of strings
    """
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    if not text.lstrip().startswith(("[", "{")):
        return [line.strip() for line in text.splitlines() if line.strip()]
    ids = json.loads(text)
    if not isinstance(ids, list) or not all(isinstance(item, str) for item in ids):
        raise ValueError(f"Artefact configuration {path} must list artefact id strings")
    return [item.strip() for item in ids]


def _wrap(action: str, call) -> Result:
    try:
        return Ok(call())
    except SplError as e:
        logger.error(f"{action} failed: {e}")
        return Err(str(e), e)
    except (OSError, ValueError) as e:
        log_error(logger, e, f"{action} failed")
        return Err(f"{action} failed: {e}", e)


class SplService(LoggerMixin):
    """Repository-level operations returning Result values"""

    def __init__(self, root: str, settings: Settings = None):
        if not root:
            raise ValueError("root cannot be empty")
        self.root = root
        self.settings = settings or load_settings()
        self.variability = VariabilityService()
        self.integration = IntegrationService()
        self.codegen = CodegenService(self.settings.indent, self.variability)
        self.validation = ValidationService(self.integration, self.codegen)
        self.corpus = CorpusService(self.variability.fca)
        self.store = SplRepositoryStore(root, self.variability)

    # -- writers -------------------------------------------------------

    def init(self, name: str = None) -> Result[SplRepository, str]:
        def run():
            with self.store.lock():
                return self.store.initialize(name)
        return _wrap("init", run)

    def integrate(self, product_dir: str, name: str, features: Sequence[str]) -> Result[ProductRecord, str]:
        """Integrate the MiniJ files found under `product_dir`"""
        def run():
            files = read_product_dir(product_dir, self.settings.source_suffix)
            with self.store.lock():
                repo = self.integration.integrate(self.store.load(), name, files, features)
                self.store.save(repo)
            return repo.product(name)
        return _wrap("integrate", run)

    def trace(self, traces_path: str) -> Result[FeatureTraceTable, str]:
        def run():
            with open(traces_path, encoding="utf-8") as handle:
                table = FeatureTraceTable.from_dict(json.load(handle))
            with self.store.lock():
                repo = self.variability.apply_traces(self.store.load(), table)
                self.store.save(repo)
            return repo.traces
        return _wrap("trace", run)

    def validate(self, spec: FamilySpec, seed: int = 0, all_orders: bool = False) -> Result[ValidationRun, str]:
        """
        Integrate a family into this repository (created when missing, must
        hold no product) and regenerate every product from its configuration.
        """
        def run():
            products = self.corpus.synthesize(spec, seed)

            # Integrate into the repository itself
            with self.store.lock():
                repo = self.store.load() if self.store.exists() else SplRepository(
                    name=os.path.basename(os.path.abspath(self.root)))
                if repo.products:
                    raise InvalidProduct(f"{self.root} already holds products; validate needs an empty repository")
                repo = self.integration.integrate_family(repo, products)
                self.store.save(repo)

            # Regenerate and diff
            results = []
            for product in products:
                regenerated = self.codegen.generate_integrated_product(repo, product.name)
                report = self.validation.ast_diff(product.files, regenerated.files)
                results.append(RoundTripResult(product.name, report, self.validation.rep_err(report)))
            orders = self.validation.round_trip_all_orders(products) if all_orders else {}
            return ValidationRun(results, orders)
        return _wrap("validate", run)

    # -- readers -------------------------------------------------------

    def load(self) -> Result[SplRepository, str]:
        return _wrap("load", self.store.load)

    def generate_spl(self, mode: AnnotationMode, simplify: bool = True,
                     output_dir: Optional[str] = None) -> Result[AnnotatedSpl, str]:
        def run():
            spl = self.codegen.generate_spl(self.store.load(), mode)
            if simplify:
                spl = self.codegen.simplify_spl(spl)
            if output_dir:
                self.codegen.write_annotated(spl.files, output_dir)
            return spl
        return _wrap("gen-spl", run)

    def generate_product(self, output_dir: Optional[str], features: Optional[Iterable[str]] = None,
                         artefact_config: Optional[Iterable[str]] = None,
                         product: Optional[str] = None,
                         artefact_config_path: Optional[str] = None) -> Result[GeneratedProduct, str]:
        """
        Derive a product from features, an artefact configuration (given
        inline or as a file), or a recorded product
        """
        def run():
            config = artefact_config
            if artefact_config_path is not None:
                config = read_artefact_config(artefact_config_path)
            repo = self.store.load()
            if product is not None:
                generated = self.codegen.generate_integrated_product(repo, product)
            elif config is not None:
                generated = self.codegen.generate_product_by_artefacts(repo, config)
            else:
                generated = self.codegen.generate_product_by_features(repo, features or [])
            if output_dir:
                self.codegen.write_files(generated.files, output_dir)
            return generated
        return _wrap("gen-product", run)

    def export_vm(self, level: ModelLevel) -> Result[str, str]:
        def run():
            repo = self.store.load()
            if level == ModelLevel.FEATURE:
                model = self.variability.build_fvm(repo)
            else:
                model = self.variability.build_avm(repo)
            return self.variability.export_dot(model)
        return _wrap("export-vm", run)


def synthesize_family(spec: FamilySpec, seed: int, output_dir: str,
                      corpus: CorpusService = None) -> Result[List[NamedProduct], str]:
    """Write out/<product>/<path> for every product, plus a products.json manifest"""
    corpus = corpus or CorpusService()

    def run():
        products = corpus.synthesize(spec, seed)
        os.makedirs(output_dir, exist_ok=True)
        for product in products:
            CodegenService.write_files(product.files, os.path.join(output_dir, product.name))
        manifest = {p.name: list(p.features) for p in products}
        with open(os.path.join(output_dir, PRODUCTS_MANIFEST), "w", encoding="utf-8", newline="\n") as handle:
            handle.write(dump_json(manifest))
        logger.info(f"Wrote {len(products)} products of {spec.name} to {output_dir}")
        return products
    return _wrap("synth", run)
