"""Command-line entry point for splforge"""
import argparse
import json
import logging
import sys
from typing import Iterable, List, Optional, Sequence

from src import __version__
from src.models.codegen import GenerationWarning
from src.models.enums import AnnotationMode, ModelLevel
from src.models.errors import SplError
from src.models.result import Result
from src.services.corpus_service import CorpusService
from src.services.spl_service import SplService, synthesize_family
from src.services.validation_service import MAX_ALL_ORDERS
from src.utils.config import Settings, load_settings
from src.utils.logger import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2


class UsageError(Exception):
    """Bad command line"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _names(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="splforge", description="Incremental software product line builder")
    parser.add_argument("--version", action="version", version=f"splforge {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbs = parser.add_subparsers(dest="verb", metavar="<verb>", parser_class=_Parser)
    verbs.required = True

    cmd = verbs.add_parser("init", help="create an empty repository")
    cmd.add_argument("repo")
    cmd.add_argument("--name", help="repository name (default: directory name)")

    cmd = verbs.add_parser("integrate", help="integrate a product directory")
    cmd.add_argument("repo")
    cmd.add_argument("product_dir")
    cmd.add_argument("--name", required=True, help="product name")
    cmd.add_argument("--features", required=True, type=_names, help="comma-separated feature names")

    cmd = verbs.add_parser("gen-spl", help="print the annotated SPL")
    cmd.add_argument("repo")
    cmd.add_argument("--mode", choices=[m.value for m in AnnotationMode], default=AnnotationMode.FEATURES.value)
    cmd.add_argument("--no-simplify", action="store_true", help="keep the naive annotations")
    cmd.add_argument("-o", "--output", help="write one annotated file per path here")

    cmd = verbs.add_parser("gen-product", help="generate a product")
    cmd.add_argument("repo")
    source = cmd.add_mutually_exclusive_group(required=True)
    source.add_argument("--features", type=_names, help="comma-separated feature selection")
    source.add_argument("--artefact-config", help="file of artefact ids (JSON list or one per line)")
    source.add_argument("--product", help="regenerate an integrated product")
    cmd.add_argument("-o", "--output", required=True, help="output directory")

    cmd = verbs.add_parser("trace", help="map artefact groups to features")
    cmd.add_argument("repo")
    cmd.add_argument("--map", required=True, help="traces JSON: group -> [feature, ...]")

    cmd = verbs.add_parser("export-vm", help="export a variability model as DOT")
    cmd.add_argument("repo")
    cmd.add_argument("--level", choices=[l.value for l in ModelLevel], default=ModelLevel.FEATURE.value)
    cmd.add_argument("--dot", help="output file (default: stdout)")

    cmd = verbs.add_parser("validate", help="round-trip a product family")
    cmd.add_argument("repo")
    cmd.add_argument("--family", help="FamilySpec JSON (default: bundled hello family)")
    cmd.add_argument("--seed", type=int, default=0)
    cmd.add_argument("--all-orders", action="store_true",
                     help=f"also try every integration order (at most {MAX_ALL_ORDERS} products)")

    cmd = verbs.add_parser("synth", help="synthesize product sources from a family")
    cmd.add_argument("-o", "--output", required=True)
    family = cmd.add_mutually_exclusive_group(required=True)
    family.add_argument("--family", help="FamilySpec JSON")
    family.add_argument("--hello", action="store_true", help="bundled hello family")
    family.add_argument("--random", type=int, metavar="SEED", help="random family from a seed")
    cmd.add_argument("--seed", type=int, default=0, help="product sampling seed")
    cmd.add_argument("--feature-count", type=int, default=4)
    cmd.add_argument("--file-count", type=int, default=2)
    cmd.add_argument("--product-count", type=int, default=4)
    cmd.add_argument("--dump-spec", help="also write the family spec JSON here")
    return parser


class CommandRunner:
    """Runs one parsed command and maps its outcome to an exit code"""

    def __init__(self, settings: Settings, out=None, err=None):
        self.settings = settings
        self.out = out or sys.stdout
        self.err = err or sys.stderr
        self.corpus = CorpusService()

    def run(self, args: argparse.Namespace) -> int:
        handler = getattr(self, "cmd_" + args.verb.replace("-", "_"))
        return handler(args)

    def _service(self, repo: str) -> SplService:
        return SplService(repo, self.settings)

    def _finish(self, result: Result) -> Optional[object]:
        if result.is_err():
            self.err.write(f"error: {result.error}\n")
            return None
        return result.value

    def _warn(self, warnings: Iterable[GenerationWarning]) -> None:
        for warning in warnings:
            self.err.write(warning.render() + "\n")

    def cmd_init(self, args) -> int:
        repo = self._finish(self._service(args.repo).init(args.name))
        return EXIT_OK if repo is not None else EXIT_DOMAIN

    def cmd_integrate(self, args) -> int:
        record = self._finish(self._service(args.repo).integrate(args.product_dir, args.name, args.features))
        if record is None:
            return EXIT_DOMAIN
        self.out.write(json.dumps({
            "artefacts": len(record.artefact_configuration),
            "features": record.features,
            "name": record.name,
        }, sort_keys=True) + "\n")
        return EXIT_OK

    def cmd_gen_spl(self, args) -> int:
        spl = self._finish(self._service(args.repo).generate_spl(
            AnnotationMode(args.mode), simplify=not args.no_simplify, output_dir=args.output))
        if spl is None:
            return EXIT_DOMAIN
        self._warn(spl.warnings)
        if not args.output:
            for annotated in spl.files:
                self.out.write(f"// file: {annotated.path}\n{annotated.text}")
        return EXIT_OK

    def cmd_gen_product(self, args) -> int:
        product = self._finish(self._service(args.repo).generate_product(
            args.output, features=args.features, product=args.product,
            artefact_config_path=args.artefact_config))
        if product is None:
            return EXIT_DOMAIN
        self._warn(product.warnings)
        return EXIT_OK

    def cmd_trace(self, args) -> int:
        table = self._finish(self._service(args.repo).trace(args.map))
        return EXIT_OK if table is not None else EXIT_DOMAIN

    def cmd_export_vm(self, args) -> int:
        dot = self._finish(self._service(args.repo).export_vm(ModelLevel(args.level)))
        if dot is None:
            return EXIT_DOMAIN
        if args.dot:
            with open(args.dot, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(dot)
        else:
            self.out.write(dot)
        return EXIT_OK

    def cmd_validate(self, args) -> int:
        spec = self.corpus.load_family_spec(args.family) if args.family else self.corpus.hello_family_spec()
        if args.all_orders and len(self.corpus.product_specs(spec, args.seed)) > MAX_ALL_ORDERS:
            raise UsageError(f"--all-orders takes families of at most {MAX_ALL_ORDERS} products")
        run = self._finish(self._service(args.repo).validate(spec, args.seed, args.all_orders))
        if run is None:
            return EXIT_DOMAIN
        self.out.write(run.csv())
        return EXIT_OK if run.passed else EXIT_DOMAIN

    def cmd_synth(self, args) -> int:
        if args.family:
            spec = self.corpus.load_family_spec(args.family)
        elif args.hello:
            spec = self.corpus.hello_family_spec()
        else:
            spec = self.corpus.random_family_spec(
                args.random, feature_count=args.feature_count,
                file_count=args.file_count, product_count=args.product_count,
            )
        if args.dump_spec:
            with open(args.dump_spec, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(self.corpus.dump_family_spec(spec))
        products = self._finish(synthesize_family(spec, args.seed, args.output, self.corpus))
        return EXIT_OK if products is not None else EXIT_DOMAIN


def main(argv: Sequence[str] = None) -> int:
    """
    Run the command line.

    Returns:
        0 on success, 1 on a usage error, 2 on a domain error
    """
    settings = load_settings()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    setup_logging(logging.DEBUG if args.verbose else settings.logging_level,
                  format_string='%(levelname)s - %(name)s - %(message)s')
    try:
        return CommandRunner(settings).run(args)
    except UsageError as e:
        sys.stderr.write(f"splforge: {e}\n")
        return EXIT_USAGE
    except SplError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_DOMAIN
    except OSError as e:
        logger.error(f"I/O error: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
