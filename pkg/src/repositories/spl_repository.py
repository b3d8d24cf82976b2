"""SPL repository persistence on disk"""
import json
import os
from contextlib import contextmanager
from typing import Any, Dict, Iterator

from src.models.artefact import Artefact, ArtefactId, ArtefactTree
from src.models.enums import NodeKind
from src.models.errors import RepositoryExists, RepositoryLocked, RepositoryNotFound
from src.models.spl import ProductRecord, SplRepository
from src.models.variability import FeatureTraceTable
from src.services.identification_utils import content_hash
from src.services.variability_service import VariabilityService
from src.utils.logger import LoggerMixin

META_FILE = "meta.json"
ARTS_DIR = "arts"
PCM_FILE = "pcm.csv"
TRACES_FILE = "traces.json"
LOCK_FILE = ".lock"


def art_to_dict(tree: ArtefactTree) -> Dict[str, Any]:
    """ART document: the path and a pre-order node list"""
    return {
        "path": tree.path,
        "nodes": [
            {
                "childCount": len(a.children),
                "id": a.rendered_id,
                "kind": a.kind.value,
                "origin": sorted(a.origin),
                "value": a.value,
            }
            for a in tree.artefacts()
        ],
    }


def art_from_dict(data: Dict[str, Any]) -> ArtefactTree:
    nodes = iter(data["nodes"])

    def build() -> Artefact:
        node = next(nodes)
        artefact = Artefact(
            id=ArtefactId.parse(node["id"]),
            kind=NodeKind(node["kind"]),
            value=node["value"],
            origin=set(node.get("origin", [])),
        )
        artefact.children = [build() for _ in range(node["childCount"])]
        return artefact

    return ArtefactTree(path=data["path"], root=build())


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def art_file_name(path: str) -> str:
    return f"{content_hash(path):016x}.json"


class SplRepositoryStore(LoggerMixin):
    """
    Directory holding one SPL repository.

    Layout: meta.json (name, iteration, product records), arts/<path hash>.json
    (one per super-ART), pcm.csv and traces.json. Every file is written with
    sorted keys and LF endings so equal states give equal bytes.
    """

    def __init__(self, root: str, variability: VariabilityService = None):
        self.root = root
        self.variability = variability or VariabilityService()

    def _path(self, *parts: str) -> str:
        return os.path.join(self.root, *parts)

    def exists(self) -> bool:
        return os.path.isfile(self._path(META_FILE))

    def initialize(self, name: str = None) -> SplRepository:
        """
        Create an empty repository.

        Raises:
            RepositoryExists: the directory already holds one
        """
        if self.exists():
            raise RepositoryExists(f"{self.root} already holds a repository")
        os.makedirs(self._path(ARTS_DIR), exist_ok=True)
        repo = SplRepository(name=name or os.path.basename(os.path.abspath(self.root)))
        self.save(repo)
        self.logger.info(f"Initialized repository {repo.name} in {self.root}")
        return repo

    @contextmanager
    def lock(self) -> Iterator[None]:
        """
        Single-writer lock over the repository directory.

        Raises:
            RepositoryLocked: another writer holds the lock
        """
        os.makedirs(self.root, exist_ok=True)
        lock_path = self._path(LOCK_FILE)
        try:
            fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise RepositoryLocked(f"{self.root} is locked by another writer ({LOCK_FILE} present)")
        try:
            os.write(fd, str(os.getpid()).encode("ascii"))
            os.close(fd)
            yield
        finally:
            os.remove(lock_path)

    def load(self) -> SplRepository:
        """
        Read the repository.

        Raises:
            RepositoryNotFound: no meta.json in the directory
        """
        if not self.exists():
            raise RepositoryNotFound(f"{self.root} does not hold a repository (run init first)")
        meta = self._read_json(META_FILE)
        super_arts = {}
        for path, file_name in meta.get("arts", {}).items():
            super_arts[path] = art_from_dict(self._read_json(ARTS_DIR, file_name))
        products = [
            ProductRecord(p["name"], list(p["features"]), frozenset(p["artefactConfiguration"]))
            for p in meta.get("products", [])
        ]
        traces = FeatureTraceTable()
        if os.path.isfile(self._path(TRACES_FILE)):
            traces = FeatureTraceTable.from_dict(self._read_json(TRACES_FILE))
            traces.iteration = meta.get("tracesIteration")
        return SplRepository(
            name=meta["name"],
            iteration=int(meta["iteration"]),
            super_arts=super_arts,
            products=products,
            traces=traces,
        )

    def save(self, repo: SplRepository) -> None:
        """Write every repository file"""
        os.makedirs(self._path(ARTS_DIR), exist_ok=True)
        arts = {}
        for path in repo.sorted_paths():
            file_name = art_file_name(path)
            arts[path] = file_name
            self._write(dump_json(art_to_dict(repo.super_arts[path])), ARTS_DIR, file_name)
        meta = {
            "arts": arts,
            "iteration": repo.iteration,
            "name": repo.name,
            "products": [self._record_to_dict(p) for p in repo.products],
            "tracesIteration": repo.traces.iteration,
        }
        self._write(dump_json(repo.traces.to_dict()), TRACES_FILE)
        if repo.products:
            tmp = self._path(PCM_FILE + ".tmp")
            self.variability.fca.write_context_csv(self.variability.build_pcm(repo), tmp)
            os.replace(tmp, self._path(PCM_FILE))
        self._write(dump_json(meta), META_FILE)
        self.logger.debug(f"Saved {repo.name} at iteration {repo.iteration} ({len(arts)} super-ARTs)")

    @staticmethod
    def _record_to_dict(record: ProductRecord) -> Dict[str, Any]:
        return {
            "artefactConfiguration": sorted(record.artefact_configuration),
            "features": list(record.features),
            "name": record.name,
        }

    def _read_json(self, *parts: str) -> Any:
        with open(self._path(*parts), encoding="utf-8") as handle:
            return json.load(handle)

    def _write(self, text: str, *parts: str) -> None:
        target = self._path(*parts)
        tmp = target + ".tmp"
        with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, target)

