"""
Unit tests for SplRepositoryStore.

Covers initialization, the single-writer lock, and save/load of super-ARTs,
product records and trace tables.
"""
import os

import pytest

from src.models.errors import RepositoryExists, RepositoryLocked, RepositoryNotFound
from src.repositories import SplRepositoryStore, art_from_dict, art_to_dict
from src.repositories.spl_repository import ARTS_DIR, LOCK_FILE, META_FILE, PCM_FILE, art_file_name

from tests.conftest import integrate_all


def _snapshot(root) -> dict:
    """Every file under root, by relative path"""
    files = {}
    for current, _, names in os.walk(root):
        for name in names:
            full = os.path.join(current, name)
            with open(full, "rb") as handle:
                files[os.path.relpath(full, root)] = handle.read()
    return files


class TestInitialize:
    """Tests for initialize() and exists()"""

    def test_creates_empty_repository(self, tmp_path):
        store = SplRepositoryStore(str(tmp_path / "spl"))
        assert store.exists() is False

        repo = store.initialize()

        assert store.exists() is True
        assert repo.name == "spl"
        assert repo.iteration == 0
        assert (tmp_path / "spl" / ARTS_DIR).is_dir()

    def test_explicit_name(self, tmp_path):
        repo = SplRepositoryStore(str(tmp_path)).initialize("hello")
        assert repo.name == "hello"
        assert SplRepositoryStore(str(tmp_path)).load().name == "hello"

    def test_twice_raises(self, tmp_path):
        store = SplRepositoryStore(str(tmp_path))
        store.initialize()
        with pytest.raises(RepositoryExists):
            store.initialize()

    def test_load_missing(self, tmp_path):
        with pytest.raises(RepositoryNotFound, match="init"):
            SplRepositoryStore(str(tmp_path / "nowhere")).load()


class TestLock:
    """Tests for lock()"""

    def test_lock_released(self, tmp_path):
        store = SplRepositoryStore(str(tmp_path))
        with store.lock():
            assert (tmp_path / LOCK_FILE).exists()
        assert not (tmp_path / LOCK_FILE).exists()

    def test_second_writer_refused(self, tmp_path):
        store = SplRepositoryStore(str(tmp_path))
        with store.lock():
            with pytest.raises(RepositoryLocked):
                with SplRepositoryStore(str(tmp_path)).lock():
                    pass

    def test_released_on_error(self, tmp_path):
        store = SplRepositoryStore(str(tmp_path))
        with pytest.raises(RuntimeError):
            with store.lock():
                raise RuntimeError("boom")
        with store.lock():
            pass


class TestSaveLoad:
    """Tests for save() and load()"""

    def test_round_trip(self, tmp_path, hello_repo):
        store = SplRepositoryStore(str(tmp_path))
        store.save(hello_repo)
        loaded = store.load()

        assert loaded.name == hello_repo.name
        assert loaded.iteration == 3
        assert loaded.artefact_ids() == hello_repo.artefact_ids()
        assert loaded.products == hello_repo.products
        for path in hello_repo.sorted_paths():
            assert art_to_dict(loaded.super_arts[path]) == art_to_dict(hello_repo.super_arts[path])

    def test_traces_keep_their_iteration(self, tmp_path, traced_hello_repo):
        store = SplRepositoryStore(str(tmp_path))
        store.save(traced_hello_repo)
        traces = store.load().traces

        assert traces.entries == traced_hello_repo.traces.entries
        assert traces.iteration == 3

    def test_untraced_repository(self, tmp_path, hello_repo):
        store = SplRepositoryStore(str(tmp_path))
        store.save(hello_repo)
        traces = store.load().traces
        assert traces.is_empty()
        assert traces.iteration is None

    def test_layout(self, tmp_path, hello_repo):
        SplRepositoryStore(str(tmp_path)).save(hello_repo)

        assert (tmp_path / META_FILE).is_file()
        assert (tmp_path / ARTS_DIR / art_file_name("Welcome.java")).is_file()
        assert (tmp_path / PCM_FILE).read_text(encoding="utf-8").splitlines()[1].startswith("Px,")
        assert not list(tmp_path.rglob("*.tmp"))

    def test_no_pcm_without_products(self, tmp_path):
        SplRepositoryStore(str(tmp_path)).initialize()
        assert not (tmp_path / PCM_FILE).exists()

    def test_equal_states_equal_bytes(self, tmp_path, hello_repo):
        first, second = tmp_path / "a", tmp_path / "b"
        SplRepositoryStore(str(first)).save(hello_repo)
        SplRepositoryStore(str(second)).save(SplRepositoryStore(str(first)).load())
        assert _snapshot(first) == _snapshot(second)

    def test_same_integrations_same_bytes(self, tmp_path, hello_products):
        products = [hello_products[n] for n in ("Px", "Py", "Pz")]
        SplRepositoryStore(str(tmp_path / "a")).save(integrate_all(products))
        SplRepositoryStore(str(tmp_path / "b")).save(integrate_all(products))
        assert _snapshot(tmp_path / "a") == _snapshot(tmp_path / "b")


class TestArtDocuments:
    """Tests for art_to_dict() and art_from_dict()"""

    def test_preorder_nodes(self, hello_repo):
        tree = hello_repo.super_arts["Welcome.java"]
        document = art_to_dict(tree)

        assert document["path"] == "Welcome.java"
        assert [n["id"] for n in document["nodes"]] == tree.rendered_ids()
        assert document["nodes"][0]["kind"] == tree.root.kind.value
        assert document["nodes"][0]["origin"] == ["Px", "Py", "Pz"]

    def test_rebuilds_tree(self, hello_repo):
        tree = hello_repo.super_arts["Welcome.java"]
        rebuilt = art_from_dict(art_to_dict(tree))

        assert rebuilt.rendered_ids() == tree.rendered_ids()
        assert [a.value for a in rebuilt.artefacts()] == [a.value for a in tree.artefacts()]
        assert [len(a.children) for a in rebuilt.artefacts()] == [len(a.children) for a in tree.artefacts()]
