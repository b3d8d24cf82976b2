"""Unit tests for SplService and its Result values"""
import json

import pydot
import pytest

from src.models.enums import AnnotationMode, ModelLevel
from src.models.errors import RepositoryNotFound
from src.models.result import Err, Ok
from src.services.spl_service import SplService, read_product_dir, synthesize_family
from src.utils.config import Settings


@pytest.fixture
def products_dir(tmp_path, hello_spec):
    out = tmp_path / "products"
    assert synthesize_family(hello_spec, 0, str(out)).is_ok()
    return out


@pytest.fixture
def service(tmp_path, products_dir):
    service = SplService(str(tmp_path / "spl"), Settings())
    service.init("hello")
    for name, features in (("Px", ["Hello", "World"]), ("Py", ["Hello", "All"]), ("Pz", ["Hello", "All", "People"])):
        assert service.integrate(str(products_dir / name), name, features).is_ok()
    return service


class TestSplService:
    """Tests for SplService"""

    def test_empty_root(self):
        with pytest.raises(ValueError):
            SplService("")

    def test_integrate_returns_record(self, service):
        repo = service.load().value
        assert repo.iteration == 3
        assert repo.product_names() == ["Px", "Py", "Pz"]

    def test_missing_repository_is_err(self, tmp_path):
        result = SplService(str(tmp_path / "nowhere"), Settings()).load()

        assert isinstance(result, Err)
        assert isinstance(result.exception, RepositoryNotFound)

    def test_missing_product_dir_is_err(self, service, tmp_path):
        result = service.integrate(str(tmp_path / "nowhere"), "Pw", ["Hello"])
        assert result.is_err()
        assert "does not exist" in result.error

    def test_failed_integration_leaves_repository(self, service, products_dir):
        assert service.integrate(str(products_dir / "Px"), "Px", ["Hello"]).is_err()
        assert service.load().value.iteration == 3

    def test_generate_spl(self, service):
        result = service.generate_spl(AnnotationMode.GROUPS)
        assert isinstance(result, Ok)
        assert result.value.file("Welcome.java").annotation_count() == 6

    def test_generate_product_writes_files(self, service, tmp_path, products_dir):
        out = tmp_path / "py"
        result = service.generate_product(str(out), product="Py")

        assert result.is_ok()
        assert (out / "Welcome.java").read_text(encoding="utf-8") == \
            (products_dir / "Py" / "Welcome.java").read_text(encoding="utf-8")

    def test_export_vm(self, service):
        (graph,) = pydot.graph_from_dot_data(service.export_vm(ModelLevel.ARTEFACT).value)
        assert graph.get_name().strip('"') == "AVM"

    def test_indent_setting(self, service):
        narrow = SplService(service.root, Settings(indent=2))
        text = narrow.generate_product(None, product="Px").value.files["Welcome.java"]
        assert text.splitlines()[1] == "  String msg = \"\";"

    def test_artefact_config_file(self, service, tmp_path, products_dir):
        record = service.load().value.product("Px")
        config = tmp_path / "px.json"
        config.write_text(json.dumps(sorted(record.artefact_configuration)), encoding="utf-8")

        result = service.generate_product(None, artefact_config_path=str(config))

        assert result.value.files["Welcome.java"] == \
            (products_dir / "Px" / "Welcome.java").read_text(encoding="utf-8")

    def test_malformed_artefact_config_is_err(self, service, tmp_path):
        config = tmp_path / "bad.json"
        config.write_text("[ not json", encoding="utf-8")

        result = service.generate_product(None, artefact_config_path=str(config))

        assert result.is_err()
        assert result.error.startswith("gen-product failed:")

    def test_malformed_trace_map_is_err(self, service, tmp_path):
        traces = tmp_path / "traces.json"
        traces.write_text('{"grp-0": null}', encoding="utf-8")

        result = service.trace(str(traces))

        assert result.is_err()
        assert "grp-0" in result.error
        assert service.load().value.traces.is_empty()

    def test_validate_needs_empty_repository(self, service, hello_spec):
        result = service.validate(hello_spec)
        assert result.is_err()
        assert "empty repository" in result.error

    def test_validate_fresh_repository(self, tmp_path, hello_spec):
        run = SplService(str(tmp_path / "fresh"), Settings()).validate(hello_spec).value
        assert run.passed
        assert run.orders == {}


class TestReadProductDir:
    """Tests for read_product_dir()"""

    def test_relative_sorted_paths(self, tmp_path):
        (tmp_path / "b").mkdir()
        (tmp_path / "b" / "B.java").write_text("class B { }", encoding="utf-8")
        (tmp_path / "A.java").write_text("class A { }", encoding="utf-8")
        (tmp_path / "notes.txt").write_text("ignored", encoding="utf-8")

        files = read_product_dir(str(tmp_path), ".java")

        assert [f.path for f in files] == ["A.java", "b/B.java"]
