"""Shared fixtures: the services, the bundled hello family and repositories built from it"""
import json
from pathlib import Path
from typing import List

import pytest

from src.models.ast import SourceFile
from src.models.corpus import NamedProduct
from src.models.spl import SplRepository
from src.models.variability import FeatureTraceTable
from src.services.codegen_service import CodegenService
from src.services.corpus_service import CorpusService
from src.services.fca_service import FcaService
from src.services.integration_service import IntegrationService
from src.services.validation_service import ValidationService
from src.services.variability_service import VariabilityService

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def source_files(product: NamedProduct) -> List[SourceFile]:
    return [SourceFile(path, text) for path, text in sorted(product.files.items())]


def integrate_all(products, repo: SplRepository = None) -> SplRepository:
    repo = repo or SplRepository(name="hello")
    integration = IntegrationService()
    for product in products:
        repo = integration.integrate(repo, product.name, source_files(product), product.features)
    return repo


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture
def fca_service():
    return FcaService()


@pytest.fixture
def variability_service(fca_service):
    return VariabilityService(fca_service)


@pytest.fixture
def integration_service():
    return IntegrationService()


@pytest.fixture
def codegen_service(variability_service):
    return CodegenService(variability=variability_service)


@pytest.fixture
def validation_service(integration_service, codegen_service):
    return ValidationService(integration_service, codegen_service)


@pytest.fixture
def corpus_service(fca_service):
    return CorpusService(fca_service)


@pytest.fixture
def hello_spec(corpus_service):
    return corpus_service.hello_family_spec()


@pytest.fixture
def hello_products(corpus_service, hello_spec):
    """Px {Hello, World}, Py {Hello, All}, Pz {Hello, All, People}"""
    return {p.name: p for p in corpus_service.synthesize(hello_spec)}


@pytest.fixture
def hello_repo(hello_products):
    return integrate_all([hello_products[n] for n in ("Px", "Py", "Pz")])


@pytest.fixture
def hello_traces():
    return FeatureTraceTable.from_dict(json.loads(read_fixture("hello_traces.json")))


@pytest.fixture
def traced_hello_repo(variability_service, hello_repo, hello_traces):
    return variability_service.apply_traces(hello_repo, hello_traces)
