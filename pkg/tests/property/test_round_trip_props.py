"""
Property-based tests over synthesized product families.

Every product of a random family must be printed back unchanged after
integration, in any integration order, and every integrated artefact id must
be unique in its super-ART.
"""
import time

from hypothesis import given, settings
from hypothesis import strategies as st

from src.models.ast import SourceFile
from src.services.corpus_service import CorpusService
from src.services.identification_utils import identify
from src.services.minilang_parser import parse
from src.services.minilang_printer import print_tree
from src.services.validation_service import ValidationService

from tests.conftest import integrate_all

corpus = CorpusService()
validation = ValidationService()

seeds = st.integers(min_value=0, max_value=10_000)

statements = st.sampled_from(["a();", "b();", "x = 1;", "x = 2;", "if (x) { a(); }", "while (y) { b(); }"])


def _method(body) -> dict:
    return {"A.java": "class A { void f() { " + " ".join(body) + " } }"}


@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_printer_is_idempotent(seed):
    for product in corpus.synthesize(corpus.random_family_spec(seed), seed):
        for path, text in product.files.items():
            printed = print_tree(parse(SourceFile(path, text)))
            assert print_tree(parse(SourceFile(path, printed))) == printed


@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_identified_ids_are_unique(seed):
    for product in corpus.synthesize(corpus.random_family_spec(seed), seed):
        for path, text in product.files.items():
            ids = identify(parse(SourceFile(path, text)), path).rendered_ids()
            assert len(ids) == len(set(ids))


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_random_family_round_trips(seed):
    spec = corpus.random_family_spec(seed, feature_count=4, file_count=2, product_count=4)
    results = validation.round_trip(corpus.synthesize(spec, seed))

    assert [r.rep_err for r in results] == [0.0] * len(results)


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_super_art_ids_stay_unique(seed):
    spec = corpus.random_family_spec(seed, feature_count=4, file_count=2, product_count=4)
    repo = integrate_all(corpus.synthesize(spec, seed))
    for tree in repo.super_arts.values():
        ids = tree.rendered_ids()
        assert len(ids) == len(set(ids))


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_every_integration_order_round_trips(seed):
    spec = corpus.random_family_spec(seed, feature_count=3, file_count=1, product_count=3)
    runs = validation.round_trip_all_orders(corpus.synthesize(spec, seed))

    assert len(runs) == 6
    assert all(r.rep_err == 0.0 for results in runs.values() for r in results)


@settings(max_examples=200, deadline=None)
@given(original=st.lists(statements, max_size=8), regenerated=st.lists(statements, max_size=8))
def test_modified_lines_are_bounded(original, regenerated):
    report = validation.ast_diff(_method(original), _method(regenerated))

    assert report.modified_loc <= report.total_loc_original + report.insertions
    assert (report.modified_loc == 0) == (report.insertions + report.deletions + report.updates
                                          + report.statement_moves == 0)


def test_hundred_file_family_round_trips_in_a_minute():
    spec = corpus.random_family_spec(7, feature_count=6, file_count=100, product_count=10,
                                     fragment_size=5, fragments_per_feature=4)
    products = corpus.synthesize(spec, 7)

    started = time.perf_counter()
    results = validation.round_trip(products)
    elapsed = time.perf_counter() - started

    assert len(products) == 10
    assert all(len(p.files) >= 100 for p in products)
    assert [r.rep_err for r in results] == [0.0] * 10
    assert elapsed < 60
