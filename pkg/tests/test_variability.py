"""Tests for variability models, trace tables and DOT export"""
import pydot
import pytest

from src.models.corpus import NamedProduct
from src.models.enums import ModelLevel
from src.models.errors import EmptyRepository, UnknownFeature, UnknownGroup
from src.models.spl import SplRepository
from src.models.variability import FeatureTraceTable

from tests.conftest import integrate_all


def _structure(model):
    """Model edges with node names replaced by their attribute sets"""
    contents = {n.name: n.attributes for n in model.nodes}
    return (
        {(contents[a], contents[b]) for a, b in model.implications},
        {frozenset((contents[a], contents[b])) for a, b in model.exclusions},
    )


def _parse_dot(dot):
    graphs = pydot.graph_from_dot_data(dot)
    assert len(graphs) == 1
    return graphs[0]


def _unquote(text):
    return text.strip('"')


def _dot_nodes(graph):
    """Node name -> attributes, without the node/edge/graph default statements"""
    return {
        _unquote(node.get_name()): node.get_attributes()
        for node in graph.get_nodes()
        if node.get_name() not in ("node", "edge", "graph")
    }


def _dot_edges(graph):
    return {
        (_unquote(edge.get_source()), _unquote(edge.get_destination())): edge.get_attributes()
        for edge in graph.get_edges()
    }


class TestFeatureModel:
    """Tests for build_fvm()"""

    def test_hello_fvm(self, variability_service, hello_repo):
        fvm = variability_service.build_fvm(hello_repo)

        assert fvm.level == ModelLevel.FEATURE
        assert {n.name: set(n.attributes) for n in fvm.nodes} == {
            "grp-0": {"People"}, "grp-1": {"World"}, "grp-2": {"All"}, "grp-3": {"Hello"},
        }
        assert fvm.common_node.name == "grp-3"
        assert fvm.implications == [("grp-0", "grp-2"), ("grp-1", "grp-3"), ("grp-2", "grp-3")]
        assert fvm.exclusions == [("grp-0", "grp-1"), ("grp-1", "grp-2")]

    def test_world_excludes_all_and_people(self, variability_service, hello_repo):
        fvm = variability_service.build_fvm(hello_repo)
        world = fvm.group_of("World").name
        excluded = {b if a == world else a for a, b in fvm.exclusions if world in (a, b)}
        assert {name for n in excluded for name in fvm.node(n).attributes} == {"All", "People"}

    def test_single_product_everything_common(self, variability_service, hello_products):
        fvm = variability_service.build_fvm(integrate_all([hello_products["Px"]]))

        assert len(fvm.nodes) == 1
        assert fvm.common_node.attributes == {"Hello", "World"}
        assert fvm.implications == [] and fvm.exclusions == []

    def test_empty_repository(self, variability_service):
        with pytest.raises(EmptyRepository):
            variability_service.build_fvm(SplRepository(name="empty"))


class TestArtefactModel:
    """Tests for build_avm()"""

    def test_avm_isomorphic_to_fvm(self, variability_service, hello_repo):
        avm = variability_service.build_avm(hello_repo)
        fvm = variability_service.build_fvm(hello_repo)

        assert avm.level == ModelLevel.ARTEFACT
        assert sorted(n.name for n in avm.nodes) == sorted(n.name for n in fvm.nodes)
        assert avm.implications == fvm.implications
        assert avm.exclusions == fvm.exclusions

    def test_avm_group_sizes(self, variability_service, hello_repo):
        avm = variability_service.build_avm(hello_repo)
        sizes = {n.name: len(n.attributes) for n in avm.variable_nodes()}
        # People: field, second blank, duplicated who-append; World: field, who-append; All: one statement
        assert sizes == {"grp-0": 3, "grp-1": 2, "grp-2": 1}

    def test_avm_common_node(self, variability_service, hello_repo):
        common = variability_service.build_avm(hello_repo).common_node
        assert common.name == "grp-3"
        assert hello_repo.super_arts["Welcome.java"].root.rendered_id in common.attributes

    def test_structure_depends_only_on_contents(self, variability_service, hello_repo):
        avm = variability_service.build_avm(hello_repo)
        fvm = variability_service.build_fvm(hello_repo)
        implications, exclusions = _structure(avm)
        assert len(implications) == 3
        assert len(exclusions) == 2
        assert len(_structure(fvm)[0]) == 3


class TestTraces:
    """Tests for trace tables"""

    def test_apply_stamps_iteration(self, variability_service, hello_repo, hello_traces):
        traced = variability_service.apply_traces(hello_repo, hello_traces)

        assert traced.traces.iteration == 3
        assert traced.traces.expression("grp-3") == ("Hello",)
        assert variability_service.traces_are_current(traced)
        assert hello_repo.traces.is_empty()

    def test_stale_after_integration(self, variability_service, hello_products, hello_traces):
        repo = integrate_all([hello_products["Px"], hello_products["Py"], hello_products["Pz"]])
        traced = variability_service.apply_traces(repo, hello_traces)
        pw = NamedProduct("Pw", ["Hello"], dict(hello_products["Py"].files))
        later = integrate_all([pw], traced)

        assert later.traces.iteration == 3
        assert not variability_service.traces_are_current(later)

    def test_unknown_group(self, variability_service, hello_repo):
        with pytest.raises(UnknownGroup, match="grp-9"):
            variability_service.apply_traces(hello_repo, FeatureTraceTable({"grp-9": ("Hello",)}))

    def test_unknown_feature(self, variability_service, hello_repo):
        with pytest.raises(UnknownFeature, match="Nope"):
            variability_service.apply_traces(hello_repo, FeatureTraceTable({"grp-0": ("Nope",)}))

    def test_empty_expression(self, variability_service, hello_repo):
        with pytest.raises(UnknownFeature):
            variability_service.apply_traces(hello_repo, FeatureTraceTable({"grp-0": ()}))

    def test_empty_table(self, variability_service, hello_repo):
        traced = variability_service.apply_traces(hello_repo, FeatureTraceTable())
        assert traced.traces.is_empty()
        assert traced.traces.iteration == 3
        assert traced.artefact_ids() == hello_repo.artefact_ids()

    def test_interaction_expression(self, variability_service, hello_repo):
        table = FeatureTraceTable.from_dict({"grp-0": ["All", "People"]})
        traced = variability_service.apply_traces(hello_repo, table)
        assert traced.traces.expression("grp-0") == ("All", "People")

    def test_dict_forms(self):
        table = FeatureTraceTable.from_dict({"grp-1": "World", "grp-0": ["All", " People"]})
        assert table.entries == {"grp-1": ("World",), "grp-0": ("All", "People")}
        assert table.to_dict() == {"grp-0": ["All", "People"], "grp-1": ["World"]}

    def test_dict_must_be_mapping(self):
        with pytest.raises(ValueError):
            FeatureTraceTable.from_dict(["grp-0"])

    @pytest.mark.parametrize("expression", [None, 1, {"All": True}, ["All", None], ["All", 2]])
    def test_expression_must_be_names(self, expression):
        with pytest.raises(ValueError, match="grp-0"):
            FeatureTraceTable.from_dict({"grp-0": expression})


class TestDotExport:
    """Tests for export_dot() and to_graph()"""

    def test_hello_fvm_parses_back(self, variability_service, hello_repo):
        graph = _parse_dot(variability_service.export_dot(variability_service.build_fvm(hello_repo)))

        assert graph.get_type() == "digraph"
        assert _unquote(graph.get_name()) == "FVM"
        nodes = _dot_nodes(graph)
        assert set(nodes) == {"grp-0", "grp-1", "grp-2", "grp-3"}
        assert nodes["grp-0"]["label"] == '"grp-0\\nPeople"'
        assert nodes["grp-3"]["label"] == '"grp-3 (common)\\nHello"'
        assert nodes["grp-3"]["style"] == "filled"
        assert nodes["grp-3"]["fillcolor"] == "lightgrey"
        assert str(nodes["grp-3"]["peripheries"]) == "2"
        assert "style" not in nodes["grp-0"]

    def test_hello_fvm_edges(self, variability_service, hello_repo):
        edges = _dot_edges(_parse_dot(variability_service.export_dot(variability_service.build_fvm(hello_repo))))

        implications = {pair for pair, attrs in edges.items() if attrs.get("style") != "dashed"}
        exclusions = {pair for pair, attrs in edges.items() if attrs.get("style") == "dashed"}
        assert implications == {("grp-0", "grp-2"), ("grp-1", "grp-3"), ("grp-2", "grp-3")}
        assert exclusions == {("grp-0", "grp-1"), ("grp-1", "grp-2")}
        assert all(edges[pair]["dir"] == "none" for pair in exclusions)
        assert all(edges[pair]["constraint"] == "false" for pair in exclusions)

    def test_layout_defaults(self, variability_service, hello_repo):
        dot = variability_service.export_dot(variability_service.build_fvm(hello_repo))
        assert "rankdir=BT" in dot
        assert "shape=box" in dot

    def test_avm_labels_count_artefacts(self, variability_service, hello_repo):
        graph = _parse_dot(variability_service.export_dot(variability_service.build_avm(hello_repo)))
        nodes = _dot_nodes(graph)

        assert _unquote(graph.get_name()) == "AVM"
        assert nodes["grp-2"]["label"] == '"grp-2\\n1 artefact"'
        assert nodes["grp-0"]["label"] == '"grp-0\\n3 artefacts"'

    def test_single_node(self, variability_service, hello_products):
        fvm = variability_service.build_fvm(integrate_all([hello_products["Px"]]))
        graph = _parse_dot(variability_service.export_dot(fvm))

        assert list(_dot_nodes(graph)) == ["grp-0"]
        assert graph.get_edges() == []

    def test_graph_carries_the_model(self, variability_service, hello_repo):
        fvm = variability_service.build_fvm(hello_repo)
        graph = variability_service.to_graph(fvm)

        assert sorted(graph.nodes) == sorted(n.name for n in fvm.nodes)
        assert graph.number_of_edges() == len(fvm.implications) + len(fvm.exclusions)
        assert graph.nodes["grp-3"]["style"] == "filled"

    def test_deterministic(self, variability_service, hello_repo):
        avm = variability_service.build_avm(hello_repo)
        assert variability_service.export_dot(avm) == variability_service.export_dot(avm)
