"""Tests for formal contexts, AOC-posets and constraint mining"""
import pytest

from src.models.errors import EmptyContext, InvalidContext
from src.models.fca import FormalContext


@pytest.fixture
def hello_features():
    """Products x features of the hello family"""
    return FormalContext.from_sets(
        ["Px", "Py", "Pz"],
        ["Hello", "World", "All", "People"],
        {"Px": {"Hello", "World"}, "Py": {"Hello", "All"}, "Pz": {"Hello", "All", "People"}},
    )


class TestFormalContext:
    """Validation of FormalContext"""

    def test_no_objects(self):
        with pytest.raises(EmptyContext):
            FormalContext([], ["a"], [])

    def test_duplicate_names(self):
        with pytest.raises(InvalidContext):
            FormalContext(["o", "o"], ["a"], [[True], [False]])
        with pytest.raises(InvalidContext):
            FormalContext(["o"], ["a", "a"], [[True, False]])

    def test_ragged_incidence(self):
        with pytest.raises(InvalidContext):
            FormalContext(["o"], ["a", "b"], [[True]])

    def test_lookups(self, hello_features):
        assert hello_features.object_attributes("Pz") == {"Hello", "All", "People"}
        assert hello_features.attribute_objects("All") == {"Py", "Pz"}


class TestAocPoset:
    """Tests for build_aoc_poset()"""

    def test_full_context_single_concept(self, fca_service):
        ctx = FormalContext.from_sets(["o1", "o2"], ["a", "b"], {"o1": {"a", "b"}, "o2": {"a", "b"}})
        poset = fca_service.build_aoc_poset(ctx)

        assert len(poset.concepts) == 1
        (concept,) = poset.concepts
        assert concept.extent == {"o1", "o2"}
        assert concept.intent == {"a", "b"}
        assert poset.order == []

    def test_hello_concept_numbering(self, fca_service, hello_features):
        """Smaller extents first; among equal sizes, later products first"""
        poset = fca_service.build_aoc_poset(hello_features)

        assert [c.extent for c in poset.concepts] == [
            frozenset({"Pz"}), frozenset({"Px"}), frozenset({"Py", "Pz"}), frozenset({"Px", "Py", "Pz"}),
        ]
        assert [c.introduced_attributes for c in poset.concepts] == [
            frozenset({"People"}), frozenset({"World"}), frozenset({"All"}), frozenset({"Hello"}),
        ]
        assert poset.concepts[2].introduced_objects == {"Py"}
        assert poset.concepts[3].intent == {"Hello"}

    def test_hello_order_is_reduced(self, fca_service, hello_features):
        poset = fca_service.build_aoc_poset(hello_features)
        assert poset.order == [(2, 0), (3, 1), (3, 2)]
        assert poset.ancestors(0) == {2, 3}
        assert poset.parents(0) == [2]
        assert poset.children(3) == [1, 2]

    def test_dead_attribute_forms_no_concept(self, fca_service):
        ctx = FormalContext.from_sets(["o1", "o2"], ["a", "b", "dead"], {"o1": {"a"}, "o2": {"a", "b"}})
        poset = fca_service.build_aoc_poset(ctx)
        assert all("dead" not in c.introduced_attributes for c in poset.concepts)

    def test_hello_pcm_top_concept_holds_common_artefacts(self, variability_service, fca_service, hello_repo):
        pcm = variability_service.build_pcm(hello_repo)
        poset = fca_service.build_aoc_poset(pcm)
        top = poset.concepts[-1]
        everywhere = {a for a in pcm.attributes if pcm.attribute_objects(a) == {"Px", "Py", "Pz"}}

        assert top.extent == {"Px", "Py", "Pz"}
        assert top.intent == everywhere


class TestConstraints:
    """Tests for extract_constraints() and definitional_constraints()"""

    def test_hello_features(self, fca_service, hello_features):
        constraints = fca_service.mine_constraints(hello_features)

        assert constraints.common == {"Hello"}
        assert constraints.common_name == "grp-3"
        assert constraints.groups == {
            "grp-0": frozenset({"People"}),
            "grp-1": frozenset({"World"}),
            "grp-2": frozenset({"All"}),
        }
        assert constraints.implications == [("grp-0", "grp-2")]
        assert constraints.mutual_exclusions == [("grp-0", "grp-1"), ("grp-1", "grp-2")]
        assert constraints.dead == frozenset()

    def test_identical_objects_everything_common(self, fca_service):
        ctx = FormalContext.from_sets(["o1", "o2"], ["a", "b"], {"o1": {"a", "b"}, "o2": {"a", "b"}})
        constraints = fca_service.mine_constraints(ctx)

        assert constraints.common == {"a", "b"}
        assert constraints.groups == {}
        assert constraints.implications == []
        assert constraints.mutual_exclusions == []

    def test_no_common_attribute(self, fca_service):
        ctx = FormalContext.from_sets(["o1", "o2"], ["a", "b"], {"o1": {"a"}, "o2": {"b"}})
        constraints = fca_service.mine_constraints(ctx)

        assert constraints.common == frozenset()
        assert constraints.partition() == {frozenset({"a"}), frozenset({"b"})}
        assert constraints.exclusion_pairs() == {frozenset({frozenset({"a"}), frozenset({"b"})})}

    def test_implications_are_reduced(self, fca_service):
        ctx = FormalContext.from_sets(
            ["o1", "o2", "o3"], ["a", "b", "c"],
            {"o1": {"a", "b", "c"}, "o2": {"b", "c"}, "o3": {"c"}},
        )
        constraints = fca_service.mine_constraints(ctx)
        a, b = constraints.group_of("a"), constraints.group_of("b")

        assert constraints.common == {"c"}
        assert constraints.implications == [(a, b)]
        assert constraints.expand_implications() == {("a", "b")}

    def test_dead_attributes_reported(self, fca_service):
        ctx = FormalContext.from_sets(["o1"], ["a", "dead"], {"o1": {"a"}})
        constraints = fca_service.mine_constraints(ctx)
        assert constraints.dead == {"dead"}
        assert constraints.common == {"a"}

    def test_definitional_agrees_on_hello(self, fca_service, hello_features):
        mined = fca_service.mine_constraints(hello_features)
        oracle = fca_service.definitional_constraints(hello_features)

        assert mined.common == oracle.common
        assert mined.partition() == oracle.partition()
        assert mined.implication_closure() == oracle.implication_closure()
        assert mined.exclusion_pairs() == oracle.exclusion_pairs()

    def test_groups_partition_variable_attributes(self, variability_service, fca_service, hello_repo):
        pcm = variability_service.build_pcm(hello_repo)
        constraints = fca_service.extract_constraints(fca_service.build_aoc_poset(pcm), pcm)
        grouped = [a for members in constraints.groups.values() for a in members]

        assert len(grouped) == len(set(grouped))
        assert set(grouped) | constraints.common == set(pcm.attributes)
        assert not set(grouped) & constraints.common

    def test_feature_context_of_repository(self, variability_service, hello_repo):
        ctx = variability_service.build_feature_context(hello_repo)
        assert ctx.objects == ["Px", "Py", "Pz"]
        assert ctx.attributes == ["Hello", "World", "All", "People"]


class TestContextCsv:
    """CSV persistence of formal contexts"""

    def test_layout(self, fca_service, tmp_path, hello_features):
        path = tmp_path / "ctx.csv"
        fca_service.write_context_csv(hello_features, str(path))

        assert path.read_text(encoding="utf-8").splitlines() == [
            ",Hello,World,All,People",
            "Px,1,1,0,0",
            "Py,1,0,1,0",
            "Pz,1,0,1,1",
        ]

    def test_read_back(self, fca_service, tmp_path, hello_features):
        path = tmp_path / "ctx.csv"
        fca_service.write_context_csv(hello_features, str(path))
        assert fca_service.read_context_csv(str(path)) == hello_features

    def test_bad_cell(self, fca_service, tmp_path):
        path = tmp_path / "ctx.csv"
        path.write_text(",a\no,2\n", encoding="utf-8")
        with pytest.raises(InvalidContext, match="0 or 1"):
            fca_service.read_context_csv(str(path))
