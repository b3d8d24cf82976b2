"""Artefact and feature variability models, trace tables and DOT export"""
import dataclasses
from typing import List, Tuple

import networkx as nx

from src.models.enums import ModelLevel
from src.models.errors import EmptyRepository, UnknownFeature, UnknownGroup
from src.models.fca import ConstraintSet, FormalContext
from src.models.spl import SplRepository
from src.models.variability import FeatureTraceTable, VariabilityModel, VariabilityNode
from src.services.fca_service import FcaService
from src.utils.logger import LoggerMixin


def model_from_constraints(level: ModelLevel, constraints: ConstraintSet) -> VariabilityModel:
    """
    Re-express a constraint set as a graph.

    Besides the group implications, every group implying no other group gets
    an edge to the common node.
    """
    nodes = [VariabilityNode(name, members) for name, members in constraints.groups.items()]
    implications: List[Tuple[str, str]] = list(constraints.implications)
    if constraints.common and constraints.common_name:
        nodes.append(VariabilityNode(constraints.common_name, constraints.common, common=True))
        sources = {source for source, _ in constraints.implications}
        implications.extend(
            (name, constraints.common_name) for name in constraints.groups if name not in sources
        )
    return VariabilityModel(
        level=level,
        nodes=nodes,
        implications=sorted(implications),
        exclusions=list(constraints.mutual_exclusions),
    )


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _node_label(model: VariabilityModel, node: VariabilityNode) -> str:
    if model.level == ModelLevel.FEATURE:
        body = ", ".join(sorted(node.attributes))
    else:
        count = len(node.attributes)
        body = f"{count} artefact" + ("" if count == 1 else "s")
    suffix = " (common)" if node.common else ""
    # quoted here; pydot passes quoted ids through untouched
    return _quote(f"{node.name}{suffix}")[:-1] + "\\n" + _quote(body)[1:]


def _group_number(name: str) -> int:
    tail = name.rsplit("-", 1)[-1]
    return int(tail) if tail.isdigit() else -1


class VariabilityService(LoggerMixin):
    """Variability models of a repository, feature traces and model export"""

    def __init__(self, fca: FcaService = None):
        self.fca = fca or FcaService()

    @staticmethod
    def _require_products(repo: SplRepository) -> None:
        if not repo.products:
            raise EmptyRepository(f"Repository {repo.name} has no integrated product")

    def build_pcm(self, repo: SplRepository) -> FormalContext:
        """Product configuration matrix: products x artefact ids"""
        self._require_products(repo)
        rows = {p.name: set(p.artefact_configuration) for p in repo.products}
        return FormalContext.from_sets(repo.product_names(), repo.artefact_ids(), rows)

    def build_feature_context(self, repo: SplRepository) -> FormalContext:
        """Products x declared features"""
        self._require_products(repo)
        rows = {p.name: set(p.features) for p in repo.products}
        return FormalContext.from_sets(repo.product_names(), repo.features(), rows)

    def artefact_constraints(self, repo: SplRepository) -> ConstraintSet:
        return self.fca.mine_constraints(self.build_pcm(repo))

    def feature_constraints(self, repo: SplRepository) -> ConstraintSet:
        return self.fca.mine_constraints(self.build_feature_context(repo))

    def build_avm(self, repo: SplRepository) -> VariabilityModel:
        """
        Artefact Variability Model of the repository.

        Raises:
            EmptyRepository: no product integrated yet
        """
        model = model_from_constraints(ModelLevel.ARTEFACT, self.artefact_constraints(repo))
        self.logger.info(f"AVM of {repo.name}: {len(model.nodes)} groups at iteration {repo.iteration}")
        return model

    def build_fvm(self, repo: SplRepository) -> VariabilityModel:
        """
        Feature Variability Model of the repository.

        Raises:
            EmptyRepository: no product integrated yet
        """
        model = model_from_constraints(ModelLevel.FEATURE, self.feature_constraints(repo))
        self.logger.info(f"FVM of {repo.name}: {len(model.nodes)} groups")
        return model

    def apply_traces(self, repo: SplRepository, table: FeatureTraceTable) -> SplRepository:
        """
        Store a feature trace table, stamped with the current iteration.

        Args:
            repo: repository with at least one product
            table: group name -> feature conjunction

        Returns:
            Copy of `repo` holding the table

        Raises:
            UnknownGroup: group absent from the current AVM
            UnknownFeature: feature never declared, or an empty expression
        """
        avm = self.build_avm(repo)
        groups = {node.name for node in avm.nodes}
        features = set(repo.features())
        for group, expression in table.entries.items():
            if group not in groups:
                raise UnknownGroup(f"Group {group} is not in the artefact variability model")
            if not expression or not all(expression):
                raise UnknownFeature(f"Group {group} is traced to an empty feature expression")
            for feature in expression:
                if feature not in features:
                    raise UnknownFeature(f"Feature {feature} is not declared by any product")

        stamped = FeatureTraceTable(entries=dict(table.entries), iteration=repo.iteration)
        untraced = [n.name for n in avm.variable_nodes() if n.name not in table.entries]
        if untraced:
            self.logger.warning(f"Untraced groups keep their group label: {', '.join(untraced)}")
        self.logger.info(f"Applied {len(table.entries)} trace entries at iteration {repo.iteration}")
        return dataclasses.replace(repo, traces=stamped)

    @staticmethod
    def traces_are_current(repo: SplRepository) -> bool:
        return repo.traces.iteration == repo.iteration

    @staticmethod
    def to_graph(model: VariabilityModel) -> nx.DiGraph:
        """
        Variability model as a networkx graph carrying Graphviz attributes.

        Nodes are groups (the common group doubly framed and filled), solid edges
        implications, dashed undirected edges mutual exclusions.
        """
        graph = nx.DiGraph(name="AVM" if model.level == ModelLevel.ARTEFACT else "FVM")
        graph.graph["graph"] = {"rankdir": "BT"}
        graph.graph["node"] = {"shape": "box"}
        for node in sorted(model.nodes, key=lambda n: (n.common, _group_number(n.name), n.name)):
            attrs = {"label": _node_label(model, node)}
            if node.common:
                attrs.update(style="filled", fillcolor="lightgrey", peripheries=2)
            graph.add_node(node.name, **attrs)
        graph.add_edges_from(sorted(model.implications))
        graph.add_edges_from(sorted(model.exclusions), style="dashed", dir="none", constraint="false")
        return graph

    def export_dot(self, model: VariabilityModel) -> str:
        """DOT digraph of a variability model, written through pydot"""
        return nx.nx_pydot.to_pydot(self.to_graph(model)).to_string()
