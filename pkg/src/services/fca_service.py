"""
Formal Concept Analysis.

Builds the attribute-object-concept poset of a binary context and mines
co-occurrence groups, implications and mutual exclusions from it. Object
and attribute sets are handled as integer bitmasks.
"""
from typing import Dict, FrozenSet, List, Sequence, Tuple

import networkx as nx
import pandas as pd

from src.models.errors import EmptyContext, InvalidContext
from src.models.fca import AocPoset, Concept, ConstraintSet, FormalContext
from src.utils.logger import LoggerMixin

GROUP_PREFIX = "grp-"


class _BitContext:
    """Bitmask view of a formal context"""

    def __init__(self, ctx: FormalContext):
        self.ctx = ctx
        self.all_objects = (1 << len(ctx.objects)) - 1
        self.all_attributes = (1 << len(ctx.attributes)) - 1
        self.object_intents = [
            sum(1 << a for a, has in enumerate(row) if has) for row in ctx.incidence
        ]
        self.attribute_extents = [0] * len(ctx.attributes)
        for o, row in enumerate(ctx.incidence):
            for a, has in enumerate(row):
                if has:
                    self.attribute_extents[a] |= 1 << o

    def intent(self, extent: int) -> int:
        result = self.all_attributes
        for o, mask in enumerate(self.object_intents):
            if extent >> o & 1:
                result &= mask
        return result

    def extent(self, intent: int) -> int:
        result = self.all_objects
        for a, mask in enumerate(self.attribute_extents):
            if intent >> a & 1:
                result &= mask
        return result

    def object_names(self, mask: int) -> FrozenSet[str]:
        return frozenset(o for i, o in enumerate(self.ctx.objects) if mask >> i & 1)

    def attribute_names(self, mask: int) -> FrozenSet[str]:
        return frozenset(a for i, a in enumerate(self.ctx.attributes) if mask >> i & 1)


def _bits(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _concept_sort_key(extent: int, intent_names: FrozenSet[str]) -> Tuple:
    """Smaller extents first, then extents holding later objects, then intent"""
    recency = tuple(-i for i in sorted(_bits(extent), reverse=True))
    return (bin(extent).count("1"), recency, tuple(sorted(intent_names)))


def _reduced_pairs(nodes: Sequence[str], pairs: Sequence[Tuple[str, str]]) -> List[Tuple[str, str]]:
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from(pairs)
    return sorted(nx.transitive_reduction(graph).edges())


class FcaService(LoggerMixin):
    """AOC-poset construction and constraint mining over formal contexts"""

    def build_aoc_poset(self, ctx: FormalContext) -> AocPoset:
        """
        Build the AOC-poset of a context.

        Args:
            ctx: formal context (at least one object)

        Returns:
            AocPoset holding every concept that introduces an object or an
            attribute, numbered by extent size, then recency of its objects,
            then intent; `order` is the transitive reduction of extent inclusion.

        Raises:
            EmptyContext: context without objects
        """
        if not ctx.objects:
            raise EmptyContext("Formal context has no objects")
        bits = _BitContext(ctx)

        # Introducer concepts, keyed by extent
        introducers: Dict[int, Dict[str, set]] = {}
        for a, extent in enumerate(bits.attribute_extents):
            if extent:
                introducers.setdefault(extent, {"objects": set(), "attributes": set()})["attributes"].add(a)
        for o, intent in enumerate(bits.object_intents):
            extent = bits.extent(intent)
            introducers.setdefault(extent, {"objects": set(), "attributes": set()})["objects"].add(o)

        # Number them
        ordered = sorted(
            introducers,
            key=lambda e: _concept_sort_key(e, bits.attribute_names(bits.intent(e))),
        )
        concepts = []
        for index, extent in enumerate(ordered):
            intro = introducers[extent]
            concepts.append(Concept(
                index=index,
                extent=bits.object_names(extent),
                intent=bits.attribute_names(bits.intent(extent)),
                introduced_objects=frozenset(ctx.objects[o] for o in intro["objects"]),
                introduced_attributes=frozenset(ctx.attributes[a] for a in intro["attributes"]),
            ))

        # Hasse diagram of extent inclusion
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(ordered)))
        for p, parent in enumerate(ordered):
            for c, child in enumerate(ordered):
                if p != c and child & parent == child:
                    graph.add_edge(p, c)
        order = sorted(nx.transitive_reduction(graph).edges())
        self.logger.debug(f"AOC-poset: {len(concepts)} concepts, {len(order)} edges")
        return AocPoset(concepts=concepts, order=order)

    def extract_constraints(self, poset: AocPoset, ctx: FormalContext) -> ConstraintSet:
        """
        Mine variability and constraints from an AOC-poset.

        The common attributes are the intent of the concept whose extent holds
        every object. Every other concept introducing attributes yields a group
        `grp-<concept index>`. Group A implies group B when B's introducer
        extent strictly contains A's (transitively reduced); groups with
        disjoint extents exclude each other.
        """
        everyone = frozenset(ctx.objects)
        common = frozenset()
        common_name = None
        groups: Dict[str, FrozenSet[str]] = {}
        extents: Dict[str, FrozenSet[str]] = {}
        for concept in poset.concepts:
            name = f"{GROUP_PREFIX}{concept.index}"
            if concept.extent == everyone:
                common = concept.intent
                common_name = name
            elif concept.introduced_attributes:
                groups[name] = concept.introduced_attributes
                extents[name] = concept.extent

        names = list(groups)
        implications = [(a, b) for a in names for b in names if a != b and extents[a] < extents[b]]
        exclusions = [
            (a, b) for i, a in enumerate(names) for b in names[i + 1:]
            if not extents[a] & extents[b]
        ]
        dead = frozenset(a for a in ctx.attributes if not ctx.attribute_objects(a))
        return ConstraintSet(
            common=common,
            common_name=common_name,
            groups=groups,
            implications=_reduced_pairs(names, implications),
            mutual_exclusions=sorted(tuple(sorted(pair)) for pair in exclusions),
            dead=dead,
        )

    def mine_constraints(self, ctx: FormalContext) -> ConstraintSet:
        return self.extract_constraints(self.build_aoc_poset(ctx), ctx)

    def definitional_constraints(self, ctx: FormalContext) -> ConstraintSet:
        """
        Constraints computed straight from the incidence matrix.

        a implies b iff every object holding a holds b; a and b exclude each other
        iff no object holds both; they co-occur iff their object sets are equal.
        Implications are returned closed, not reduced.
        """
        if not ctx.objects:
            raise EmptyContext("Formal context has no objects")
        everyone = frozenset(ctx.objects)
        by_extent: Dict[FrozenSet[str], set] = {}
        common, dead = set(), set()
        for attribute in ctx.attributes:
            extent = ctx.attribute_objects(attribute)
            if not extent:
                dead.add(attribute)
            elif extent == everyone:
                common.add(attribute)
            else:
                by_extent.setdefault(extent, set()).add(attribute)

        order = {o: i for i, o in enumerate(ctx.objects)}
        ordered = sorted(
            by_extent,
            key=lambda e: (len(e), tuple(sorted((-order[o] for o in e))), tuple(sorted(by_extent[e]))),
        )
        groups = {f"{GROUP_PREFIX}{i}": frozenset(by_extent[e]) for i, e in enumerate(ordered)}
        extents = {f"{GROUP_PREFIX}{i}": e for i, e in enumerate(ordered)}
        names = list(groups)
        return ConstraintSet(
            common=frozenset(common),
            groups=groups,
            implications=[(a, b) for a in names for b in names if a != b and extents[a] < extents[b]],
            mutual_exclusions=sorted(
                (a, b) for i, a in enumerate(names) for b in names[i + 1:] if not extents[a] & extents[b]
            ),
            dead=frozenset(dead),
        )

    @staticmethod
    def context_to_frame(ctx: FormalContext) -> pd.DataFrame:
        return pd.DataFrame(
            [[int(has) for has in row] for row in ctx.incidence],
            index=pd.Index(ctx.objects, name=""),
            columns=ctx.attributes,
        )

    @staticmethod
    def context_from_frame(frame: pd.DataFrame) -> FormalContext:
        """Build a context from a 0/1 frame indexed by object name"""
        incidence = []
        for _, row in frame.iterrows():
            cells = []
            for value in row.tolist():
                text = str(value).strip()
                if text not in ("0", "1"):
                    raise InvalidContext(f"Formal context cells must be 0 or 1, found {value!r}")
                cells.append(text == "1")
            incidence.append(cells)
        return FormalContext(
            objects=[str(o) for o in frame.index],
            attributes=[str(a) for a in frame.columns],
            incidence=incidence,
        )

    def write_context_csv(self, ctx: FormalContext, path: str) -> None:
        """CSV: first row attribute names, first column object names, cells 1/0"""
        self.context_to_frame(ctx).to_csv(path, lineterminator="\n")

    def read_context_csv(self, path: str) -> FormalContext:
        frame = pd.read_csv(path, index_col=0, dtype=str, keep_default_na=False)
        return self.context_from_frame(frame)
