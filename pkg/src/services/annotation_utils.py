"""
`//#if` region helpers.

Simplification removes annotations repeating an enclosing condition (S1)
and fuses adjacent sibling annotations with equal conditions (S2) until
nothing changes. Evaluation keeps the code lines of the regions whose
conditions a selection satisfies.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Set, Tuple, Union

from src.models.codegen import ENDIF_DIRECTIVE, IF_DIRECTIVE, AnnotatedFile, Annotation


@dataclass
class _Region:
    opening: Optional[str]
    closing: Optional[str]
    children: List[Union[str, '_Region']] = field(default_factory=list)

    @property
    def condition(self) -> Optional[Tuple[str, ...]]:
        if self.opening is None:
            return None
        return Annotation.parse(self.opening.strip()[len(IF_DIRECTIVE):]).labels

    def render(self, out: List[str]) -> None:
        if self.opening is not None:
            out.append(self.opening)
        for child in self.children:
            if isinstance(child, _Region):
                child.render(out)
            else:
                out.append(child)
        if self.closing is not None:
            out.append(self.closing)


def _is_opening(line: str) -> bool:
    return line.strip().startswith(IF_DIRECTIVE)


def _is_closing(line: str) -> bool:
    return line.strip() == ENDIF_DIRECTIVE


def _parse_regions(annotated: AnnotatedFile) -> _Region:
    root = _Region(None, None)
    stack = [root]
    for number, line in enumerate(annotated.lines, start=1):
        if _is_opening(line):
            region = _Region(line, None)
            stack[-1].children.append(region)
            stack.append(region)
        elif _is_closing(line):
            if len(stack) == 1:
                raise ValueError(f"{annotated.path}:{number}: //#endif without //#if")
            stack.pop().closing = line
        else:
            stack[-1].children.append(line)
    if len(stack) != 1:
        raise ValueError(f"{annotated.path}: unclosed //#if")
    return root


def _drop_redundant(region: _Region, active: Set[Tuple[str, ...]]) -> bool:
    """S1: splice out regions whose condition an enclosing region already holds"""
    changed = False
    children: List[Union[str, _Region]] = []
    for child in region.children:
        if not isinstance(child, _Region):
            children.append(child)
            continue
        condition = child.condition
        if condition in active:
            _drop_redundant(child, active)
            children.extend(child.children)
            changed = True
        else:
            changed |= _drop_redundant(child, active | {condition})
            children.append(child)
    region.children = children
    return changed


def _fuse_adjacent(region: _Region) -> bool:
    """S2: merge sibling regions with equal conditions and nothing printed between them"""
    changed = False
    children: List[Union[str, _Region]] = []
    for child in region.children:
        previous = children[-1] if children else None
        if (isinstance(child, _Region) and isinstance(previous, _Region)
                and previous.condition == child.condition):
            previous.children.extend(child.children)
            previous.closing = child.closing
            changed = True
        else:
            children.append(child)
    region.children = children
    for child in children:
        if isinstance(child, _Region):
            changed |= _fuse_adjacent(child)
    return changed


def simplify_file(annotated: AnnotatedFile) -> AnnotatedFile:
    """
    Apply S1 and S2 to a fixed point.

    The annotation count never grows and every configuration yields the same
    code lines before and after.

    Raises:
        ValueError: unbalanced directives
    """
    root = _parse_regions(annotated)
    while _drop_redundant(root, set()) | _fuse_adjacent(root):
        pass
    lines: List[str] = []
    root.render(lines)
    return AnnotatedFile(annotated.path, lines)


def evaluate(annotated: AnnotatedFile, selection) -> List[str]:
    """Code lines kept for a selection: a region survives when all its labels are selected"""
    selected = set(selection)
    kept: List[str] = []
    holds = [True]
    for line in annotated.lines:
        if _is_opening(line):
            condition = Annotation.parse(line.strip()[len(IF_DIRECTIVE):])
            holds.append(holds[-1] and condition.holds_for(selected))
        elif _is_closing(line):
            if len(holds) == 1:
                raise ValueError(f"{annotated.path}: //#endif without //#if")
            holds.pop()
        elif holds[-1]:
            kept.append(line)
    return kept


def strip_annotations(annotated: AnnotatedFile) -> str:
    return "".join(line + "\n" for line in annotated.code_lines())
