"""Annotated code data models"""
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

IF_DIRECTIVE = "//#if "
ENDIF_DIRECTIVE = "//#endif"
CONJUNCTION = " && "


@dataclass(frozen=True)
class Annotation:
    """Condition of a `//#if` region: a conjunction of labels"""
    labels: Tuple[str, ...]

    @classmethod
    def parse(cls, condition: str) -> 'Annotation':
        return cls(tuple(part.strip() for part in condition.split("&&") if part.strip()))

    @property
    def condition(self) -> str:
        return CONJUNCTION.join(self.labels)

    def opening(self, indent: str = "") -> str:
        return f"{indent}{IF_DIRECTIVE}{self.condition}"

    def closing(self, indent: str = "") -> str:
        return f"{indent}{ENDIF_DIRECTIVE}"

    def holds_for(self, selection) -> bool:
        """Kept only when every conjunct is selected"""
        return all(label in selection for label in self.labels)


def is_directive(line: str) -> bool:
    stripped = line.strip()
    return stripped.startswith(IF_DIRECTIVE) or stripped == ENDIF_DIRECTIVE


@dataclass
class AnnotatedFile:
    """Source lines interleaved with directive lines"""
    path: str
    lines: List[str] = field(default_factory=list)

    @property
    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)

    def annotation_count(self) -> int:
        return sum(1 for line in self.lines if line.strip().startswith(IF_DIRECTIVE))

    def code_lines(self) -> List[str]:
        return [line for line in self.lines if not is_directive(line)]


@dataclass(frozen=True)
class GenerationWarning:
    """Recoverable condition reported to the user as `WARN: <code>: <message>`"""
    code: str
    message: str

    def render(self) -> str:
        return f"WARN: {self.code}: {self.message}"


@dataclass
class GeneratedProduct:
    """Product files (path -> text) and the warnings raised while generating them"""
    files: Dict[str, str] = field(default_factory=dict)
    warnings: List[GenerationWarning] = field(default_factory=list)


@dataclass
class AnnotatedSpl:
    """Annotated SPL implementation: one file per super-ART path"""
    files: List[AnnotatedFile] = field(default_factory=list)
    warnings: List[GenerationWarning] = field(default_factory=list)

    def file(self, path: str) -> AnnotatedFile:
        for annotated in self.files:
            if annotated.path == path:
                return annotated
        raise KeyError(path)

    def line_count(self) -> int:
        return sum(len(f.lines) for f in self.files)
