"""Enums for the product line tooling"""
from enum import Enum


class NodeKind(Enum):
    """MiniJ syntax node kinds"""
    COMPILATION_UNIT = "CompilationUnit"
    IMPORT = "Import"
    CLASS_DECL = "ClassDecl"
    FIELD_DECL = "FieldDecl"
    METHOD_DECL = "MethodDecl"
    PARAM = "Param"
    BLOCK = "Block"
    IF_STMT = "IfStmt"
    WHILE_STMT = "WhileStmt"
    FOR_STMT = "ForStmt"
    EXPR_STMT = "ExprStmt"
    RETURN_STMT = "ReturnStmt"

    @property
    def is_statement(self) -> bool:
        return self in STATEMENT_KINDS


STATEMENT_KINDS = frozenset({
    NodeKind.IF_STMT,
    NodeKind.WHILE_STMT,
    NodeKind.FOR_STMT,
    NodeKind.EXPR_STMT,
    NodeKind.RETURN_STMT,
})


class ModelLevel(Enum):
    """Level of a variability model"""
    ARTEFACT = "artefact"
    FEATURE = "feature"


class AnnotationMode(Enum):
    """Labelling used when pretty-printing the annotated SPL"""
    FEATURES = "features"
    GROUPS = "groups"      # grp-<n> labels
    IDS = "ids"            # rendered artefact ids, used by the round-trip protocol
