# Data models package
from .enums import NodeKind, ModelLevel, AnnotationMode, STATEMENT_KINDS
from .ast import SourceFile, AstNode
from .artefact import ArtefactId, Artefact, ArtefactTree
from .variability import VariabilityNode, VariabilityModel, FeatureTraceTable
from .spl import SplRepository, ProductRecord
from .fca import FormalContext, Concept, AocPoset, ConstraintSet
from .codegen import Annotation, AnnotatedFile, AnnotatedSpl, GenerationWarning, GeneratedProduct
from .validation import DiffReport, RoundTripResult
from .corpus import FamilySpec, FileTemplate, Fragment, ProductSpec, NamedProduct
from .result import Result, Ok, Err
