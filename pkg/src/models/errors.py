"""Domain exceptions raised by the splforge services"""


class SplError(Exception):
    """Base class for every domain error (CLI exit code 2)"""


class MiniJSyntaxError(SplError):
    """Malformed MiniJ source text"""

    def __init__(self, message: str, line: int = 0, column: int = 0, path: str = None):
        self.line = line
        self.column = column
        self.path = path
        location = f"{path}:" if path else ""
        super().__init__(f"{location}{line}:{column}: {message}")


class InvalidPath(SplError):
    """Source path is absolute, empty or escapes the product root"""


class InternalCollision(SplError):
    """Two different artefacts rendered to the same id"""


class DuplicateProductName(SplError):
    """A product with this name was already integrated"""


class InvalidProduct(SplError):
    """A product has no files or no features"""


class EmptyContext(SplError):
    """Formal context without objects"""


class InvalidContext(SplError):
    """Formal context with duplicate names or a malformed incidence matrix"""


class EmptyRepository(SplError):
    """Operation needs at least one integrated product"""


class UnknownGroup(SplError):
    """Trace table references a group absent from the artefact variability model"""


class UnknownFeature(SplError):
    """Feature name never declared by an integrated product"""


class UnknownArtefactId(SplError):
    """Artefact id absent from every super-ART"""


class OrphanSelection(SplError):
    """Artefact selected without its parent"""


class EmptyProduct(SplError):
    """Original product has no lines of code"""


class CompositionError(SplError):
    """Family fragments collide at an anchor"""


class InvalidFamilySpec(SplError):
    """Family specification is inconsistent"""


class RepositoryNotFound(SplError):
    """Directory does not hold an initialized repository"""


class RepositoryExists(SplError):
    """Directory already holds a repository"""


class RepositoryLocked(SplError):
    """Another writer holds the repository lock"""


class UnknownProduct(SplError):
    """Product name never integrated"""
