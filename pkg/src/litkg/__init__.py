"""litkg: build and explore a literature knowledge graph assembled
from heterogeneous bibliographic sources.
"""

__version__ = "0.1.0"
