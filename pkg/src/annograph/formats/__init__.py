"""Format codecs: bracketed trees, AIF XML, delimited tables, LCF transcripts,
connect strings, and the tree <-> graph encoding.

All codecs are pure: text in, objects out, and the other way round.  Errors
carry positions (byte offset, line, row or element) so callers can point at
the offending input.
"""

from .aif import (
    DuplicateIdError,
    MalformedXmlError,
    SchemaViolationError,
    emit_aif,
    parse_aif,
)
from .connect import ConnectParams, MissingEqualsError, format_connect_string, parse_connect_string
from .lcf import BadLineError, emit_lcf, parse_lcf
from .table import (
    BadTimeError,
    Column,
    ColumnCountMismatchError,
    TableConfig,
    emit_table,
    emit_table_config,
    parse_table,
    parse_table_config,
)
from .treebank import (
    BadTokenError,
    EmptyNodeError,
    UnbalancedParensError,
    emit_treebank,
    parse_treebank,
)
from .treegraph import NotATreeEncodingError, graph_to_tree, tree_to_graph

__all__ = [
    "BadLineError",
    "BadTimeError",
    "BadTokenError",
    "Column",
    "ColumnCountMismatchError",
    "ConnectParams",
    "DuplicateIdError",
    "EmptyNodeError",
    "MalformedXmlError",
    "MissingEqualsError",
    "NotATreeEncodingError",
    "SchemaViolationError",
    "TableConfig",
    "UnbalancedParensError",
    "emit_aif",
    "emit_lcf",
    "emit_table",
    "emit_table_config",
    "emit_treebank",
    "format_connect_string",
    "graph_to_tree",
    "parse_aif",
    "parse_connect_string",
    "parse_lcf",
    "parse_table",
    "parse_table_config",
    "parse_treebank",
    "tree_to_graph",
]
