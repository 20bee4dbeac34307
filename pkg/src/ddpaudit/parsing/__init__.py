from .manifest import ManifestEntry, ParserManifest, default_manifest, load_manifest
from .detect import detect_platform
from .html_tables import parse_html_tables
from .parse import ParseIssue, ParseResult, materialize_tree, parse_ddp, parse_timestamp

__all__ = [
    "ManifestEntry",
    "ParserManifest",
    "ParseIssue",
    "ParseResult",
    "default_manifest",
    "detect_platform",
    "load_manifest",
    "materialize_tree",
    "parse_ddp",
    "parse_html_tables",
    "parse_timestamp",
]
