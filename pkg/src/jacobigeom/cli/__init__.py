"""Command-line front end: structure documents, checkers and reports."""
from .main import main, parse_document, run_text
from .syntax import Document, parse, parse_expr, show, show_document

__all__ = ["Document", "main", "parse", "parse_document", "parse_expr", "run_text", "show", "show_document"]
