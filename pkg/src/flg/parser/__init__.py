"""Front end: tokenizer, parser, desugarer, printer."""
from .desugar import desugar
from .lexer import SyntaxErr, tokenize
from .parser import parse_expression, parse_program, parse_type_text
from .printer import show_clause, show_expr, show_type

__all__ = [
    "SyntaxErr", "desugar", "parse_expression", "parse_program", "parse_type_text",
    "show_clause", "show_expr", "show_type", "tokenize",
]
