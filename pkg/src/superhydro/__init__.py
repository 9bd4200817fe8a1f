"""Exact symbolic toolkit for a supersymmetric hydrodynamic system."""
from .grassmann import Expr, GrassmannError
from .cli.parser import parse, ParseError

__all__ = ["Expr", "GrassmannError", "parse", "ParseError"]
