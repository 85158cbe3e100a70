"""GXPath-style query language: AST, parser, evaluator, analysis, transforms."""

from .analysis import (
    Fragment,
    certificate_bound,
    fragment_of,
    is_positive,
    mentioned_data_values,
    mentioned_labels,
    stars_are_atomic,
    subexpressions,
    uses_path_equality,
    uses_path_inequality,
    uses_star,
)
from .ast import (
    And,
    Complement,
    Concat,
    DataEq,
    DataNeq,
    Epsilon,
    Exists,
    Expr,
    InverseLabel,
    Intersect,
    Label,
    NodeExpr,
    Not,
    Or,
    PathEq,
    PathExpr,
    PathNeq,
    Repeat,
    Star,
    Test,
    Union,
    Wildcard,
    and_of,
    concat_of,
    or_of,
    to_text,
    union_of,
)
from .evaluator import (
    eval_node,
    eval_path,
    satisfies_at,
    satisfies_global,
    satisfies_pair,
    satisfies_somewhere,
)
from .parser import parse_node, parse_path, parse_query
from .transforms import (
    eliminate_star,
    expand_wildcards,
    path_to_bipointed,
    path_to_global,
    to_global,
    to_origin,
)

__all__ = [name for name in dir() if not name.startswith("_")]
