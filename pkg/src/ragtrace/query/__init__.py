"""Query optimization: expansion, decomposition, disambiguation, abstraction."""

from ragtrace.query.rewrite import KINDS, MAX_VARIANTS, QueryBundle, QueryVariant, rewrite

__all__ = ["KINDS", "MAX_VARIANTS", "QueryBundle", "QueryVariant", "rewrite"]
