"""Catalog-driven trustworthiness assessment engine.

Thin convenience layer over the compiled ``_core`` module: JSON payloads from
the engine are decoded into plain dicts and lists.
"""

import json as _json

from ._core import (  # noqa: F401
    Catalog,
    Document,
    __version__,
    canonical_id,
    compare_ids,
    evaluate_metric,
    scaffold,
)


def _decoding(method_name):
    def call(self, *args, **kwargs):
        return _json.loads(getattr(self, method_name)(*args, **kwargs))
    return call


Catalog.lookup = _decoding("lookup_json")
Catalog.validate = _decoding("validate_json")
Document.lint = _decoding("lint_json")
Document.coverage = _decoding("coverage_json")
Document.evaluate_bindings = _decoding("evaluate_bindings_json")
Document.verdict = _decoding("verdict_json")
Document.to_dict = _decoding("to_json")


def load_catalog(path=None):
    """The shipped catalog, or one loaded from ``path``."""
    return Catalog.embedded() if path is None else Catalog.from_file(path)


def load_document(path):
    return Document.from_file(path)
