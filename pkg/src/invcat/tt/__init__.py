"""Dependent type theory signatures of inverse-category presentations."""
from .alpha import alpha_equal, check_scopes
from .emit import emit_hom_type, emit_path_context, emit_signature
from .parser import parse_expr, parse_signature
from .simplify import annotations, simplify
from .syntax import Signature, show_signature, signature_from_json, signature_to_json
