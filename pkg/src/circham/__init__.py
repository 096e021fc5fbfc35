"""circham: decide, certify, and exhaustively verify hamiltonicity of circulant digraphs."""

from .certs import CircuitCert, Classification
from .zmod import CirculantSpec, HalfSpec, canonical_form, half_spec_match, is_connected, validate_spec

__all__ = [
    "CircuitCert",
    "Classification",
    "CirculantSpec",
    "HalfSpec",
    "canonical_form",
    "half_spec_match",
    "is_connected",
    "validate_spec",
]
