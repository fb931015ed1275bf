"""S-box construction from lightning-derived entropy, GA optimization,
security metrics and a 16-round SPN image cipher."""

from ._core import (
    Error,
    Image,
    Material,
    SBox,
    bits_from_ldar,
    construct_sboxes,
    decrypt_image,
    derive_material,
    encrypt_image,
    evaluate,
    min_component_nonlinearity,
    nl_histogram,
    nonlinearity,
    optimize,
    parse_ldar,
    reverse_sbox,
    run_battery,
    sensitivity,
    stat_test,
    von_neumann,
)

__all__ = [
    "Error",
    "Image",
    "Material",
    "SBox",
    "bits_from_ldar",
    "construct_sboxes",
    "decrypt_image",
    "derive_material",
    "encrypt_image",
    "evaluate",
    "min_component_nonlinearity",
    "nl_histogram",
    "nonlinearity",
    "optimize",
    "parse_ldar",
    "reverse_sbox",
    "run_battery",
    "sensitivity",
    "stat_test",
    "von_neumann",
]
