"""Deterministic single-pixel-imaging simulation with hidden-secret schemes.

Everything re-exports from the compiled extension. Rasters are numpy
arrays: images as float64 ``(height, width)``, bit masks as uint8
``(height, width)`` with 1 = light/foreground.
"""

from spivc._spivc import (  # noqa: F401
    DecodeError,
    MeasurementSeries,
    ModificationBudget,
    PatternSequence,
    PatternSharePair,
    QrSymbol,
    SharePair,
    add_noise,
    counter_hash,
    dot_accuracy,
    encode_pattern_shares,
    encode_shares,
    extract_secret_from_overlay,
    f1_score,
    gaussian,
    generate_patterns,
    measure,
    measure_combined,
    modification_budget,
    ok_glyph,
    overlay,
    psnr,
    qr_decode,
    qr_decode_gray,
    qr_encode,
    read_pbm,
    read_pgm,
    reconstruct,
    reconstruct_logged,
    rescale_overlay,
    reveal_secret_from_patterns,
    reveal_secret_from_reconstruction,
    scene,
    write_pbm,
    write_pgm,
)

__all__ = [
    "DecodeError",
    "MeasurementSeries",
    "ModificationBudget",
    "PatternSequence",
    "PatternSharePair",
    "QrSymbol",
    "SharePair",
    "add_noise",
    "counter_hash",
    "dot_accuracy",
    "encode_pattern_shares",
    "encode_shares",
    "extract_secret_from_overlay",
    "f1_score",
    "gaussian",
    "generate_patterns",
    "measure",
    "measure_combined",
    "modification_budget",
    "ok_glyph",
    "overlay",
    "psnr",
    "qr_decode",
    "qr_decode_gray",
    "qr_encode",
    "read_pbm",
    "read_pgm",
    "reconstruct",
    "reconstruct_logged",
    "rescale_overlay",
    "reveal_secret_from_patterns",
    "reveal_secret_from_reconstruction",
    "scene",
    "write_pbm",
    "write_pgm",
]

__version__ = "1.0.0"
