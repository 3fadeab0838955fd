"""FAST and FAST-ER corner detection."""

from ._core import (
    DataError,
    IoError,
    NotACornerError,
    PreconditionError,
    Tree,
    anneal_temperature,
    corner_score,
    detect,
    detect_keypoints,
    faster_cost,
    harris_response,
    pair_repeatability,
    read_pgm,
    run_detector,
    segment_test,
    shi_tomasi_response,
    synthetic_scene,
    test_square,
    write_pgm,
)

__all__ = [
    "DataError",
    "IoError",
    "NotACornerError",
    "PreconditionError",
    "Tree",
    "anneal_temperature",
    "corner_score",
    "detect",
    "detect_keypoints",
    "faster_cost",
    "harris_response",
    "pair_repeatability",
    "read_pgm",
    "run_detector",
    "segment_test",
    "shi_tomasi_response",
    "synthetic_scene",
    "test_square",
    "write_pgm",
]
