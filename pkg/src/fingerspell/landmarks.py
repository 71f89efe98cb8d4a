"""Landmark -> feature-vector pipeline.

A hand frame is 21 tracker landmarks, each an (x, y) pair in whatever units
the tracker emits (image-normalized or pixels; the pipeline is invariant to
both). Features are produced in three steps:

    1. re-center on the landmark centroid, then shift so every coordinate
       is non-negative,
    2. divide by the larger bounding-box extent so everything lands in [0, 1],
    3. flatten to a 1D vector, interleaved (x0, y0, x1, y1, ...).

Steps are exposed individually so they can be tested on tiny point sets; only
`extract_features` insists on a full 21-point frame. All arithmetic is float64.
"""

import numpy as np

from .errors import DegenerateHand, EmptyInput

NUM_LANDMARKS = 21
NUM_FEATURES = 2 * NUM_LANDMARKS


def as_points(points) -> np.ndarray:
    """Coerce a sequence of (x, y) pairs to a float64 array of shape (N, 2)."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return pts.reshape(0, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected (N, 2) points, got shape {pts.shape}")
    return pts


def as_frame(frame) -> np.ndarray:
    """Validate a full landmark frame: exactly 21 points, all finite."""
    pts = as_points(frame)
    if pts.shape[0] != NUM_LANDMARKS:
        raise ValueError(f"expected {NUM_LANDMARKS} landmarks, got {pts.shape[0]}")
    if not np.isfinite(pts).all():
        raise ValueError("landmark coordinates must be finite")
    return pts


def center_relative(points) -> np.ndarray:
    """Subtract the centroid so the points are centered on (0, 0)."""
    pts = as_points(points)
    if pts.shape[0] == 0:
        raise EmptyInput("cannot center zero points")
    return pts - pts.mean(axis=0)


def translate_nonnegative(points) -> np.ndarray:
    """Shift by the per-axis minimum so every coordinate is >= 0."""
    pts = as_points(points)
    if pts.shape[0] == 0:
        raise EmptyInput("cannot translate zero points")
    return pts - pts.min(axis=0)


def normalize_scale(points) -> np.ndarray:
    """Divide by the larger bounding-box extent.

    Expects shifted input (per-axis minimum 0). The longer bbox axis maps
    onto [0, 1] exactly. Raises DegenerateHand when the bbox has zero extent
    on both axes (all points coincide): such a frame is unusable and callers
    must skip it.
    """
    pts = as_points(points)
    extents = pts.max(axis=0) - pts.min(axis=0)
    scale = extents.max()
    if scale == 0.0:
        raise DegenerateHand("all landmarks coincide (zero-extent bounding box)")
    return pts / scale


def flatten(points) -> np.ndarray:
    """Flatten (N, 2) points to a 1D array [x0, y0, x1, y1, ...] of length 2N."""
    return as_points(points).ravel()


def extract_features(frame) -> np.ndarray:
    """Run the full pipeline on a 21-point frame; returns a (42,) vector.

    Output values are in [0, 1]; each axis has minimum exactly 0 and the
    global maximum is exactly 1. The result is invariant under translation
    and positive scaling of the input frame.
    """
    pts = as_frame(frame)
    return flatten(normalize_scale(translate_nonnegative(center_relative(pts))))
