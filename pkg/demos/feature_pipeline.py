"""Walk through the landmark feature pipeline step by step.

A hand arrives as 21 (x, y) points in whatever coordinate frame the tracker
used. The pipeline makes the representation camera-independent in three
moves: center on the centroid, shift into the positive quadrant, divide by
the larger bounding-box side. The same hand seen shifted or zoomed then
maps to the same 42-number feature vector.

Run: python3 demos/feature_pipeline.py
"""

import numpy as np

from fingerspell.landmarks import (
    center_relative,
    extract_features,
    flatten,
    normalize_scale,
    translate_nonnegative,
)

rng = np.random.default_rng(7)

# a fake hand: 21 points scattered around (3.0, 2.0), roughly 0.8 wide
hand = rng.uniform(-0.4, 0.4, size=(21, 2)) + np.array([3.0, 2.0])

print("raw hand")
print("  centroid:", hand.mean(axis=0).round(3))
print("  bbox:    ", (hand.max(axis=0) - hand.min(axis=0)).round(3))

step1 = center_relative(hand)
print("\nafter centering, the centroid is the origin:")
print("  centroid:", step1.mean(axis=0).round(12))

step2 = translate_nonnegative(step1)
print("\nafter the min-shift, every coordinate is non-negative:")
print("  per-axis minima:", step2.min(axis=0))

step3 = normalize_scale(step2)
print("\nafter scaling by the larger bbox side, everything lives in [0,1]:")
print("  per-axis minima:", step3.min(axis=0))
print("  global max:     ", step3.max())

features = flatten(step3)
print("\nflattened feature vector:", features.shape, "values in",
      f"[{features.min():.3f}, {features.max():.3f}]")

# the whole point: a translated, rescaled view of the same hand gives the
# same features, so the classifier never sees camera placement
moved = (hand + np.array([-12.0, 40.0])) * 3.7
drift = np.abs(extract_features(moved) - extract_features(hand)).max()
print("\nsame hand, shifted by (-12, 40) and zoomed 3.7x:")
print(f"  max feature difference: {drift:.2e}")
