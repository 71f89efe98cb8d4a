"""Labeled landmark datasets: CSV persistence, stratified splitting,
synthetic generation, and jitter augmentation.

Rows persist RAW landmark coordinates, not extracted features, so the feature
pipeline can evolve without invalidating stored data. The CSV layout is:

    label,x0,y0,x1,y1,...,x20,y20        (43 columns, UTF-8, Unix newlines)

with a single uppercase letter A-Z per row and floats serialized with full
round-trip precision.
"""

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .errors import (
    EmptyInput,
    InsufficientClassSamples,
    ParseError,
    PrototypeSeparationFailure,
)
from .fileio import atomic_write_text
from .landmarks import NUM_LANDMARKS, extract_features

LABELS = tuple("ABCDEFGHIJKLMNOPQRSTUVWXYZ")
NUM_CLASSES = len(LABELS)

CSV_HEADER = "label," + ",".join(f"x{i},y{i}" for i in range(NUM_LANDMARKS))

# Minimum pairwise feature-space distance between synthetic class prototypes.
# Far above the jitter scale, so the generated task is always learnable.
PROTOTYPE_SEPARATION = 0.5
PROTOTYPE_ATTEMPTS = 1000


def label_index(letter: str) -> int:
    """Map 'A'..'Z' to 0..25."""
    if len(letter) != 1 or not "A" <= letter <= "Z":
        raise ValueError(f"not a gesture label: {letter!r}")
    return ord(letter) - ord("A")


def label_letter(index: int) -> str:
    """Map 0..25 to 'A'..'Z'."""
    if not 0 <= index < NUM_CLASSES:
        raise ValueError(f"label index out of range: {index}")
    return LABELS[index]


class LabeledFrame(NamedTuple):
    letter: str
    frame: np.ndarray  # (21, 2)


@dataclass
class Dataset:
    """A stack of labeled frames: frames (n, 21, 2) float64, labels (n,) int."""

    frames: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64).reshape(
            -1, NUM_LANDMARKS, 2
        )
        self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if len(self.frames) != len(self.labels):
            raise ValueError(
                f"{len(self.frames)} frames but {len(self.labels)} labels"
            )
        if len(self.labels) and (
            self.labels.min() < 0 or self.labels.max() >= NUM_CLASSES
        ):
            raise ValueError("labels must be in 0..25")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def class_counts(self) -> dict:
        """Per-class sample counts, keyed by letter; present classes only."""
        idx, counts = np.unique(self.labels, return_counts=True)
        return {LABELS[i]: int(c) for i, c in zip(idx, counts)}

    def samples(self) -> Iterator[LabeledFrame]:
        for lab, frame in zip(self.labels, self.frames):
            yield LabeledFrame(LABELS[lab], frame)

    def subset(self, indices) -> "Dataset":
        return Dataset(self.frames[indices], self.labels[indices])

    @staticmethod
    def empty() -> "Dataset":
        return Dataset(np.empty((0, NUM_LANDMARKS, 2)), np.empty(0, dtype=np.int64))


def load_csv(path: str) -> Dataset:
    """Parse a dataset CSV. Raises ParseError (with line number) on any
    malformed row; row order is preserved."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != CSV_HEADER:
        raise ParseError(f"expected header {CSV_HEADER[:24]}...", line=1)

    frames, labels = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != 1 + 2 * NUM_LANDMARKS:
            raise ParseError(
                f"expected {1 + 2 * NUM_LANDMARKS} columns, got {len(fields)}",
                line=lineno,
            )
        letter = fields[0]
        if len(letter) != 1 or not "A" <= letter <= "Z":
            raise ParseError(f"bad label {letter!r}", line=lineno)
        try:
            coords = [float(v) for v in fields[1:]]
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        if not all(math.isfinite(v) for v in coords):
            raise ParseError("non-finite coordinate", line=lineno)
        labels.append(label_index(letter))
        frames.append(np.array(coords, dtype=np.float64).reshape(NUM_LANDMARKS, 2))

    if not frames:
        return Dataset.empty()
    return Dataset(np.stack(frames), np.array(labels, dtype=np.int64))


def save_csv(dataset: Dataset, path: str) -> None:
    """Write the CSV format; load_csv(save_csv(d)) reproduces d exactly
    (floats are serialized with shortest round-trip repr)."""
    out = [CSV_HEADER]
    for lab, frame in zip(dataset.labels, dataset.frames):
        coords = ",".join(repr(float(v)) for v in frame.ravel())
        out.append(f"{LABELS[lab]},{coords}")
    atomic_write_text(path, "\n".join(out) + "\n")


def stratified_split(dataset: Dataset, train_fraction: float, seed: int):
    """Split per class: floor(count * fraction) samples to train, rest to
    test, after a seeded per-class shuffle. Deterministic for a given seed."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if len(dataset) == 0:
        raise EmptyInput("cannot split an empty dataset")

    rng = np.random.default_rng(seed)
    train_parts, test_parts = [], []
    for c in range(NUM_CLASSES):
        idx = np.flatnonzero(dataset.labels == c)
        if idx.size == 0:
            continue
        if idx.size < 2:
            raise InsufficientClassSamples(LABELS[c], int(idx.size))
        perm = rng.permutation(idx)
        k = math.floor(idx.size * train_fraction)
        train_parts.append(perm[:k])
        test_parts.append(perm[k:])

    train_idx = np.concatenate(train_parts)
    test_idx = np.concatenate(test_parts)
    return dataset.subset(train_idx), dataset.subset(test_idx)


def synth_generate(per_class: int, jitter_sigma: float, seed: int) -> Dataset:
    """Deterministically build a labeled landmark dataset with one random but
    well-separated prototype hand shape per class.

    Prototypes are 21-point uniform clouds in [0.2, 0.8]^2, regenerated until
    each sits at least PROTOTYPE_SEPARATION away (euclidean, in feature space)
    from all previously accepted ones. Each emitted sample is its prototype
    plus per-coordinate Gaussian jitter, then a shared random scale in
    [0.8, 1.2] and translation in [-0.1, 0.1]^2 -- the latter two exercise the
    pipeline's invariances without changing the true class.
    """
    if per_class < 1:
        raise ValueError(f"per_class must be >= 1, got {per_class}")
    if jitter_sigma < 0:
        raise ValueError(f"jitter_sigma must be >= 0, got {jitter_sigma}")

    rng = np.random.default_rng(seed)

    prototypes = []
    proto_feats = []
    for c in range(NUM_CLASSES):
        for _ in range(PROTOTYPE_ATTEMPTS):
            candidate = rng.uniform(0.2, 0.8, size=(NUM_LANDMARKS, 2))
            feats = extract_features(candidate)
            if all(
                np.linalg.norm(feats - f) >= PROTOTYPE_SEPARATION
                for f in proto_feats
            ):
                prototypes.append(candidate)
                proto_feats.append(feats)
                break
        else:
            raise PrototypeSeparationFailure(
                f"could not separate prototype for class {LABELS[c]} "
                f"after {PROTOTYPE_ATTEMPTS} attempts"
            )

    frames = np.empty((NUM_CLASSES * per_class, NUM_LANDMARKS, 2))
    labels = np.repeat(np.arange(NUM_CLASSES, dtype=np.int64), per_class)
    row = 0
    for c in range(NUM_CLASSES):
        for _ in range(per_class):
            jitter = rng.standard_normal((NUM_LANDMARKS, 2)) * jitter_sigma
            translation = rng.uniform(-0.1, 0.1, size=2)
            scale = rng.uniform(0.8, 1.2)
            frames[row] = (prototypes[c] + jitter) * scale + translation
            row += 1
    return Dataset(frames, labels)


def augment_jitter(dataset: Dataset, sigma: float, copies: int, seed: int) -> Dataset:
    """Original samples plus `copies` jittered variants per sample
    (per-coordinate Gaussian noise, labels preserved)."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if copies < 0:
        raise ValueError(f"copies must be >= 0, got {copies}")

    rng = np.random.default_rng(seed)
    frame_parts = [dataset.frames]
    label_parts = [dataset.labels]
    for _ in range(copies):
        noise = rng.standard_normal(dataset.frames.shape) * sigma
        frame_parts.append(dataset.frames + noise)
        label_parts.append(dataset.labels)
    return Dataset(np.concatenate(frame_parts), np.concatenate(label_parts))
