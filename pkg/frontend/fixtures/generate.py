#!/usr/bin/env python3
"""Regenerate the checked-in webclient fixtures.

Drives the fingerspell CLI (synth + train) and reads its documented CSV
output, so the fixtures stay faithful to what a real server would see:

  model.json      small trained model for `fingerspell serve`
  landmarks.json  a recorded tracker session: 45 frames of the letter A,
                  10 empty frames, 45 frames of B, with a few multi-hand
                  frames up front and synthetic depth values everywhere,
                  so replaying it exercises the one-hand filter and the
                  z-dropping path.

Both outputs are deterministic; rerunning this script reproduces them.
"""

import csv
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

HERE = Path(__file__).resolve().parent

SYNTH_SEED = 7
SIGMA = 0.01
PER_CLASS = 40
EPOCHS = 30
FPS = 30


def run_cli(*args: str) -> None:
    exe = shutil.which("fingerspell")
    if exe is not None:
        cmd = [exe, *args]
    else:
        shim = "import sys; from fingerspell.cli import main; sys.exit(main(sys.argv[1:]))"
        cmd = [sys.executable, "-c", shim, *args]
    subprocess.run(cmd, check=True)


def load_rows(csv_path: Path) -> dict[str, list[list[list[float]]]]:
    """Group CSV rows by label as 21x2 landmark lists."""
    by_label: dict[str, list[list[list[float]]]] = {}
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)  # header
        for row in reader:
            label = row[0]
            coords = [float(v) for v in row[1:]]
            hand = [[coords[2 * i], coords[2 * i + 1]] for i in range(21)]
            by_label.setdefault(label, []).append(hand)
    return by_label


def with_depth(hand: list[list[float]], salt: int) -> list[list[float]]:
    """Append a deterministic fake z so replay exercises z-dropping."""
    return [
        [round(x, 6), round(y, 6), round(0.01 * ((salt + i) % 5 - 2), 6)]
        for i, (x, y) in enumerate(hand)
    ]


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        data_csv = Path(tmp) / "data.csv"
        log_csv = Path(tmp) / "log.csv"
        run_cli(
            "synth",
            "--per-class", str(PER_CLASS),
            "--sigma", str(SIGMA),
            "--seed", str(SYNTH_SEED),
            "--out", str(data_csv),
        )
        run_cli(
            "train",
            "--data", str(data_csv),
            "--epochs", str(EPOCHS),
            "--out", str(HERE / "model.json"),
            "--log", str(log_csv),
        )
        rows = load_rows(data_csv)

    a_rows = rows["A"]
    b_rows = rows["B"]

    frames: list[dict] = []
    # Two frames with both hands visible: the capture loop must skip these.
    frames.append({"hands": [with_depth(a_rows[0], 0), with_depth(b_rows[0], 1)]})
    frames.append({"hands": [with_depth(b_rows[1], 2), with_depth(a_rows[1], 3)]})
    # 45 frames of A (1.5s at 30fps), enough to stabilize and commit.
    for i in range(45):
        frames.append({"hands": [with_depth(a_rows[i % len(a_rows)], i)]})
    # 10 empty frames (333ms): hand out of view.
    for _ in range(10):
        frames.append({"hands": []})
    # 45 frames of B.
    for i in range(45):
        frames.append({"hands": [with_depth(b_rows[i % len(b_rows)], i + 50)]})

    recording = {"fps": FPS, "frames": frames}
    out = HERE / "landmarks.json"
    out.write_text(json.dumps(recording) + "\n")
    print(f"wrote {out} ({len(frames)} frames) and {HERE / 'model.json'}")


if __name__ == "__main__":
    main()
