"""Command-line entry point: synthesize, train, evaluate, predict, serve.

Exit codes are a closed set, chosen for scriptability:

  0  success
  1  usage error (bad flags or flag values)
  2  data or format error (unreadable/invalid input files, write failures)
  3  runtime failure (training collapse, port cannot be bound)

Machine-readable results go to stdout, diagnostics to stderr, and output
files are written atomically (temp file + rename), so a failed run never
leaves a half-written artifact. Every command except serve is deterministic:
identical flags and inputs give byte-identical outputs.
"""

import argparse
import json
import logging
import sys

from .dataset import load_csv, save_csv, stratified_split, synth_generate
from .errors import (
    DegenerateHand,
    EmptyInput,
    FingerspellError,
    FormatError,
    InsufficientClassSamples,
    ParseError,
)
from .fileio import atomic_write_text
from .metrics import confusion, metrics_from_confusion, render_confusion_csv, render_report
from .model import TrainConfig, load_model, predict, save_model, train
from .server import DEGENERATE_HAND, handle_message, serialize, serve_forever

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; route through our taxonomy
    def error(self, message):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("must be strictly between 0 and 1")
    return value


def _port(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 65535:
        raise argparse.ArgumentTypeError("must be in 1..65535")
    return value


# ----------------------------------------------------------------- commands


def cmd_synth(args) -> int:
    ds = synth_generate(per_class=args.per_class, jitter_sigma=args.sigma, seed=args.seed)
    save_csv(ds, args.out)
    print(len(ds.labels))
    return EXIT_OK


def _predict_dataset(model, dataset):
    """Run the model over every sample; degenerate frames are skipped
    (they carry no shape information to grade)."""
    actual, predicted, skipped = [], [], 0
    for letter, frame in dataset.samples():
        try:
            guess, _, _ = predict(model, frame)
        except DegenerateHand:
            skipped += 1
            continue
        actual.append(letter)
        predicted.append(guess)
    if skipped:
        logger.warning("skipped %d degenerate frame(s) during evaluation", skipped)
    return actual, predicted


def cmd_train(args) -> int:
    ds = load_csv(args.data)
    train_set, test_set = stratified_split(ds, args.split, seed=args.seed)
    config = TrainConfig(
        epochs=args.epochs,
        learning_rate=args.lr,
        batch_size=args.batch,
        seed=args.seed,
    )
    params, stats = train(train_set, config)
    save_model(params, args.out)

    lines = ["epoch,mean_loss,train_accuracy"]
    for s in stats:
        lines.append(f"{s.epoch},{s.mean_loss!r},{s.train_accuracy!r}")
    atomic_write_text(args.log, "\n".join(lines) + "\n")

    actual, predicted = _predict_dataset(params, test_set)
    report = metrics_from_confusion(confusion(actual, predicted))
    print(repr(report.accuracy))
    return EXIT_OK


def cmd_eval(args) -> int:
    ds = load_csv(args.data)
    model = load_model(args.model)
    actual, predicted = _predict_dataset(model, ds)
    cm = confusion(actual, predicted)
    report = metrics_from_confusion(cm)
    atomic_write_text(args.report, render_report(report))
    atomic_write_text(args.confusion, render_confusion_csv(cm))
    print(repr(report.accuracy))
    return EXIT_OK


def _read_frame_argument(text: str):
    """--frame takes inline JSON (starts with '[' or '{') or a file path."""
    text = text.strip()
    if not text.startswith(("[", "{")):
        with open(text, "r", encoding="utf-8") as fh:
            text = fh.read().strip()
    try:
        parsed = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"frame is not valid JSON: {exc}") from None
    if isinstance(parsed, dict):
        landmarks = parsed.get("landmarks")
        message_id = parsed.get("id")
    else:
        landmarks, message_id = parsed, None
    if not isinstance(message_id, int) or isinstance(message_id, bool):
        message_id = None
    return landmarks, message_id


def cmd_predict(args) -> int:
    model = load_model(args.model)
    landmarks, message_id = _read_frame_argument(args.frame)
    raw = json.dumps({"type": "frame", "id": message_id, "landmarks": landmarks})
    response = handle_message(model, raw)
    if response["type"] == "error" and response["code"] != DEGENERATE_HAND:
        print(f"error: {response['message']}", file=sys.stderr)
        return EXIT_DATA
    # degenerate hands are a data condition, reported in-band like the server
    print(serialize(response))
    return EXIT_OK


def cmd_serve(args) -> int:
    model = load_model(args.model)
    try:
        serve_forever(model, args.port)
    except OSError as exc:
        print(f"error: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except KeyboardInterrupt:
        pass
    return EXIT_OK


# ------------------------------------------------------------------ parsing


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fingerspell", description="fingerspelling recognition toolkit")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("synth", help="generate a synthetic landmark dataset")
    p.add_argument("--per-class", type=_positive_int, required=True, help="samples per letter")
    p.add_argument("--sigma", type=_nonneg_float, required=True, help="landmark jitter stddev")
    p.add_argument("--seed", type=int, required=True, help="generator seed")
    p.add_argument("--out", required=True, help="output dataset CSV")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train a classifier on a dataset CSV")
    p.add_argument("--data", required=True, help="dataset CSV path")
    p.add_argument("--epochs", type=_positive_int, default=50)
    p.add_argument("--lr", type=_positive_float, default=0.01)
    p.add_argument("--batch", type=_positive_int, default=32)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--split", type=_fraction, default=0.8, help="train fraction")
    p.add_argument("--out", required=True, help="output model JSON")
    p.add_argument("--log", required=True, help="output per-epoch log CSV")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on a dataset CSV")
    p.add_argument("--data", required=True, help="dataset CSV path")
    p.add_argument("--model", required=True, help="model JSON path")
    p.add_argument("--report", required=True, help="output classification report")
    p.add_argument("--confusion", required=True, help="output confusion CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="predict one frame")
    p.add_argument("--model", required=True, help="model JSON path")
    p.add_argument(
        "--frame",
        required=True,
        help="inline JSON (21 [x,y] pairs, bare or under a 'landmarks' key) or a path to it",
    )
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("serve", help="stream predictions over a socket")
    p.add_argument("--model", required=True, help="model JSON path")
    p.add_argument("--port", type=_port, default=8765)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, FormatError, InsufficientClassSamples, EmptyInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FingerspellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entrypoint() -> None:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s: %(message)s")
    sys.exit(main())
