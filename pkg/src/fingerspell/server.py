"""Streaming inference service.

One process, one immutable model, any number of concurrent client sessions.
Two bindings share a single port and the same JSON payloads:

  * newline-delimited JSON over a plain TCP stream (testable with netcat),
  * WebSocket text frames (one message per frame) for browser clients;
    a connection whose first line starts with "GET " is upgraded.

Wire protocol v1:

  request:  {"type":"frame","id":<int>,"landmarks":[[x,y] x 21]}
  response: {"type":"prediction","id":<int>,"label":"<A-Z>",
             "confidence":<real>,"probs":[<26 reals>]}
  error:    {"type":"error","id":<int|null>,"code":"<CODE>","message":"<text>"}

Unknown request fields are ignored. Malformed input never kills a session:
every line/frame gets exactly one in-band response. Sessions are handled
sequentially, so responses keep request order.
"""

import asyncio
import base64
import hashlib
import json
import logging
import math
import signal
import struct

import numpy as np

from .errors import DegenerateHand
from .landmarks import NUM_LANDMARKS
from .model import ModelParams, load_model, predict

logger = logging.getLogger(__name__)

MALFORMED = "MALFORMED"
BAD_LANDMARK_COUNT = "BAD_LANDMARK_COUNT"
DEGENERATE_HAND = "DEGENERATE_HAND"
NON_FINITE = "NON_FINITE"

_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"
_LINE_LIMIT = 1 << 20


def _error(message_id, code, message):
    return {"type": "error", "id": message_id, "code": code, "message": message}


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def handle_message(model: ModelParams, raw: str) -> dict:
    """Process one wire message; always returns a response dict.

    Errors are in-band: MALFORMED for text that does not parse to a frame
    object (including non-pair landmark entries), BAD_LANDMARK_COUNT when the
    landmark list is not 21 long, NON_FINITE for NaN/Inf coordinates, and
    DEGENERATE_HAND for zero-extent frames.
    """
    try:
        msg = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError):
        return _error(None, MALFORMED, "not valid JSON")
    if not isinstance(msg, dict):
        return _error(None, MALFORMED, "message must be an object")

    message_id = msg.get("id")
    if not isinstance(message_id, int) or isinstance(message_id, bool):
        message_id = None

    if msg.get("type") != "frame":
        return _error(message_id, MALFORMED, "expected type 'frame'")

    landmarks = msg.get("landmarks")
    if not isinstance(landmarks, list):
        return _error(message_id, MALFORMED, "landmarks must be a list of pairs")
    if len(landmarks) != NUM_LANDMARKS:
        return _error(
            message_id,
            BAD_LANDMARK_COUNT,
            f"expected {NUM_LANDMARKS} landmark pairs, got {len(landmarks)}",
        )
    for entry in landmarks:
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(_is_number(v) for v in entry)
        ):
            return _error(message_id, MALFORMED, "landmarks must be [x,y] pairs")
    if not all(math.isfinite(float(v)) for pair in landmarks for v in pair):
        return _error(message_id, NON_FINITE, "landmark coordinates must be finite")

    frame = np.array(landmarks, dtype=np.float64)
    try:
        letter, confidence, probs = predict(model, frame)
    except DegenerateHand as exc:
        return _error(message_id, DEGENERATE_HAND, str(exc))
    return {
        "type": "prediction",
        "id": message_id,
        "label": letter,
        "confidence": confidence,
        "probs": [float(p) for p in probs],
    }


def serialize(message: dict) -> str:
    return json.dumps(message, separators=(",", ":"))


# --------------------------------------------------------- TCP line sessions


async def _line_session(model, reader, writer, first_line: bytes):
    line = first_line
    while line:
        text = line.decode("utf-8", errors="replace").strip()
        if text:
            response = handle_message(model, text)
            writer.write((serialize(response) + "\n").encode())
            await writer.drain()
        line = await reader.readline()


# ------------------------------------------------------- WebSocket sessions


def _ws_accept_key(key: str) -> str:
    digest = hashlib.sha1((key + _WS_GUID).encode()).digest()
    return base64.b64encode(digest).decode()


def _ws_frame(payload: bytes, opcode: int = 0x1) -> bytes:
    header = bytes([0x80 | opcode])
    n = len(payload)
    if n < 126:
        header += bytes([n])
    elif n < 1 << 16:
        header += bytes([126]) + struct.pack(">H", n)
    else:
        header += bytes([127]) + struct.pack(">Q", n)
    return header + payload


async def _ws_read_message(reader, writer):
    """Assemble one text message (handling fragmentation and control frames);
    returns None once the peer closes."""
    data = b""
    while True:
        head = await reader.readexactly(2)
        opcode = head[0] & 0x0F
        fin = head[0] & 0x80
        masked = head[1] & 0x80
        length = head[1] & 0x7F
        if length == 126:
            length = struct.unpack(">H", await reader.readexactly(2))[0]
        elif length == 127:
            length = struct.unpack(">Q", await reader.readexactly(8))[0]
        mask = await reader.readexactly(4) if masked else b""
        payload = await reader.readexactly(length) if length else b""
        if mask:
            payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))

        if opcode == 0x8:  # close
            writer.write(_ws_frame(payload[:2], opcode=0x8))
            await writer.drain()
            return None
        if opcode == 0x9:  # ping -> pong
            writer.write(_ws_frame(payload, opcode=0xA))
            await writer.drain()
            continue
        if opcode == 0xA:  # unsolicited pong
            continue
        data += payload
        if fin:
            return data.decode("utf-8", errors="replace")


async def _ws_session(model, reader, writer, first_line: bytes):
    headers = {}
    line = await reader.readline()
    while line not in (b"\r\n", b"\n", b""):
        name, _, value = line.decode("latin-1").partition(":")
        headers[name.strip().lower()] = value.strip()
        line = await reader.readline()

    key = headers.get("sec-websocket-key")
    if key is None:
        writer.write(b"HTTP/1.1 400 Bad Request\r\n\r\n")
        await writer.drain()
        return
    writer.write(
        (
            "HTTP/1.1 101 Switching Protocols\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Accept: {_ws_accept_key(key)}\r\n\r\n"
        ).encode()
    )
    await writer.drain()

    while True:
        text = await _ws_read_message(reader, writer)
        if text is None:
            return
        text = text.strip()
        if not text:
            continue
        response = handle_message(model, text)
        writer.write(_ws_frame(serialize(response).encode()))
        await writer.drain()


# ------------------------------------------------------------------- server


async def _client_connected(model, reader, writer):
    peer = writer.get_extra_info("peername")
    try:
        first_line = await reader.readline()
        if first_line.startswith(b"GET "):
            await _ws_session(model, reader, writer, first_line)
        elif first_line:
            await _line_session(model, reader, writer, first_line)
    except (ConnectionError, asyncio.IncompleteReadError):
        logger.info("session %s dropped", peer)
    except ValueError:
        logger.warning("session %s sent an oversized line; closing", peer)
    finally:
        try:
            writer.close()
            await writer.wait_closed()
        except (ConnectionError, OSError):
            pass


async def start(model: ModelParams, host: str, port: int):
    """Start serving on (host, port); returns the asyncio server object.
    Port 0 picks a free port (inspect server.sockets[0])."""

    async def handler(reader, writer):
        await _client_connected(model, reader, writer)

    return await asyncio.start_server(handler, host, port, limit=_LINE_LIMIT)


async def _serve_until_interrupt(model, host, port):
    server = await start(model, host, port)
    bound = server.sockets[0].getsockname()
    logger.info("serving on %s:%d", bound[0], bound[1])

    stop = asyncio.Event()
    loop = asyncio.get_running_loop()
    for sig in (signal.SIGINT, signal.SIGTERM):
        try:
            loop.add_signal_handler(sig, stop.set)
        except NotImplementedError:  # non-unix
            pass
    async with server:
        await stop.wait()
    logger.info("shutdown complete")


def serve_forever(model: ModelParams, port: int, host: str = "127.0.0.1") -> None:
    """Serve an already-loaded model until SIGINT/SIGTERM.

    Raises OSError if the port cannot be bound.
    """
    asyncio.run(_serve_until_interrupt(model, host, port))


def run_server(model_path: str, port: int, host: str = "127.0.0.1") -> None:
    """Load the model once and serve until SIGINT/SIGTERM.

    Raises FormatError/OSError for a bad model file and OSError if the port
    cannot be bound; callers map these to their exit codes.
    """
    serve_forever(load_model(model_path), port, host)
