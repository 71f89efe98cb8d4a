"""Wire protocol and streaming server tests.

Protocol handling is tested directly on handle_message (pure function,
no sockets). Session behaviour runs against a real asyncio server on an
ephemeral port, driven by plain blocking test functions via asyncio.run.
The WebSocket binding is exercised with a hand-rolled client so the test
does not depend on the server's own frame code for both directions.
"""

import asyncio
import base64
import hashlib
import json
import math
import struct

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from fingerspell import server as srv
from fingerspell.dataset import LABELS
from fingerspell.model import SOFTMAX, Layer, ModelParams

TIMEOUT = 10.0


def zero_model() -> ModelParams:
    # single zero layer: uniform probabilities, argmax -> "A"
    layer = Layer(weights=np.zeros((26, 42)), biases=np.zeros(26), activation=SOFTMAX)
    return ModelParams(layers=[layer])


def frame_message(message_id, seed: int = 0) -> str:
    rng = np.random.default_rng(seed)
    landmarks = rng.uniform(0.1, 0.9, size=(21, 2)).tolist()
    return json.dumps({"type": "frame", "id": message_id, "landmarks": landmarks})


def run(coro):
    return asyncio.run(asyncio.wait_for(coro, TIMEOUT))


# ------------------------------------------------------------ handle_message


def test_handle_valid_frame():
    out = srv.handle_message(zero_model(), frame_message(7))
    assert out["type"] == "prediction"
    assert out["id"] == 7
    assert out["label"] in LABELS
    assert len(out["probs"]) == 26
    assert abs(sum(out["probs"]) - 1.0) < 1e-9
    assert out["confidence"] == max(out["probs"])


def test_handle_unparseable_text():
    out = srv.handle_message(zero_model(), "hello")
    assert out == {
        "type": "error",
        "id": None,
        "code": srv.MALFORMED,
        "message": out["message"],
    }
    assert out["message"]


def test_handle_non_object():
    out = srv.handle_message(zero_model(), "[1,2,3]")
    assert out["type"] == "error"
    assert out["code"] == srv.MALFORMED


def test_handle_wrong_type_field():
    out = srv.handle_message(zero_model(), '{"type":"ping","id":4}')
    assert out["code"] == srv.MALFORMED
    assert out["id"] == 4


def test_handle_missing_landmarks():
    out = srv.handle_message(zero_model(), '{"type":"frame","id":1}')
    assert out["code"] == srv.MALFORMED


def test_handle_wrong_landmark_count():
    msg = json.loads(frame_message(3))
    msg["landmarks"] = msg["landmarks"][:20]
    out = srv.handle_message(zero_model(), json.dumps(msg))
    assert out["code"] == srv.BAD_LANDMARK_COUNT
    assert out["id"] == 3
    assert "20" in out["message"]


def test_handle_non_pair_entry():
    msg = json.loads(frame_message(5))
    msg["landmarks"][4] = [0.1, 0.2, 0.3]
    out = srv.handle_message(zero_model(), json.dumps(msg))
    assert out["code"] == srv.MALFORMED
    assert out["id"] == 5


def test_handle_non_numeric_entry():
    msg = json.loads(frame_message(5))
    msg["landmarks"][0] = ["a", 0.2]
    out = srv.handle_message(zero_model(), json.dumps(msg))
    assert out["code"] == srv.MALFORMED


def test_handle_non_finite_coordinates():
    # json.loads accepts bare NaN/Infinity tokens, so they can arrive
    msg = json.loads(frame_message(9))
    msg["landmarks"][0] = [float("nan"), 0.5]
    out = srv.handle_message(zero_model(), json.dumps(msg))
    assert out["code"] == srv.NON_FINITE
    assert out["id"] == 9

    msg = json.loads(frame_message(10))
    msg["landmarks"][3] = [0.1, float("inf")]
    out = srv.handle_message(zero_model(), json.dumps(msg))
    assert out["code"] == srv.NON_FINITE


def test_handle_degenerate_hand():
    landmarks = [[0.5, 0.5]] * 21
    raw = json.dumps({"type": "frame", "id": 11, "landmarks": landmarks})
    out = srv.handle_message(zero_model(), raw)
    assert out["code"] == srv.DEGENERATE_HAND
    assert out["id"] == 11


def test_handle_non_integer_id_reported_as_null():
    msg = json.loads(frame_message(0))
    for bad in ("seven", 1.5, True, None, [1]):
        msg["id"] = bad
        out = srv.handle_message(zero_model(), json.dumps(msg))
        assert out["type"] == "prediction"
        assert out["id"] is None


def test_handle_ignores_unknown_fields():
    msg = json.loads(frame_message(2))
    msg["camera"] = "front"
    msg["ts"] = 123456
    out = srv.handle_message(zero_model(), json.dumps(msg))
    assert out["type"] == "prediction"
    assert out["id"] == 2


def test_serialize_round_trip():
    out = srv.handle_message(zero_model(), frame_message(1))
    assert json.loads(srv.serialize(out)) == out
    assert "\n" not in srv.serialize(out)


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=200))
def test_any_text_gets_one_response(raw):
    out = srv.handle_message(zero_model(), raw)
    assert out["type"] in ("prediction", "error")
    assert out["id"] is None or isinstance(out["id"], int)
    if out["type"] == "error":
        assert out["code"] in (
            srv.MALFORMED,
            srv.BAD_LANDMARK_COUNT,
            srv.DEGENERATE_HAND,
            srv.NON_FINITE,
        )


# ------------------------------------------------------------- TCP sessions


async def with_server(session):
    server = await srv.start(zero_model(), "127.0.0.1", 0)
    port = server.sockets[0].getsockname()[1]
    try:
        return await session(port)
    finally:
        server.close()
        await server.wait_closed()


async def line_session(port, lines):
    reader, writer = await asyncio.open_connection("127.0.0.1", port)
    responses = []
    for line in lines:
        writer.write((line + "\n").encode())
        await writer.drain()
        responses.append(json.loads(await reader.readline()))
    writer.close()
    await writer.wait_closed()
    return responses


def test_session_mixed_traffic():
    lines = [
        frame_message(1),
        "garbage that is not json",
        json.dumps({"type": "frame", "id": 3, "landmarks": [[0.0, 0.0]] * 20}),
        frame_message(4),
    ]
    out = run(with_server(lambda port: line_session(port, lines)))
    assert [m["type"] for m in out] == ["prediction", "error", "error", "prediction"]
    assert [m.get("id") for m in out] == [1, None, 3, 4]
    assert out[1]["code"] == srv.MALFORMED
    assert out[2]["code"] == srv.BAD_LANDMARK_COUNT


def test_session_thousand_frames_in_order():
    async def session(port):
        reader, writer = await asyncio.open_connection("127.0.0.1", port)
        # pipeline everything without draining: draining here can deadlock
        # against the server's own drain once both socket buffers fill
        for i in range(1000):
            writer.write((frame_message(i, seed=i) + "\n").encode())
        responses = [json.loads(await reader.readline()) for _ in range(1000)]
        writer.close()
        await writer.wait_closed()
        return responses

    out = run(with_server(session))
    assert all(m["type"] == "prediction" for m in out)
    assert [m["id"] for m in out] == list(range(1000))


def test_concurrent_sessions_are_isolated():
    async def both(port):
        a = line_session(port, [frame_message(i) for i in range(0, 40)])
        b = line_session(port, [frame_message(i) for i in range(100, 140)])
        return await asyncio.gather(a, b)

    out_a, out_b = run(with_server(both))
    assert [m["id"] for m in out_a] == list(range(0, 40))
    assert [m["id"] for m in out_b] == list(range(100, 140))


def test_client_disconnect_leaves_server_alive():
    async def session(port):
        reader, writer = await asyncio.open_connection("127.0.0.1", port)
        writer.write(b'{"type":"frame"')  # half a message, then vanish
        await writer.drain()
        writer.close()
        await writer.wait_closed()
        return await line_session(port, [frame_message(42)])

    out = run(with_server(session))
    assert out[0]["type"] == "prediction"
    assert out[0]["id"] == 42


def test_oversized_line_closes_only_that_session():
    async def session(port):
        reader, writer = await asyncio.open_connection("127.0.0.1", port)
        try:
            writer.write(b"x" * (2 << 20) + b"\n")
            await writer.drain()
            await reader.read()  # server closes without a response
        except (ConnectionResetError, BrokenPipeError):
            pass  # server may reset while our buffer is still in flight
        writer.close()
        try:
            await writer.wait_closed()
        except (ConnectionResetError, BrokenPipeError):
            pass
        return await line_session(port, [frame_message(1)])

    fresh = run(with_server(session))
    assert fresh[0]["type"] == "prediction"


# --------------------------------------------------------- WebSocket binding


def client_ws_frame(payload: bytes, opcode: int = 0x1) -> bytes:
    # clients must mask; fixed mask keeps the test deterministic
    mask = b"\x11\x22\x33\x44"
    if len(payload) < 126:
        header = bytes([0x80 | opcode, 0x80 | len(payload)])
    else:
        header = bytes([0x80 | opcode, 0x80 | 126]) + struct.pack(">H", len(payload))
    masked = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
    return header + mask + masked


async def read_ws_frame(reader):
    head = await reader.readexactly(2)
    opcode = head[0] & 0x0F
    length = head[1] & 0x7F
    assert not head[1] & 0x80  # server frames are unmasked
    if length == 126:
        length = struct.unpack(">H", await reader.readexactly(2))[0]
    elif length == 127:
        length = struct.unpack(">Q", await reader.readexactly(8))[0]
    return opcode, await reader.readexactly(length) if length else b""


async def ws_handshake(port):
    reader, writer = await asyncio.open_connection("127.0.0.1", port)
    key = base64.b64encode(b"0123456789abcdef").decode()
    writer.write(
        (
            f"GET /stream HTTP/1.1\r\n"
            f"Host: 127.0.0.1:{port}\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Key: {key}\r\n"
            "Sec-WebSocket-Version: 13\r\n\r\n"
        ).encode()
    )
    await writer.drain()
    status = await reader.readline()
    assert b"101" in status
    accept = None
    line = await reader.readline()
    while line not in (b"\r\n", b""):
        name, _, value = line.decode().partition(":")
        if name.strip().lower() == "sec-websocket-accept":
            accept = value.strip()
        line = await reader.readline()
    expected = base64.b64encode(
        hashlib.sha1((key + "258EAFA5-E914-47DA-95CA-C5AB0DC85B11").encode()).digest()
    ).decode()
    assert accept == expected
    return reader, writer


def test_websocket_session():
    async def session(port):
        reader, writer = await ws_handshake(port)

        writer.write(client_ws_frame(frame_message(21).encode()))
        await writer.drain()
        opcode, payload = await read_ws_frame(reader)
        first = json.loads(payload)
        assert opcode == 0x1

        writer.write(client_ws_frame(b"not json"))
        await writer.drain()
        _, payload = await read_ws_frame(reader)
        second = json.loads(payload)

        writer.write(client_ws_frame(struct.pack(">H", 1000), opcode=0x8))
        await writer.drain()
        opcode, _ = await read_ws_frame(reader)
        writer.close()
        await writer.wait_closed()
        return first, second, opcode

    first, second, close_opcode = run(with_server(session))
    assert first["type"] == "prediction"
    assert first["id"] == 21
    assert second["code"] == srv.MALFORMED
    assert close_opcode == 0x8


def test_websocket_ping_gets_pong():
    async def session(port):
        reader, writer = await ws_handshake(port)
        writer.write(client_ws_frame(b"hi", opcode=0x9))
        writer.write(client_ws_frame(frame_message(5).encode()))
        await writer.drain()
        opcode, payload = await read_ws_frame(reader)
        assert opcode == 0xA
        assert payload == b"hi"
        _, payload = await read_ws_frame(reader)
        writer.close()
        await writer.wait_closed()
        return json.loads(payload)

    out = run(with_server(session))
    assert out["id"] == 5


def test_websocket_and_line_clients_share_port():
    async def both(port):
        async def ws_part():
            reader, writer = await ws_handshake(port)
            writer.write(client_ws_frame(frame_message(1).encode()))
            await writer.drain()
            _, payload = await read_ws_frame(reader)
            writer.close()
            await writer.wait_closed()
            return json.loads(payload)

        return await asyncio.gather(ws_part(), line_session(port, [frame_message(2)]))

    ws_out, line_out = run(with_server(both))
    assert ws_out["type"] == "prediction"
    assert line_out[0]["id"] == 2


def test_large_finite_coordinates_allowed():
    # only NaN/Inf are rejected, magnitude alone is fine
    msg = json.loads(frame_message(1))
    msg["landmarks"][0] = [1e300, -1e300]
    out = srv.handle_message(zero_model(), json.dumps(msg))
    assert out["type"] == "prediction"
