"""Round-trip the streaming protocol against an in-process server.

Trains a tiny model, starts the prediction server on an ephemeral port,
then plays a client: a few valid frames, one piece of garbage, and one
flat hand, printing what comes back. The error responses arrive in-band
and the session just keeps going.

Run: python3 demos/streaming_roundtrip.py
"""

import asyncio
import json

import numpy as np

from fingerspell.dataset import synth_generate
from fingerspell.model import TrainConfig, train
from fingerspell import server


async def main():
    print("training a small model ...")
    ds = synth_generate(per_class=30, jitter_sigma=0.01, seed=7)
    params, _ = train(ds, TrainConfig(epochs=10, seed=42))

    srv = await server.start(params, "127.0.0.1", 0)
    port = srv.sockets[0].getsockname()[1]
    print(f"server listening on 127.0.0.1:{port}\n")

    reader, writer = await asyncio.open_connection("127.0.0.1", port)

    async def send(line: str):
        writer.write((line + "\n").encode())
        await writer.drain()
        reply = json.loads(await reader.readline())
        shown = line if len(line) <= 48 else line[:45] + "..."
        if reply["type"] == "prediction":
            print(f"  -> {shown}")
            print(f"  <- id={reply['id']} label={reply['label']} "
                  f"confidence={reply['confidence']:.3f}")
        else:
            print(f"  -> {shown}")
            print(f"  <- id={reply['id']} error {reply['code']}: {reply['message']}")

    rng = np.random.default_rng(3)
    for i in range(3):
        frame = {"type": "frame", "id": i,
                 "landmarks": rng.uniform(0.1, 0.9, size=(21, 2)).tolist()}
        await send(json.dumps(frame))

    print("\nnow some trouble:")
    await send("this is not json")
    flat = {"type": "frame", "id": 99, "landmarks": [[0.5, 0.5]] * 21}
    await send(json.dumps(flat))

    print("\nand the session still works afterwards:")
    frame = {"type": "frame", "id": 100,
             "landmarks": rng.uniform(0.1, 0.9, size=(21, 2)).tolist()}
    await send(json.dumps(frame))

    writer.close()
    await writer.wait_closed()
    srv.close()
    await srv.wait_closed()


if __name__ == "__main__":
    asyncio.run(main())
