import asyncio
import json

import pytest

from tabletalk.server import SessionService, serve, snapshot_frame


class TestSessionService:
    def test_initial_snapshot_shape(self):
        svc = SessionService("two-object")
        frame = snapshot_frame(svc.session)
        assert frame["type"] == "snapshot"
        assert {o["id"] for o in frame["world"]["objects"]} == \
            {"red-cyl", "blue-tri"}
        assert set(frame["attention"]) == {"stack", "active", "attend"}
        assert frame["dialog_stack"] == []

    def test_utterance_round_trip(self):
        svc = SessionService("two-object")
        frames = svc.handle_frame(json.dumps(
            {"type": "utterance", "text": "pick up the red cylinder."}
        ))
        kinds = [f["type"] for f in frames]
        assert kinds == ["action", "snapshot"]
        assert frames[0]["primitive"] == "pickUp(red-cyl)"
        assert frames[1]["world"]["arm"] == "red-cyl"

    def test_point_then_demonstrative(self):
        svc = SessionService("clarification")
        frames = svc.handle_frame(json.dumps(
            {"type": "point", "object_id": "blue-cyl-b"}
        ))
        assert frames[0] == {"type": "action",
                             "primitive": "pointTo(blue-cyl-b)"}
        assert "blue-cyl-b" in frames[1]["attention"]["attend"]
        frames = svc.handle_frame(json.dumps(
            {"type": "utterance", "text": "pick this up."}
        ))
        primitives = [f["primitive"] for f in frames if f["type"] == "action"]
        assert primitives == ["pickUp(blue-cyl-b)"]

    def test_ask_frames(self):
        svc = SessionService("clarification")
        frames = svc.handle_frame(json.dumps(
            {"type": "utterance", "text": "pick it up."}
        ))
        says = [f["text"] for f in frames if f["type"] == "say"]
        assert says == ["Which object?"]
        assert frames[-1]["dialog_stack"] == [
            "execute-task(pick)", "resolve-reference(dobj)"
        ]

    def test_malformed_frame_keeps_session(self):
        svc = SessionService("two-object")
        frames = svc.handle_frame("{not json")
        assert frames[0]["type"] == "error"
        frames = svc.handle_frame(json.dumps(
            {"type": "utterance", "text": "what color is the red cylinder?"}
        ))
        assert any(f.get("text") == "red." for f in frames)

    def test_unknown_point_target_errors(self):
        svc = SessionService("two-object")
        frames = svc.handle_frame(json.dumps(
            {"type": "point", "object_id": "nope"}
        ))
        assert frames[0]["type"] == "error"

    def test_reset(self):
        svc = SessionService("two-object")
        svc.handle_frame(json.dumps(
            {"type": "utterance", "text": "pick up the red cylinder."}
        ))
        frames = svc.handle_frame(json.dumps(
            {"type": "reset", "scenario": "two-object"}
        ))
        assert frames[0]["world"]["arm"] is None


@pytest.mark.parametrize("port", [8901])
def test_websocket_end_to_end(port):
    """Scripted headless client: point, then a demonstrative imperative."""

    async def scenario():
        from websockets.asyncio.client import connect

        ready = asyncio.Event()
        task = asyncio.create_task(
            serve(port, "clarification", "p+t+a+d", 0, ready=ready)
        )
        await asyncio.wait_for(ready.wait(), 5)
        try:
            async with connect(f"ws://127.0.0.1:{port}") as ws:
                first = json.loads(await ws.recv())
                assert first["type"] == "snapshot"
                await ws.send(json.dumps(
                    {"type": "point", "object_id": "blue-cyl-b"}
                ))
                action = json.loads(await ws.recv())
                assert action["primitive"] == "pointTo(blue-cyl-b)"
                json.loads(await ws.recv())  # snapshot
                await ws.send(json.dumps(
                    {"type": "utterance", "text": "pick this up."}
                ))
                frames = [json.loads(await ws.recv()) for _ in range(2)]
                kinds = {f["type"] for f in frames}
                assert "action" in kinds
                act = next(f for f in frames if f["type"] == "action")
                assert act["primitive"] == "pickUp(blue-cyl-b)"
                snap = next(f for f in frames if f["type"] == "snapshot")
                assert snap["world"]["arm"] == "blue-cyl-b"
        finally:
            task.cancel()
            try:
                await task
            except asyncio.CancelledError:
                pass

    asyncio.run(asyncio.wait_for(scenario(), 20))
