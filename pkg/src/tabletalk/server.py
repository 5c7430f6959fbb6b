"""Interactive session service over a WebSocket wire protocol.

Each connection owns one session. Frames are JSON texts:

  client -> server   {"type": "utterance", "text": ...}
                     {"type": "point", "object_id": ...}
                     {"type": "reset", "scenario": ...}
  server -> client   {"type": "say", "text": ...}
                     {"type": "snapshot", "world": ..., "attention":
                      {"stack": [...], "active": [...], "attend": [...]},
                      "dialog_stack": [...]}
                     {"type": "action", "primitive": ...}
                     {"type": "error", "detail": ...}

A snapshot follows every event frame so clients never recompute state.
"""

from __future__ import annotations

import asyncio
import json
import logging

from tabletalk import fixtures, memory as memmod, world as worldmod
from tabletalk.comprehend import ModelConfig
from tabletalk.data import scenario_path
from tabletalk.session import Session
from tabletalk.world import UnavailableAction, load_scenario, scenario_to_dict

log = logging.getLogger(__name__)


def snapshot_frame(session: Session) -> dict:
    world = scenario_to_dict(session.state)
    world["arm"] = session.state.arm
    world["clock"] = session.state.clock
    snapshot_ids = [e.id for e in worldmod.percept_snapshot(session.state)]
    att = memmod.attention(session.memory, snapshot_ids,
                           session.stack_referents(), now=session.tick)
    return {
        "type": "snapshot",
        "world": world,
        "attention": {
            "stack": sorted(att.o_stack),
            "active": list(att.o_active),
            "attend": sorted(att.o_attend),
        },
        "dialog_stack": [seg.purpose for seg in session.stack],
    }


class SessionService:
    """Translates wire frames to session turns and back."""

    def __init__(self, scenario: str = "two-object", model: str = "p+t+a+d",
                 seed: int = 0, lexicon_doc: dict | None = None):
        self.scenario = scenario
        self.model = model
        self.seed = seed
        self.lexicon_doc = lexicon_doc or fixtures.reference_lexicon()
        self.session = self._fresh(scenario)

    def _fresh(self, scenario: str) -> Session:
        state = load_scenario(scenario_path(scenario))
        session = Session(state, ModelConfig.from_name(self.model),
                          seed=self.seed)
        session.load_lexicon_doc(self.lexicon_doc)
        return session

    def handle_frame(self, raw: str) -> list[dict]:
        try:
            frame = json.loads(raw)
            kind = frame["type"]
        except (json.JSONDecodeError, TypeError, KeyError) as exc:
            return [{"type": "error", "detail": f"malformed frame: {exc}"}]
        try:
            if kind == "utterance":
                return self._turn(frame["text"])
            if kind == "point":
                self.session.point(frame["object_id"])
                return [
                    {"type": "action",
                     "primitive": f"pointTo({frame['object_id']})"},
                    snapshot_frame(self.session),
                ]
            if kind == "reset":
                self.session = self._fresh(frame.get("scenario", self.scenario))
                return [snapshot_frame(self.session)]
            return [{"type": "error", "detail": f"unknown frame type {kind!r}"}]
        except (KeyError, UnavailableAction, FileNotFoundError, ValueError) as exc:
            return [{"type": "error", "detail": str(exc)}]

    def _turn(self, text: str) -> list[dict]:
        mark = len(self.session.transcript)
        self.session.handle_turn(text)
        out: list[dict] = []
        for line in self.session.transcript[mark:]:
            _, speaker, payload = line.split("\t", 2)
            if speaker == "A":
                out.append({"type": "say", "text": payload})
                out.append(snapshot_frame(self.session))
            elif speaker == "ACT":
                out.append({"type": "action", "primitive": payload})
                out.append(snapshot_frame(self.session))
        if not out:
            out.append(snapshot_frame(self.session))
        return out


async def serve(port: int, scenario: str = "two-object",
                model: str = "p+t+a+d", seed: int = 0,
                lexicon_doc: dict | None = None,
                ready: asyncio.Event | None = None) -> None:
    from websockets.asyncio.server import serve as ws_serve

    async def handler(websocket):
        service = SessionService(scenario, model, seed, lexicon_doc)
        await websocket.send(json.dumps(snapshot_frame(service.session)))
        async for raw in websocket:
            for frame in service.handle_frame(raw):
                await websocket.send(json.dumps(frame))

    async with ws_serve(handler, "127.0.0.1", port) as server:
        log.info("serving on port %d", port)
        if ready is not None:
            ready.set()
        await server.serve_forever()


def main(port: int, scenario: str, model: str, seed: int,
         lexicon_doc: dict | None = None) -> None:
    asyncio.run(serve(port, scenario, model, seed, lexicon_doc))
