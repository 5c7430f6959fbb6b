/**
 * Page wiring: scene on the left, chat and inspectors on the right.
 * Clicking an object sends a point frame; Enter sends the utterance.
 */

import { SessionClient } from "./client.js";
import {
  appendAction, appendChat, clearError, render, showError,
} from "./render.js";

function queryParam(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

export function mount(root: HTMLElement): SessionClient {
  root.innerHTML = `
    <div class="layout">
      <div class="view" id="view"></div>
      <div class="side">
        <div class="chat-log" id="chat-log"></div>
        <form id="chat-form">
          <input id="chat-input" autocomplete="off"
                 placeholder="say something..." />
          <button id="chat-send" type="submit">Send</button>
        </form>
        <div class="connection" id="connection">connecting</div>
      </div>
    </div>`;

  const view = root.querySelector("#view") as HTMLElement;
  const log = root.querySelector("#chat-log") as HTMLElement;
  const form = root.querySelector("#chat-form") as HTMLFormElement;
  const input = root.querySelector("#chat-input") as HTMLInputElement;
  const send = root.querySelector("#chat-send") as HTMLButtonElement;
  const connection = root.querySelector("#connection") as HTMLElement;

  const url = queryParam("server", "ws://127.0.0.1:8765");
  const client = new SessionClient(url, {
    onFrame: (frame) => {
      switch (frame.type) {
        case "snapshot":
          clearError(view);
          render(frame, view);
          break;
        case "say":
          appendChat(log, "agent", frame.text);
          break;
        case "action":
          appendAction(log, frame.primitive);
          break;
        case "error":
          showError(view, frame.detail);
          break;
      }
    },
    onState: (state) => {
      connection.textContent = state;
      connection.dataset.state = state;
    },
    onBusy: (busy) => {
      input.disabled = busy;
      send.disabled = busy;
      if (!busy) input.focus();
    },
  });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (!text) return;
    if (client.sendUtterance(text)) {
      appendChat(log, "you", text);
      input.value = "";
    }
  });

  view.addEventListener("click", (event) => {
    const target = (event.target as Element).closest("g.object");
    const id = target?.getAttribute("data-id");
    if (id && client.sendPoint(id)) {
      appendChat(log, "you", `(points at ${id})`);
    }
  });

  client.connect();
  return client;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mount(document.getElementById("app") as HTMLElement);
}
