import { ApiClient } from "./api";
import { App } from "./app";
import { render } from "./render";

// Browser entry point: mounts the controller onto #root and wires DOM
// events. Everything above this file is DOM-free and unit-tested.

const root = document.getElementById("root");
if (!root) throw new Error("missing #root element");

const app = new App(new ApiClient(window.location.origin), (state) => {
  root.innerHTML = render(state, app.regions);
  const url = new URL(window.location.href);
  if (state.session) {
    url.searchParams.set("session", state.session.session_id);
  } else {
    url.searchParams.delete("session");
  }
  window.history.replaceState(null, "", url.toString());
});

root.addEventListener("submit", (event) => {
  event.preventDefault();
  const form = event.target as HTMLFormElement;
  if (form.id === "intake") {
    const question = (form.querySelector("#question") as HTMLTextAreaElement).value;
    const location = (form.querySelector("#location") as HTMLSelectElement).value;
    void app.submitIntake(question, location);
  } else if (form.id === "clarify") {
    void app.submitClarifications();
  }
});

root.addEventListener("change", (event) => {
  const input = event.target as HTMLInputElement;
  if (input.type === "radio" && input.name.startsWith("clar-")) {
    app.pickOption(Number(input.name.slice("clar-".length)), Number(input.value));
  }
});

root.addEventListener("click", (event) => {
  if ((event.target as HTMLElement).id === "retry") {
    void app.start();
  }
});

// resume an existing session on reload; otherwise show the intake form
const sessionId = new URL(window.location.href).searchParams.get("session");
void app.start().then(() => {
  if (sessionId) return app.routeSession(sessionId);
});
