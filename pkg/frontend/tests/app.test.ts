import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { App } from "../src/app";
import { render } from "../src/render";
import { pendingClarifications, type Screen } from "../src/state";
import { FakeServer, type FakeServerOptions } from "./fake-server";

function makeApp(options: FakeServerOptions = {}) {
  const server = new FakeServer(options);
  const screens: Screen[] = [];
  const app = new App(new ApiClient("http://fake", server.fetch), (state) => {
    screens.push(state.screen);
  });
  return { app, server, screens };
}

async function answerAllCards(app: App, optionIndex = 0) {
  for (const card of pendingClarifications(app.state.session!)) {
    app.pickOption(card.clarification_index, optionIndex);
  }
  await app.submitClarifications();
}

describe("intake flow", () => {
  it("routes a complete question straight to the answer screen", async () => {
    const { app } = makeApp();
    await app.start();
    await app.submitIntake("a complete question", "US-MA");
    expect(app.state.screen).toBe("Answer");
    expect(app.state.session?.answer?.conclusion).toBeTruthy();
  });

  it("routes a deficient question to the clarify screen with cards", async () => {
    const { app } = makeApp({ rounds: [2] });
    await app.start();
    await app.submitIntake("a vague question", "US-MA");
    expect(app.state.screen).toBe("Clarify");
    expect(pendingClarifications(app.state.session!)).toHaveLength(2);
  });

  it("shows an inline field error for an unsupported region", async () => {
    const { app } = makeApp();
    await app.start();
    await app.submitIntake("q", "XX-YY");
    expect(app.state.screen).toBe("Intake");
    expect(app.state.fieldError).toContain("unsupported region");
  });

  it("shows the error screen with retry on a server failure", async () => {
    const { app } = makeApp({ failWith: 502 });
    await app.start();
    expect(app.state.screen).toBe("Error");
    expect(render(app.state, app.regions)).toContain('id="retry"');
  });
});

describe("clarify flow", () => {
  it("reaches the answer after one round", async () => {
    const { app, screens } = makeApp({ rounds: [1] });
    await app.start();
    await app.submitIntake("q", "US-MA");
    await answerAllCards(app);
    expect(app.state.screen).toBe("Answer");
    expect(screens.filter((s) => s === "Clarify").length).toBeGreaterThanOrEqual(1);
  });

  it("walks three rounds before answering", async () => {
    const { app } = makeApp({ rounds: [1, 2, 1] });
    await app.start();
    await app.submitIntake("q", "US-MA");
    const roundsSeen: number[] = [];
    while (app.state.screen === "Clarify") {
      roundsSeen.push(app.state.session!.round);
      await answerAllCards(app);
    }
    expect(roundsSeen).toEqual([1, 2, 3]);
    expect(app.state.screen).toBe("Answer");
  });

  it("highlights unanswered cards instead of submitting", async () => {
    const { app, server } = makeApp({ rounds: [2] });
    await app.start();
    await app.submitIntake("q", "US-MA");
    const cards = pendingClarifications(app.state.session!);
    app.pickOption(cards[0].clarification_index, 0);
    const requestsBefore = server.requestLog.length;
    await app.submitClarifications();
    expect(app.state.screen).toBe("Clarify");
    expect(app.state.highlighted).toEqual([cards[1].clarification_index]);
    expect(server.requestLog.length).toBe(requestsBefore); // nothing sent
  });

  it("surfaces the best-effort notice on the answer screen", async () => {
    const { app } = makeApp({ rounds: [1], bestEffort: true });
    await app.start();
    await app.submitIntake("q", "US-MA");
    await answerAllCards(app, 2); // always "Other / not sure"
    expect(app.state.screen).toBe("Answer");
    expect(render(app.state, app.regions)).toContain('data-testid="best-effort"');
  });
});

describe("session resume", () => {
  it("reproduces the clarify screen from the server snapshot alone", async () => {
    const { app, server } = makeApp({ rounds: [2] });
    await app.start();
    await app.submitIntake("q", "US-MA");
    const sessionId = app.state.session!.session_id;
    const firstRender = render(app.state, app.regions);

    const reloaded = new App(new ApiClient("http://fake", server.fetch));
    await reloaded.start();
    await reloaded.routeSession(sessionId);
    expect(render(reloaded.state, reloaded.regions)).toBe(firstRender);
  });

  it("reproduces the answer screen after the session is answered", async () => {
    const { app, server } = makeApp();
    await app.start();
    await app.submitIntake("q", "US-MA");
    const sessionId = app.state.session!.session_id;

    const reloaded = new App(new ApiClient("http://fake", server.fetch));
    await reloaded.start();
    await reloaded.routeSession(sessionId);
    expect(reloaded.state.screen).toBe("Answer");
    expect(render(reloaded.state, reloaded.regions)).toBe(
      render(app.state, app.regions),
    );
  });
});
