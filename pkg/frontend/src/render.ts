import { pendingClarifications, type ViewState } from "./state";
import type { Region } from "./types";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderIntake(regions: Region[], fieldError: string | null): string {
  const options = regions
    .map((r) => `<option value="${escapeHtml(r.code)}">${escapeHtml(r.name)}</option>`)
    .join("");
  const error = fieldError
    ? `<p class="field-error" data-testid="field-error">${escapeHtml(fieldError)}</p>`
    : "";
  return `
<form id="intake" data-screen="Intake">
  <label for="question">Your legal question</label>
  <textarea id="question" name="question" required></textarea>
  <label for="location">Your region</label>
  <select id="location" name="location">${options}</select>
  ${error}
  <button type="submit">Ask</button>
</form>`;
}

export function renderClarify(state: ViewState): string {
  const session = state.session;
  if (!session) return renderError("no active session");
  const cards = pendingClarifications(session)
    .map((c) => {
      const flagged = state.highlighted.includes(c.clarification_index);
      const picked = state.pendingSelections[c.clarification_index];
      const options = c.options
        .map(
          (option, k) => `
    <label class="option-card${picked === k ? " selected" : ""}">
      <input type="radio" name="clar-${c.clarification_index}" value="${k}"${
        picked === k ? " checked" : ""
      }>
      ${escapeHtml(option)}
    </label>`,
        )
        .join("");
      return `
  <fieldset class="clarification${flagged ? " needs-answer" : ""}"
            data-clarification="${c.clarification_index}">
    <legend>${escapeHtml(c.text)}</legend>${options}
  </fieldset>`;
    })
    .join("");
  return `
<form id="clarify" data-screen="Clarify" data-round="${session.round}">
  <p>A few details will sharpen the answer (round ${session.round}).</p>
  ${cards}
  <button type="submit">Continue</button>
</form>`;
}

export function renderAnswer(state: ViewState): string {
  const session = state.session;
  if (!session || !session.answer) return renderError("no answer available");
  const answer = session.answer;
  const notice = session.best_effort
    ? `<p class="notice" data-testid="best-effort">Some details remained unresolved;
       this answer is our best effort from the information given.</p>`
    : "";
  const citations = answer.cited_provisions
    .map((id) => `<li>${escapeHtml(id)}</li>`)
    .join("");
  return `
<article data-screen="Answer">
  ${notice}
  <section data-testid="conclusion">
    <h2>Conclusion</h2>
    <p>${escapeHtml(answer.conclusion)}</p>
  </section>
  <section data-testid="jurisprudential-analysis">
    <h2>Jurisprudential Analysis</h2>
    <p>${escapeHtml(answer.jurisprudential_analysis)}</p>
  </section>
  <section data-testid="resolution-suggestions">
    <h2>Resolution Suggestions</h2>
    <p>${escapeHtml(answer.resolution_suggestions)}</p>
  </section>
  <section data-testid="citations">
    <h2>Cited provisions</h2>
    <ul>${citations}</ul>
  </section>
</article>`;
}

export function renderError(message: string): string {
  return `
<div data-screen="Error">
  <p class="error">${escapeHtml(message)}</p>
  <button id="retry" type="button">Try again</button>
</div>`;
}

export function render(state: ViewState, regions: Region[]): string {
  switch (state.screen) {
    case "Intake":
      return renderIntake(regions, state.fieldError);
    case "Clarify":
      return renderClarify(state);
    case "Answer":
      return renderAnswer(state);
    case "Error":
      return renderError(state.errorMessage ?? "something went wrong");
  }
}
