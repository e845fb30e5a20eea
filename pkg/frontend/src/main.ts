/**
 * Browser entry point: binds the wizard to the page. All decision
 * logic lives in wizard.ts/views.ts; this file only moves DOM nodes.
 */

import { ApiClient } from "./api.js";
import { sliderLabel, SLIDER_STEPS } from "./comparisons.js";
import { comparisonPairs, IMAGE_ROOT, SERVICE_ROOT } from "./hierarchy.js";
import { renderRankingHtml } from "./views.js";
import { MigrationWizard, WizardError } from "./wizard.js";
import type { FormationDoc, RequirementDoc } from "./types.js";

const apiBase = (document.body.dataset.apiBase ?? "").replace(/\/$/, "");
const wizard = new MigrationWizard(new ApiClient(apiBase));

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
};

function showError(error: unknown): void {
  const box = el("errors");
  const message = error instanceof Error ? error.message : String(error);
  box.innerHTML = `<div class="error">${message} <button id="retry">dismiss</button></div>`;
  box.querySelector("#retry")?.addEventListener("click", () => (box.innerHTML = ""));
}

function renderStage(): void {
  el("stage").textContent = wizard.stage;
  el("session").textContent = wizard.sessionId ? `session ${wizard.sessionId}` : "";
  el("notices").innerHTML = wizard.notices.map((n) => `<div class="notice">${n}</div>`).join("");

  const picker = el("components");
  picker.innerHTML = "";
  for (const componentId of wizard.remainingComponents()) {
    const button = document.createElement("button");
    button.textContent = componentId;
    button.addEventListener("click", () => {
      wizard.selectComponent(componentId).then(renderAll).catch(showError);
    });
    picker.appendChild(button);
  }

  el("committed").innerHTML = wizard.committed
    .map((c) => `<li>${c.component}: ${c.image} on ${c.service} (score ${c.score.toFixed(4)})</li>`)
    .join("");
}

function renderPreferences(): void {
  const form = el("preferences");
  if (!wizard.currentComponent) {
    form.innerHTML = "";
    return;
  }
  const draft = wizard.draft(wizard.currentComponent);
  form.innerHTML = `<h3>${wizard.currentComponent}</h3>`;

  const sliders = document.createElement("div");
  for (const [root, positions] of [
    [IMAGE_ROOT, draft.imagePositions],
    [SERVICE_ROOT, draft.servicePositions],
  ] as const) {
    comparisonPairs(root).forEach(([left, right], index) => {
      const row = document.createElement("label");
      row.className = "slider-row";
      row.textContent = `${left} vs ${right}: `;
      const input = document.createElement("input");
      input.type = "range";
      input.min = "0";
      input.max = String(SLIDER_STEPS - 1);
      input.value = String(positions[index]);
      const caption = document.createElement("span");
      caption.textContent = sliderLabel(positions[index] ?? 8);
      input.addEventListener("input", () => {
        positions[index] = Number(input.value);
        caption.textContent = sliderLabel(positions[index] ?? 8);
      });
      row.append(input, caption);
      sliders.appendChild(row);
    });
  }
  form.appendChild(sliders);

  const evaluate = document.createElement("button");
  evaluate.id = "evaluate";
  evaluate.textContent = "evaluate";
  evaluate.addEventListener("click", () => {
    wizard.evaluate().then(renderAll).catch(showError);
  });
  form.appendChild(evaluate);
}

function renderRanking(): void {
  const host = el("ranking");
  if (!wizard.ranking) {
    host.innerHTML = "";
    return;
  }
  host.innerHTML = renderRankingHtml(wizard.ranking);
  host.querySelectorAll<HTMLButtonElement>("button.commit").forEach((button) => {
    button.addEventListener("click", () => {
      const { image, service } = button.dataset;
      wizard
        .commitSelection(image ?? "", service ?? "")
        .then(renderAll)
        .catch((error) => {
          if (error instanceof WizardError) showError(error);
          else showError(error);
        });
    });
  });
}

function renderAll(): void {
  renderStage();
  renderPreferences();
  renderRanking();
}

el("define").addEventListener("click", () => {
  let formation: FormationDoc;
  try {
    formation = JSON.parse((el("formation-input") as HTMLTextAreaElement).value) as FormationDoc;
  } catch (error) {
    showError(new WizardError(`formation JSON does not parse: ${error}`));
    return;
  }
  wizard.defineFormation(formation).then(renderAll).catch(showError);
});

el("add-requirement").addEventListener("click", () => {
  if (!wizard.currentComponent) return;
  const attr = (el("req-attr") as HTMLInputElement).value;
  const kind = (el("req-kind") as HTMLSelectElement).value as RequirementDoc["kind"];
  const raw = (el("req-value") as HTMLInputElement).value;
  if (!attr || !raw) return;
  const draft = wizard.draft(wizard.currentComponent);
  const requirement: RequirementDoc =
    kind === "max" || kind === "min"
      ? { attr, kind, value: Number(raw) }
      : kind === "equals"
        ? { attr, kind, value: raw }
        : { attr, kind, values: raw.split(",").map((v) => v.trim()) };
  const side = (el("req-side") as HTMLSelectElement).value;
  (side === "service" ? draft.serviceRequirements : draft.imageRequirements).push(requirement);
  renderPreferences();
});

renderAll();
