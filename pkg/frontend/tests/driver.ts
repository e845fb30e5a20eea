/**
 * The scripted wizard walk used by both the live test (recording) and
 * the offline cassette replay. Deterministic: every pick derives from
 * the server's responses.
 */

import { strict as assert } from "node:assert";

import type { ApiClient } from "../src/api.js";
import { MigrationWizard, WizardError } from "../src/wizard.js";
import type { RankingView } from "../src/views.js";
import type { FormationDoc, HistoryEntry } from "../src/types.js";

export interface ScriptOutcome {
  wizard: MigrationWizard;
  webFirstView: RankingView;
  webSecondView: RankingView;
  appView: RankingView;
  cacheView: RankingView;
  history: HistoryEntry[];
}

function topFeasible(view: RankingView): { image: string; service: string } {
  const row = view.rows.find((r) => r.selectable);
  assert(row, "ranking has no feasible row");
  return { image: row.image, service: row.service };
}

export async function runScriptedWizard(
  api: ApiClient,
  formation: FormationDoc,
): Promise<ScriptOutcome> {
  const wizard = new MigrationWizard(api);
  await wizard.defineFormation(formation);
  assert.equal(wizard.stage, "chooseComponent");

  // web: a price cap both web images violate (forces relaxation level 1),
  // custom comparison sliders and an image-leaning importance slider.
  await wizard.selectComponent("web");
  const webDraft = wizard.draft("web");
  webDraft.imageRequirements.push({ attr: "Hourly License Price", kind: "max", value: 0.25 });
  webDraft.imagePositions = [7, 8, 9];
  webDraft.importancePosition = 6;
  const webFirstView = await wizard.evaluate();
  assert.deepEqual(webFirstView.relaxationBadges, ["image requirements relaxed to level 1"]);

  // Re-weighting cycle: move one slider, evaluate again. The entered
  // requirement must survive the round trip.
  webDraft.imagePositions = [5, 8, 9];
  const webSecondView = await wizard.evaluate();
  assert.equal(wizard.draft("web").imageRequirements.length, 1);

  // The deployability gap makes (web-nginx, rack-de) infeasible; the
  // wizard must reject it locally, before any request goes out.
  await assert.rejects(
    () => wizard.commitSelection("web-nginx", "rack-de"),
    (error: unknown) => error instanceof WizardError && /infeasible/.test(String(error)),
  );

  const webPick = topFeasible(webSecondView);
  await wizard.commitSelection(webPick.image, webPick.service);

  // app: product operator, then commit a non-top feasible pair
  // (engineer override).
  await wizard.selectComponent("app");
  wizard.draft("app").operator = "product";
  const appView = await wizard.evaluate();
  const appFeasible = appView.rows.filter((r) => r.selectable);
  const appPick = appFeasible[1] ?? appFeasible[0];
  assert(appPick, "no feasible app rows");
  await wizard.commitSelection(appPick.image, appPick.service);

  // cache: integrated single-hierarchy mode.
  await wizard.selectComponent("cache");
  wizard.draft("cache").mode = "integrated";
  const cacheView = await wizard.evaluate();
  assert.equal(cacheView.mode, "integrated");
  const cachePick = topFeasible(cacheView);
  await wizard.commitSelection(cachePick.image, cachePick.service);

  assert.equal(wizard.stage, "done");
  const history = await wizard.history();
  return { wizard, webFirstView, webSecondView, appView, cacheView, history };
}
