/**
 * Migration wizard state machine.
 *
 * One component at a time: select, state requirements and pairwise
 * comparisons, evaluate through the API, inspect the ranking, adjust
 * and re-evaluate as often as wanted, then commit a feasible pair.
 * Per-component drafts survive re-evaluation cycles, so re-weighting
 * never loses entered requirements or slider positions.
 *
 * Every number shown comes from the API; the wizard never scores
 * anything locally, and it refuses to even send a commit request for
 * a pair the last evaluation did not mark feasible.
 */

import type { ApiClient } from "./api.js";
import { buildMatrix, equalPositions, importanceComparison } from "./comparisons.js";
import { IMAGE_ROOT, SERVICE_ROOT } from "./hierarchy.js";
import { rankingView, type RankingView } from "./views.js";
import type {
  EvaluationResult,
  FormationDoc,
  HistoryEntry,
  Matrix,
  PreferencesDoc,
  RequirementDoc,
} from "./types.js";

export type WizardStage =
  | "defineFormation"
  | "chooseComponent"
  | "preferences"
  | "inspect"
  | "done";

export class WizardError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "WizardError";
  }
}

export interface ComponentDraft {
  imageRequirements: RequirementDoc[];
  serviceRequirements: RequirementDoc[];
  imagePositions: number[];
  servicePositions: number[];
  importancePosition: number;
  operator: "sum" | "product";
  applyNetworkDelta: boolean;
  mode: "stepwise" | "integrated";
}

function freshDraft(): ComponentDraft {
  return {
    imageRequirements: [],
    serviceRequirements: [],
    imagePositions: equalPositions(IMAGE_ROOT.children.length),
    servicePositions: equalPositions(SERVICE_ROOT.children.length),
    importancePosition: 8,
    operator: "sum",
    applyNetworkDelta: true,
    mode: "stepwise",
  };
}

function allEqual(positions: readonly number[]): boolean {
  return positions.every((p) => p === 8);
}

export class MigrationWizard {
  stage: WizardStage = "defineFormation";
  sessionId = "";
  version = 0;
  currentComponent: string | null = null;
  candidateImages: string[] = [];
  lastResult: EvaluationResult | null = null;
  ranking: RankingView | null = null;
  committed: HistoryEntry[] = [];
  notices: string[] = [];
  private formation: FormationDoc | null = null;
  private readonly drafts = new Map<string, ComponentDraft>();

  constructor(private readonly api: ApiClient) {}

  /** Components not yet committed, in formation order. */
  remainingComponents(): string[] {
    if (!this.formation) return [];
    const done = new Set(this.committed.map((entry) => entry.component));
    return this.formation.components.map((c) => c.id).filter((id) => !done.has(id));
  }

  draft(componentId: string): ComponentDraft {
    let draft = this.drafts.get(componentId);
    if (!draft) {
      draft = freshDraft();
      this.drafts.set(componentId, draft);
    }
    return draft;
  }

  async defineFormation(formation: FormationDoc): Promise<void> {
    const created = await this.api.createSession(formation);
    this.formation = formation;
    this.sessionId = created.sessionId;
    this.version = created.version;
    this.notices = created.warnings;
    this.stage = "chooseComponent";
  }

  async selectComponent(componentId: string): Promise<void> {
    if (this.stage === "defineFormation" || this.stage === "done") {
      throw new WizardError(`cannot select a component while in stage ${this.stage}`);
    }
    const response = await this.api.select(this.sessionId, componentId, this.version);
    this.version = response.version;
    this.currentComponent = componentId;
    this.candidateImages = response.candidateImages;
    this.notices = response.warnings;
    this.lastResult = null;
    this.ranking = null;
    this.stage = "preferences";
  }

  /** The preference document the current draft translates to. */
  buildPreferences(componentId: string): PreferencesDoc {
    const draft = this.draft(componentId);
    const imageMatrices: Record<string, Matrix> = {};
    if (!allEqual(draft.imagePositions)) {
      imageMatrices[IMAGE_ROOT.id] = buildMatrix(IMAGE_ROOT.children.length, draft.imagePositions);
    }
    const serviceMatrices: Record<string, Matrix> = {};
    if (!allEqual(draft.servicePositions)) {
      serviceMatrices[SERVICE_ROOT.id] = buildMatrix(
        SERVICE_ROOT.children.length,
        draft.servicePositions,
      );
    }
    return {
      mode: draft.mode,
      image: {
        requirements: draft.imageRequirements,
        ...(Object.keys(imageMatrices).length ? { matrices: imageMatrices } : {}),
      },
      service: {
        requirements: draft.serviceRequirements,
        ...(Object.keys(serviceMatrices).length ? { matrices: serviceMatrices } : {}),
      },
      combination: {
        operator: draft.operator,
        comparison: importanceComparison(draft.importancePosition),
        applyNetworkDelta: draft.applyNetworkDelta,
      },
    };
  }

  /** Push the draft preferences and evaluate; repeatable at will. */
  async evaluate(): Promise<RankingView> {
    const componentId = this.currentComponent;
    if (!componentId) {
      throw new WizardError("no component selected");
    }
    const put = await this.api.putPreferences(
      this.sessionId,
      componentId,
      this.version,
      this.buildPreferences(componentId),
    );
    this.version = put.version;
    const evaluated = await this.api.evaluate(this.sessionId, componentId);
    this.lastResult = evaluated.result;
    this.ranking = rankingView(evaluated.result);
    this.stage = "inspect";
    return this.ranking;
  }

  /**
   * Commit a pair from the last ranking. Infeasible or unknown pairs
   * are rejected locally; no request leaves the browser for them.
   */
  async commitSelection(image: string, service: string): Promise<void> {
    if (!this.currentComponent || !this.lastResult || !this.ranking) {
      throw new WizardError("nothing evaluated to commit from");
    }
    const row = this.ranking.rows.find((r) => r.image === image && r.service === service);
    if (!row) {
      throw new WizardError(`pair (${image}, ${service}) is not in the ranking`);
    }
    if (!row.selectable) {
      throw new WizardError(`pair (${image}, ${service}) is infeasible and cannot be committed`);
    }
    const response = await this.api.commit(
      this.sessionId,
      this.currentComponent,
      this.version,
      image,
      service,
    );
    this.version = response.version;
    this.committed.push(response.committed);
    this.currentComponent = null;
    this.candidateImages = [];
    this.lastResult = null;
    this.ranking = null;
    this.stage = this.remainingComponents().length === 0 ? "done" : "chooseComponent";
  }

  async history(): Promise<HistoryEntry[]> {
    const response = await this.api.history(this.sessionId);
    return response.history;
  }
}
