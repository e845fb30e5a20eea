/**
 * Payload types of the engine's HTTP API, mirrored field by field.
 * The UI never computes scores; these are display contracts only.
 */

export interface ImageDoc {
  id: string;
  feature: string;
  numerical: Record<string, number>;
  nonNumerical: Record<string, string>;
}

export interface ServiceDoc {
  id: string;
  provider: string;
  location: string;
  numerical: Record<string, number>;
  nonNumerical: Record<string, string>;
}

export interface FormationDoc {
  components: Array<{ id: string; feature: string }>;
  links: Array<{
    a: string;
    b: string;
    costs?: { localRecv: number; localSend: number; inetRecv: number; inetSend: number };
  }>;
}

export interface RequirementDoc {
  attr: string;
  kind: "max" | "min" | "equals" | "oneOf";
  value?: number | string;
  values?: string[];
}

/** Row-major pairwise comparison matrix. */
export type Matrix = number[][];

export interface SidePreferencesDoc {
  requirements?: RequirementDoc[];
  select?: string[];
  matrices?: Record<string, Matrix>;
  relax?: boolean;
}

export interface PreferencesDoc {
  mode?: "stepwise" | "integrated";
  image?: SidePreferencesDoc;
  service?: SidePreferencesDoc;
  combination?: {
    operator?: "sum" | "product";
    comparison?: Matrix;
    imageWeight?: number;
    serviceWeight?: number;
    applyNetworkDelta?: boolean;
  };
}

export interface RankedAlternative {
  id: string;
  score: number;
  raw: number;
  relaxationLevel: number;
  warnings: string[];
}

export interface CombinationRow {
  image: string;
  service: string;
  score: number;
  raw: number;
  imageScore: number | null;
  serviceScore: number | null;
  delta: number;
  feasible: boolean;
}

export interface EvaluationResult {
  component: string;
  mode: "stepwise" | "integrated";
  policy: {
    operator: "sum" | "product";
    imageWeight: number;
    serviceWeight: number;
    applyNetworkDelta: boolean;
  };
  relaxation: { image: number; service: number };
  images: { alternatives: RankedAlternative[] };
  services: { alternatives: RankedAlternative[] };
  combinations: CombinationRow[];
  warnings: string[];
}

export interface SessionCreated {
  sessionId: string;
  version: number;
  warnings: string[];
}

export interface SelectResponse {
  version: number;
  component: string;
  candidateImages: string[];
  warnings: string[];
}

export interface CommitResponse {
  version: number;
  committed: { component: string; image: string; service: string; score: number; at: string };
}

export interface HistoryEntry {
  component: string;
  image: string;
  service: string;
  score: number;
  at: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: string;
}
