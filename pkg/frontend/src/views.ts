/**
 * View models for the ranking screen. Rows keep the API's order and
 * numbers untouched; the only derived fields are presentation ones
 * (bar widths, badges, selectability).
 */

import type { CombinationRow, EvaluationResult } from "./types.js";

export interface RankingRow {
  rank: number;
  image: string;
  service: string;
  score: number;
  scoreBarPercent: number;
  raw: number;
  imageScore: number | null;
  serviceScore: number | null;
  delta: number;
  feasible: boolean;
  /** Infeasible rows are never selectable for commit. */
  selectable: boolean;
}

export interface RankingView {
  component: string;
  mode: "stepwise" | "integrated";
  rows: RankingRow[];
  relaxationBadges: string[];
  consistencyWarnings: string[];
  otherWarnings: string[];
}

export function rankingView(result: EvaluationResult): RankingView {
  const rows = result.combinations.map((row: CombinationRow, index: number) => ({
    rank: index + 1,
    image: row.image,
    service: row.service,
    score: row.score,
    scoreBarPercent: Math.round(row.score * 1000) / 10,
    raw: row.raw,
    imageScore: row.imageScore,
    serviceScore: row.serviceScore,
    delta: row.delta,
    feasible: row.feasible,
    selectable: row.feasible,
  }));

  const badges: string[] = [];
  if (result.relaxation.image > 0) {
    badges.push(`image requirements relaxed to level ${result.relaxation.image}`);
  }
  if (result.relaxation.service > 0) {
    badges.push(`service requirements relaxed to level ${result.relaxation.service}`);
  }

  const consistency = result.warnings.filter((w) => w.includes("inconsistent"));
  const others = result.warnings.filter((w) => !w.includes("inconsistent"));
  return {
    component: result.component,
    mode: result.mode,
    rows,
    relaxationBadges: badges,
    consistencyWarnings: consistency,
    otherWarnings: others,
  };
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

const formatScore = (value: number): string => value.toFixed(4);

/** Static HTML for a ranking view; interactive wiring happens in main. */
export function renderRankingHtml(view: RankingView): string {
  const badgeHtml = view.relaxationBadges
    .map((badge) => `<span class="badge badge-relaxation">${escapeHtml(badge)}</span>`)
    .join("");
  const warningHtml = [...view.consistencyWarnings, ...view.otherWarnings]
    .map((warning) => `<div class="warning">${escapeHtml(warning)}</div>`)
    .join("");
  const rowsHtml = view.rows
    .map((row) => {
      const classes = row.feasible ? "combo feasible" : "combo infeasible";
      const commitCell = row.selectable
        ? `<button class="commit" data-image="${escapeHtml(row.image)}" data-service="${escapeHtml(row.service)}">commit</button>`
        : `<span class="not-selectable">infeasible</span>`;
      return (
        `<tr class="${classes}" data-rank="${row.rank}">` +
        `<td>${row.rank}</td>` +
        `<td>${escapeHtml(row.image)}</td>` +
        `<td>${escapeHtml(row.service)}</td>` +
        `<td><div class="bar" style="width:${row.scoreBarPercent}%"></div>${formatScore(row.score)}</td>` +
        `<td>${formatScore(row.delta)}</td>` +
        `<td>${commitCell}</td>` +
        `</tr>`
      );
    })
    .join("");
  return (
    `<div class="ranking" data-component="${escapeHtml(view.component)}" data-mode="${view.mode}">` +
    badgeHtml +
    warningHtml +
    `<table><thead><tr><th>#</th><th>image</th><th>service</th><th>score</th><th>delta</th><th></th></tr></thead>` +
    `<tbody>${rowsHtml}</tbody></table></div>`
  );
}
