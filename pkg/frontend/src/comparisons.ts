/**
 * Slider-based pairwise comparison entry.
 *
 * Every sibling pair gets one 17-step slider; the position indexes the
 * judgment scale from "left 9 times as important" down to "right 9
 * times as important". Matrices built here are reciprocal by
 * construction and only ever contain on-scale values, so the server's
 * validation cannot reject them.
 */

import type { Matrix } from "./types.js";

/** Scale values by slider position: 9, 8, ..., 2, 1, 1/2, ..., 1/9. */
export const SAATY_STEPS: readonly number[] = [
  9, 8, 7, 6, 5, 4, 3, 2, 1,
  1 / 2, 1 / 3, 1 / 4, 1 / 5, 1 / 6, 1 / 7, 1 / 8, 1 / 9,
];

export const SLIDER_STEPS = SAATY_STEPS.length;
export const EQUAL_POSITION = 8;

export function sliderValue(position: number): number {
  const value = SAATY_STEPS[position];
  if (value === undefined) {
    throw new RangeError(`slider position ${position} outside 0..${SLIDER_STEPS - 1}`);
  }
  return value;
}

/** Human label for a position, e.g. "left 3x" / "equal" / "right 5x". */
export function sliderLabel(position: number): string {
  const value = sliderValue(position);
  if (value === 1) return "equal";
  return value > 1 ? `left ${value}x` : `right ${1 / value}x`;
}

/** Sibling pairs of an n-item node in row-major order: (0,1), (0,2), ... */
export function pairIndices(count: number): Array<[number, number]> {
  const pairs: Array<[number, number]> = [];
  for (let i = 0; i < count; i += 1) {
    for (let j = i + 1; j < count; j += 1) {
      pairs.push([i, j]);
    }
  }
  return pairs;
}

/**
 * Build the full reciprocal matrix for one node from per-pair slider
 * positions (row-major pair order, one position per pair).
 */
export function buildMatrix(itemCount: number, positions: readonly number[]): Matrix {
  const pairs = pairIndices(itemCount);
  if (positions.length !== pairs.length) {
    throw new RangeError(
      `node with ${itemCount} children needs ${pairs.length} slider positions, got ${positions.length}`,
    );
  }
  const matrix: Matrix = Array.from({ length: itemCount }, (_, i) =>
    Array.from({ length: itemCount }, (_, j) => (i === j ? 1 : 0)),
  );
  pairs.forEach(([i, j], pairIndex) => {
    const value = sliderValue(positions[pairIndex]!);
    matrix[i]![j] = value;
    matrix[j]![i] = 1 / value;
  });
  return matrix;
}

/** Order-2 comparison for the image-versus-service importance slider. */
export function importanceComparison(position: number): Matrix {
  return buildMatrix(2, [position]);
}

/** All sliders at "equal": the identity judgment (uniform weights). */
export function equalPositions(itemCount: number): number[] {
  return pairIndices(itemCount).map(() => EQUAL_POSITION);
}
