import { describe, expect, it } from "vitest";

import {
  EQUAL_POSITION,
  SAATY_STEPS,
  SLIDER_STEPS,
  buildMatrix,
  equalPositions,
  importanceComparison,
  pairIndices,
  sliderLabel,
  sliderValue,
} from "../src/comparisons.js";

const ON_SCALE = new Set<number>([
  ...Array.from({ length: 9 }, (_, k) => k + 1),
  ...Array.from({ length: 9 }, (_, k) => 1 / (k + 1)),
]);

function isOnScale(value: number): boolean {
  for (const allowed of ON_SCALE) {
    if (Math.abs(value - allowed) <= 1e-9) return true;
  }
  return false;
}

describe("slider scale", () => {
  it("has 17 steps from 9 down to 1/9 with 1 in the middle", () => {
    expect(SLIDER_STEPS).toBe(17);
    expect(SAATY_STEPS[0]).toBe(9);
    expect(SAATY_STEPS[EQUAL_POSITION]).toBe(1);
    expect(SAATY_STEPS[16]).toBeCloseTo(1 / 9, 12);
    expect(() => sliderValue(17)).toThrow(RangeError);
  });

  it("labels positions for humans", () => {
    expect(sliderLabel(EQUAL_POSITION)).toBe("equal");
    expect(sliderLabel(6)).toBe("left 3x");
    expect(sliderLabel(10)).toBe("right 3x");
  });
});

describe("matrix construction", () => {
  it("is reciprocal by construction for every position combination", () => {
    for (let count = 2; count <= 5; count += 1) {
      const pairs = pairIndices(count);
      const positions = pairs.map((_, index) => (index * 5) % SLIDER_STEPS);
      const matrix = buildMatrix(count, positions);
      for (let i = 0; i < count; i += 1) {
        expect(matrix[i]![i]).toBe(1);
        for (let j = 0; j < count; j += 1) {
          expect(Math.abs(matrix[i]![j]! - 1 / matrix[j]![i]!)).toBeLessThanOrEqual(1e-9);
          expect(isOnScale(matrix[i]![j]!)).toBe(true);
        }
      }
    }
  });

  it("produces the all-ones matrix at the equal positions", () => {
    const matrix = buildMatrix(4, equalPositions(4));
    expect(matrix).toEqual([
      [1, 1, 1, 1],
      [1, 1, 1, 1],
      [1, 1, 1, 1],
      [1, 1, 1, 1],
    ]);
  });

  it("covers all 17 values through the importance slider", () => {
    for (let position = 0; position < SLIDER_STEPS; position += 1) {
      const matrix = importanceComparison(position);
      expect(matrix[0]![1]).toBeCloseTo(SAATY_STEPS[position]!, 12);
      expect(matrix[1]![0]).toBeCloseTo(1 / SAATY_STEPS[position]!, 12);
      expect(isOnScale(matrix[0]![1]!)).toBe(true);
    }
  });

  it("rejects position lists of the wrong length", () => {
    expect(() => buildMatrix(3, [8])).toThrow(RangeError);
  });
});
