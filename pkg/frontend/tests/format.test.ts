import { describe, expect, it } from "vitest";

import { formatKt, formatLeakage, formatPercent, formatSigned, headlineClass } from "../src/format";

describe("formatKt", () => {
  it("prints two decimals with thousands grouping", () => {
    expect(formatKt(-3411.55)).toBe("-3,411.55");
    expect(formatKt(2494.93)).toBe("2,494.93");
    expect(formatKt(0)).toBe("0.00");
  });

  it("is stable against float noise around the printed value", () => {
    expect(formatKt(-3411.5499999999997)).toBe("-3,411.55");
    expect(formatKt(-3411.5500000000003)).toBe("-3,411.55");
  });
});

describe("formatPercent", () => {
  it("handles null as n/a", () => {
    expect(formatPercent(null)).toBe("n/a");
    expect(formatPercent(-7.632)).toBe("-7.63%");
  });
});

describe("formatLeakage", () => {
  it("spells out the undefined rate", () => {
    expect(formatLeakage(null)).toBe("undefined");
    expect(formatLeakage(0.1875)).toBe("0.19");
  });
});

describe("formatSigned", () => {
  it("marks gains explicitly", () => {
    expect(formatSigned(35)).toBe("+35.00");
    expect(formatSigned(-16.25)).toBe("-16.25");
  });
});

describe("headlineClass", () => {
  it("follows the red/green convention with a neutral band", () => {
    expect(headlineClass(2494.93)).toBe("backfire");
    expect(headlineClass(-3411.55)).toBe("effective");
    expect(headlineClass(0.004)).toBe("neutral");
    expect(headlineClass(-0.005)).toBe("neutral");
    expect(headlineClass(0.006)).toBe("backfire");
  });
});
