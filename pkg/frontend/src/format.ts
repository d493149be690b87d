// Display formatting. The UI never recomputes results; every number shown
// is an API response field passed through one of these fixed formatters.

import type { RegionClass } from "./api";

const KT = new Intl.NumberFormat("en-US", {
  minimumFractionDigits: 2,
  maximumFractionDigits: 2,
});

export function formatKt(value: number): string {
  return KT.format(value);
}

export function formatPercent(value: number | null): string {
  return value === null ? "n/a" : `${KT.format(value)}%`;
}

export function formatLeakage(value: number | null): string {
  return value === null ? "undefined" : KT.format(value);
}

export function formatSigned(value: number): string {
  return value > 0 ? `+${KT.format(value)}` : KT.format(value);
}

export const CLASS_LABEL: Record<RegionClass, string> = {
  backfire: "backfires (emissions rise)",
  effective: "effective (emissions fall)",
  neutral: "neutral",
};

export function headlineClass(deltaKt: number): RegionClass {
  if (Math.abs(deltaKt) <= 0.005) return "neutral";
  return deltaKt > 0 ? "backfire" : "effective";
}
