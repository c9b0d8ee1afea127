// Single-hue gradients: magnitude is encoded in lightness only, so every
// view stays legible in a monochrome rendering.

const HUE = 214; // one blue hue for all gradient fills
const SATURATION = 62;
const LIGHT_MAX = 96; // value 0
const LIGHT_MIN = 34; // value 1

export function gradientLightness(value: number, max: number): number {
  if (!(max > 0)) return LIGHT_MAX;
  const t = Math.min(Math.max(value / max, 0), 1);
  return Math.round(LIGHT_MAX - t * (LIGHT_MAX - LIGHT_MIN));
}

export function gradientColor(value: number, max: number): string {
  return `hsl(${HUE}, ${SATURATION}%, ${gradientLightness(value, max)}%)`;
}

// dark cells need light text to stay readable
export function gradientTextColor(value: number, max: number): string {
  return gradientLightness(value, max) < 55 ? "#ffffff" : "#1a2433";
}

// Heatmap columns normalize per metric so shade ordering equals value
// ordering within the column.
export function columnShades(values: (number | null)[]): (number | null)[] {
  const defined = values.filter((v): v is number => v !== null);
  if (defined.length === 0) return values.map(() => null);
  const lo = Math.min(...defined);
  const hi = Math.max(...defined);
  return values.map((v) => {
    if (v === null) return null;
    if (hi === lo) return gradientLightness(1, 2);
    return gradientLightness(v - lo, hi - lo);
  });
}
