// Display formatting. Mirrors the server's duration convention so that
// text shown next to server-rendered annotations is string-identical.

const BASIC = ["flow", "sojourn", "wait", "service", "sync"];
const FREQUENCY = ["object_freq", "object_type_freq"];

export function formatDuration(seconds: number): string {
  if (seconds < 0) return "-" + formatDuration(-seconds);
  let ms = Math.round(seconds * 1000);
  const days = Math.floor(ms / 86_400_000);
  ms -= days * 86_400_000;
  const hours = Math.floor(ms / 3_600_000);
  ms -= hours * 3_600_000;
  const minutes = Math.floor(ms / 60_000);
  ms -= minutes * 60_000;
  const secs = ms / 1000;
  const parts: string[] = [];
  if (days) parts.push(`${days}d`);
  if (hours) parts.push(`${hours}h`);
  if (minutes) parts.push(`${minutes}m`);
  if (secs) {
    const text = secs.toFixed(3).replace(/0+$/, "").replace(/\.$/, "");
    parts.push(`${text}s`);
  }
  return parts.length ? parts.join(" ") : "0s";
}

export function isFrequencyMeasure(key: string): boolean {
  return FREQUENCY.includes(key);
}

export function formatMeasureValue(key: string, value: number | null): string {
  if (value === null || value === undefined) return "n/a";
  if (isFrequencyMeasure(key)) return String(value);
  return formatDuration(value);
}

/** All measure keys offered for a log with the given object types. */
export function measureKeysFor(objectTypes: string[]): string[] {
  const keys = [...BASIC];
  for (const ot of [...objectTypes].sort()) keys.push(`pool:${ot}`);
  for (const ot of [...objectTypes].sort()) keys.push(`lag:${ot}`);
  keys.push(...FREQUENCY);
  return keys;
}
