// Sample histogram as a self-contained SVG string. Bins raw samples from
// the report; no measure values are recomputed here.

export function histogramSvg(samples: number[], width = 360, height = 120): string {
  if (!samples.length) {
    return `<svg width="${width}" height="${height}" role="img"><text x="8" y="20" class="muted">no samples</text></svg>`;
  }
  const lo = Math.min(...samples);
  const hi = Math.max(...samples);
  const binCount = Math.max(1, Math.min(10, samples.length));
  const span = hi - lo || 1;
  const counts = new Array<number>(binCount).fill(0);
  for (const value of samples) {
    const index = Math.min(binCount - 1, Math.floor(((value - lo) / span) * binCount));
    counts[index]++;
  }
  const peak = Math.max(...counts);
  const barWidth = (width - 16) / binCount;
  const bars = counts
    .map((count, i) => {
      const barHeight = Math.round(((height - 24) * count) / peak);
      const x = 8 + i * barWidth;
      const y = height - 16 - barHeight;
      return `<rect x="${x.toFixed(1)}" y="${y}" width="${Math.max(1, barWidth - 2).toFixed(1)}" height="${barHeight}"><title>${count}</title></rect>`;
    })
    .join("");
  return (
    `<svg width="${width}" height="${height}" role="img" class="histogram">` +
    bars +
    `<text x="8" y="${height - 2}" class="muted">${lo}</text>` +
    `<text x="${width - 8}" y="${height - 2}" text-anchor="end" class="muted">${hi}</text>` +
    `</svg>`
  );
}
