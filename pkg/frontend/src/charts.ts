// Static SVG charts for the dashboard; values are rendered untouched.

export interface BarItem {
  label: string;
  count: number;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function barChart(items: BarItem[], width = 560): string {
  const barHeight = 18;
  const gap = 6;
  const labelWidth = 280;
  const chartWidth = width - labelWidth - 60;
  const height = items.length * (barHeight + gap) + gap;
  const peak = Math.max(1, ...items.map((item) => item.count));
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" font-family="sans-serif" font-size="12">`,
  ];
  let y = gap;
  for (const item of items) {
    const barWidth = Math.round((item.count / peak) * chartWidth);
    parts.push(`<text x="${labelWidth - 6}" y="${y + 13}" text-anchor="end">${esc(item.label)}</text>`);
    parts.push(`<rect x="${labelWidth}" y="${y}" width="${barWidth}" height="${barHeight}" fill="#4c78a8"></rect>`);
    parts.push(`<text x="${labelWidth + barWidth + 4}" y="${y + 13}">${item.count}</text>`);
    y += barHeight + gap;
  }
  parts.push("</svg>");
  return parts.join("");
}

export function lineChart(years: number[], series: Map<string, number[]>, width = 640): string {
  const colors = ["#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#b279a2"];
  const height = 240;
  const padLeft = 40;
  const padBottom = 30;
  const padTop = 10;
  const plotW = width - padLeft - 16;
  const plotH = height - padTop - padBottom;
  let peak = 1;
  for (const values of series.values()) {
    peak = Math.max(peak, ...values);
  }
  const step = plotW / Math.max(1, years.length - 1);
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height + 18 * series.size}" font-family="sans-serif" font-size="11">`,
    `<line x1="${padLeft}" y1="${padTop + plotH}" x2="${padLeft + plotW}" y2="${padTop + plotH}" stroke="#999"></line>`,
    `<line x1="${padLeft}" y1="${padTop}" x2="${padLeft}" y2="${padTop + plotH}" stroke="#999"></line>`,
    `<text x="${padLeft - 6}" y="${padTop + 4}" text-anchor="end">${peak}</text>`,
  ];
  years.forEach((year, i) => {
    if (year % 4 === 0) {
      parts.push(
        `<text x="${(padLeft + i * step).toFixed(1)}" y="${padTop + plotH + 14}" text-anchor="middle">${year}</text>`,
      );
    }
  });
  let idx = 0;
  for (const [label, values] of series) {
    const color = colors[idx % colors.length];
    const points = values
      .map((value, i) => `${(padLeft + i * step).toFixed(1)},${(padTop + plotH - (value / peak) * plotH).toFixed(1)}`)
      .join(" ");
    parts.push(`<polyline fill="none" stroke="${color}" stroke-width="2" points="${points}"></polyline>`);
    const legendY = height + 14 * idx;
    parts.push(`<rect x="${padLeft}" y="${legendY - 9}" width="10" height="10" fill="${color}"></rect>`);
    parts.push(`<text x="${padLeft + 16}" y="${legendY}">${esc(label)}</text>`);
    idx += 1;
  }
  parts.push("</svg>");
  return parts.join("");
}
