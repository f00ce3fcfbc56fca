import { join } from "node:path";
import type { EChartsOption, SeriesOption } from "echarts";
import { loadCsv, requireColumns } from "./csv.js";
import { OPERATOR_STYLE, PHASE_STYLE, renderSvg } from "./render.js";

export const FIG1_TAUS = ["0.1", "1", "5", "10"];

export function fig1FileName(tau: string): string {
  return `fig1_tau${tau}.csv`;
}

interface PanelData {
  tau: string;
  scaledTime: number[];
  operator: number[];
  phase: number[];
}

function loadPanel(dir: string, tau: string): PanelData {
  const table = loadCsv(join(dir, fig1FileName(tau)));
  const [t, opNorm, phNorm] = requireColumns(table, [
    "t",
    "v_qsl_p1_norm",
    "v_qsl_w_p1_norm",
  ]);
  const tauValue = t[t.length - 1];
  return {
    tau,
    scaledTime: t.map((v) => (tauValue > 0 ? v / tauValue : v)),
    operator: opNorm,
    phase: phNorm,
  };
}

function panelLayout(count: number): Array<Record<string, string>> {
  if (count === 1) {
    return [{ left: "10%", right: "6%", top: "12%", bottom: "12%" }];
  }
  const positions = [];
  for (let i = 0; i < count; i++) {
    const row = Math.floor(i / 2);
    const col = i % 2;
    positions.push({
      left: col === 0 ? "8%" : "56%",
      width: "36%",
      top: row === 0 ? "10%" : "58%",
      height: "32%",
    });
  }
  return positions;
}

function buildOption(panels: PanelData[]): EChartsOption {
  const grids = panelLayout(panels.length);
  const series: SeriesOption[] = [];
  const xAxes = [];
  const yAxes = [];
  const titles = [];
  for (let i = 0; i < panels.length; i++) {
    const panel = panels[i];
    xAxes.push({
      gridIndex: i,
      min: 0,
      max: 1,
      name: "t/τ",
      nameLocation: "middle" as const,
      nameGap: 22,
    });
    yAxes.push({ gridIndex: i, min: 0, max: 1 });
    titles.push({
      text: `τ = ${panel.tau}`,
      textStyle: { fontSize: 13 },
      left: grids[i].left,
      top: `${parseFloat(grids[i].top) - 6}%`,
    });
    series.push(
      {
        name: "operator-space speed (normalized)",
        type: "line",
        xAxisIndex: i,
        yAxisIndex: i,
        showSymbol: false,
        lineStyle: { color: OPERATOR_STYLE.color, type: OPERATOR_STYLE.type, width: 2 },
        itemStyle: { color: OPERATOR_STYLE.color },
        data: panel.scaledTime.map((t, k) => [t, panel.operator[k]]),
      },
      {
        name: "phase-space speed (normalized)",
        type: "line",
        xAxisIndex: i,
        yAxisIndex: i,
        showSymbol: false,
        lineStyle: { color: PHASE_STYLE.color, type: PHASE_STYLE.type, width: 2 },
        itemStyle: { color: PHASE_STYLE.color },
        data: panel.scaledTime.map((t, k) => [t, panel.phase[k]]),
      },
    );
  }
  return {
    title: titles,
    grid: grids,
    xAxis: xAxes,
    yAxis: yAxes,
    series,
    legend: { bottom: 0, data: series.slice(0, 2).map((s) => s.name as string) },
  };
}

/**
 * Four-panel comparison figure from a fig1 output directory.
 * With `single` set, renders that run alone as a one-panel figure.
 */
export function renderFig1(dir: string, outPath: string, single?: string): void {
  let panels: PanelData[];
  if (single !== undefined) {
    const tau = single.replace(/^fig1_tau/, "").replace(/\.csv$/, "");
    panels = [loadPanel(dir, tau)];
  } else {
    panels = FIG1_TAUS.map((tau) => loadPanel(dir, tau));
  }
  renderSvg(buildOption(panels), outPath, 900, panels.length === 1 ? 520 : 740);
}
