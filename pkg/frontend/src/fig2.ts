import { join } from "node:path";
import type { EChartsOption } from "echarts";
import { loadCsv, requireColumns } from "./csv.js";
import { PHASE_STYLE, renderSvg } from "./render.js";

export const FIG2_RUN_FILE = "fig2_run.csv";

/**
 * Two-panel figure: speed-limit time against inverse temperature (left,
 * from the sweep CSV; refused legs appear as gaps) and the phase-space
 * speed against time (right, from the run CSV).
 */
export function renderFig2(dir: string, sweepPath: string, outPath: string): void {
  const run = loadCsv(join(dir, FIG2_RUN_FILE));
  const [t, speed] = requireColumns(run, ["t", "v_qsl_w_p1"]);
  const sweep = loadCsv(sweepPath);
  const [betas, taus] = requireColumns(sweep, ["beta", "tau_qsl_w"]);
  const sweepPoints = betas
    .map((b, i) => [b, taus[i]])
    .filter((point) => Number.isFinite(point[1]));

  const option: EChartsOption = {
    title: [
      { text: "speed-limit time vs inverse temperature", left: "6%", top: "2%", textStyle: { fontSize: 13 } },
      { text: "phase-space speed vs time", left: "56%", top: "2%", textStyle: { fontSize: 13 } },
    ],
    grid: [
      { left: "8%", width: "38%", top: "14%", bottom: "14%" },
      { left: "58%", width: "38%", top: "14%", bottom: "14%" },
    ],
    xAxis: [
      {
        gridIndex: 0,
        type: "log",
        name: "β",
        nameLocation: "middle",
        nameGap: 24,
      },
      { gridIndex: 1, name: "t", nameLocation: "middle", nameGap: 24 },
    ],
    yAxis: [{ gridIndex: 0 }, { gridIndex: 1 }],
    series: [
      {
        name: "speed-limit time",
        type: "line",
        xAxisIndex: 0,
        yAxisIndex: 0,
        data: sweepPoints,
        lineStyle: { color: PHASE_STYLE.color, width: 2 },
        itemStyle: { color: PHASE_STYLE.color },
        symbol: "circle",
        symbolSize: 7,
      },
      {
        name: "phase-space speed",
        type: "line",
        xAxisIndex: 1,
        yAxisIndex: 1,
        showSymbol: false,
        data: t.map((v, i) => [v, speed[i]]),
        lineStyle: { color: PHASE_STYLE.color, type: PHASE_STYLE.type, width: 2 },
        itemStyle: { color: PHASE_STYLE.color },
      },
    ],
  };
  renderSvg(option, outPath, 980, 460);
}
