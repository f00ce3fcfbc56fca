import { writeFileSync } from "node:fs";
import * as echarts from "echarts";

export const OPERATOR_STYLE = { color: "#1f4fd8", type: "dashed" as const };
export const PHASE_STYLE = { color: "#d62728", type: "solid" as const };

/** Render an echarts option to an SVG file without a browser. */
export function renderSvg(
  option: echarts.EChartsOption,
  outPath: string,
  width = 900,
  height = 700,
): void {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  chart.setOption({ animation: false, ...option });
  const svg = chart.renderToSVGString();
  chart.dispose();
  writeFileSync(outPath, svg, "utf8");
}
