// Wire types for the fluence document service (see docs/protocol.md).

export interface SpanJson {
  file: string;
  line: number;
  col: number;
  endLine: number;
  endCol: number;
}

export interface ViewElement {
  elementId: string;
  vertexId: number;
  row?: number;
  col?: number;
  column?: string;
  type?: string;
  text?: string;
  label?: string;
  bar?: string;
  barIndex?: number;
  group?: string;
  value?: number;
}

export type ParagraphRun =
  | { type: "text"; text: string }
  | { type: "value"; elementId: string; vertexId: number; text: string }
  | { type: "view"; name: string; view: ViewJson };

export interface ViewJson {
  kind: "scalar" | "matrix" | "table" | "barChart" | "stackedBar" | "paragraph" | "multi";
  elements?: ViewElement[];
  rows?: number;
  cols?: number;
  columns?: string[];
  title?: string;
  bars?: string[];
  text?: string;
  runs?: ParagraphRun[];
  children?: Record<string, ViewJson>;
}

export interface IntermediateJson {
  vertexId: number;
  paragraph: ViewJson;
  view: ViewJson;
  span: SpanJson | null;
}

export interface GraphExport {
  vertices: { id: number; role: string; valueSummary: string; hasDoc: boolean; span: SpanJson | null }[];
  edges: [number, number][];
}

export interface Bundle {
  protocol: string;
  entry: string;
  program: string;
  output: ViewJson;
  inputs: Record<string, ViewJson>;
  graph: GraphExport;
  intermediates: IntermediateJson[];
}

export type Direction = "upstream" | "downstream";
export type Mode = "persistent" | "transient";

export interface SelectRequest {
  roots: number[];
  direction: Direction;
  mode: Mode;
}

export interface SelectResponse {
  reached: number[];
  intermediates: IntermediateJson[];
  highlights: Record<string, Mode>;
}
