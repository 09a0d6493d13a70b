// Shapes mirrored from the service's response schemas (docs/schemas/).

export interface ChartSummary {
  id: string;
  title: string;
  type: string;
  created_at: string;
  rows: number;
  has_svg: boolean;
}

export interface ChartList {
  charts: ChartSummary[];
  page: number;
  page_size: number;
  total: number;
}

export interface ChartDetail {
  metadata: {
    id: string;
    title: string;
    subtitle: string | null;
    footnote: string | null;
    type: string;
    axes: { independent: string | null; dependent: string | null };
    sorted: string | null;
    created_at: string;
    source_note: string | null;
  };
  columns: { name: string; kind: string }[];
  rows: (number | string | null)[][];
  has_svg: boolean;
  extracted_colors: string[];
}

export type AnchorTarget =
  | 'whole_chart'
  | 'title_block'
  | 'axis'
  | 'column'
  | 'data_point';

export interface Anchor {
  target: AnchorTarget;
  row: number | null;
  column: string | null;
  axis: 'independent' | 'dependent' | null;
}

export interface FeatureInfo {
  feature_id: string;
  category: 'general_info' | 'data_fact' | 'context';
  color: string;
  label: string;
  requires_variable: boolean;
  payload: Record<string, unknown>;
  anchors: Anchor[];
}

export interface FeatureCatalog {
  chart_id: string;
  variables: string[];
  features: FeatureInfo[];
}

export interface Segment {
  feature_id: string;
  text: string;
  order_index: number;
  edited: boolean;
  anchors: Anchor[];
}

export interface DescriptionResponse {
  text: string;
  segments: Segment[];
}

export interface RenderRequest {
  selected_feature_ids: string[];
  variable_choices: Record<string, string[]>;
  manual_edits: Record<string, string>;
  context_text: string;
}
