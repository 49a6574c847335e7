// Payload documents served by the engine (/api/v1/sessions/{id}/matrix)
// and the client-side view-model shapes derived from them.

export interface ClauseDoc {
  feature: string
  lo?: number | null
  hi?: number | null
  category?: string
  description: string
}

export interface Distribution {
  // continuous: per-class histogram over shared edges
  edges?: number[]
  // categorical: per-class counts per category
  counts: number[][]
}

export interface RuleMetricsDoc {
  support_count: number
  support_fraction: number
  confidence: number
  rule_fidelity: number
  empty: boolean
  evidence: [number, number][]       // per predicted class: [correct, wrong]
  flow_in: number[]                  // per true class, entering this rule
  captured: number[]                 // per true class, captured here
}

export interface CellDoc {
  clause: ClauseDoc
  distribution: Distribution
}

export interface RuleDoc {
  index: number
  is_default: boolean
  clauses: ClauseDoc[]
  output: number[]
  prediction: number
  prediction_label: string
  capture_count: number
  metrics: RuleMetricsDoc
  fidelity_level: 'high' | 'medium' | 'low'
  cells: Record<string, CellDoc>
}

export interface FeatureDoc {
  index: number
  name: string
  kind: 'continuous' | 'categorical'
  importance: number
  distribution: Distribution
  range?: [number, number] | null
  cuts?: number[]
  categories?: string[]
}

export interface RowDoc {
  type: 'rule' | 'group'
  rule_index?: number
  rule_indices?: number[]
  support_count?: number
  captured?: number[]
}

export interface MatrixPayload {
  v: number
  dataset: string
  n: number
  classes: string[]
  conditional: boolean
  show_stripes: boolean
  fidelity: number
  teacher_accuracy: number
  features: FeatureDoc[]
  rules: RuleDoc[]
  rows: RowDoc[]
  filters: {
    min_support: number
    min_confidence: number
    data_filter: unknown
  }
  empty_selection?: boolean
}

export interface ProbeResponse {
  teacher_prediction: number
  teacher_label: string
  rule_prediction: number
  rule_label: string
  fired_rule: number
  satisfaction: boolean[][]
  agreement: boolean
}

// --- view model ------------------------------------------------------------

export type GlyphLevel = 'high' | 'medium' | 'low'

export interface EvidenceBox {
  classIndex: number
  correct: boolean   // wrong-prediction boxes render striped
  count: number
  width: number      // px
  x: number          // px offset inside the evidence track
}

export interface FlowSegment {
  classIndex: number
  count: number
  width: number      // px, proportional to count
}

export interface MatrixRowVM {
  kind: 'rule' | 'group'
  ruleIndex?: number
  groupIndices?: number[]
  label: string
  outputs: number[]
  prediction: number
  confidence: number
  supportCount: number
  glyph: { level: GlyphLevel; fidelity: number }
  evidence: EvidenceBox[]
  flowIn: FlowSegment[]
  flowCaptured: FlowSegment[]
  cells: Map<number, CellVM>   // feature index -> cell
  expanded: boolean
  highlighted: boolean
}

export interface CellVM {
  featureIndex: number
  description: string
  interval?: { lo: number | null; hi: number | null }
  category?: string
  distribution: Distribution
  satisfied?: boolean[]        // per clause when probing
  expanded?: boolean           // click-to-expand state
}

export interface MatrixViewModel {
  classes: string[]
  columns: FeatureDoc[]        // importance order
  rows: MatrixRowVM[]
  fidelity: number
  teacherAccuracy: number
  dataset: string
  conditional: boolean
  showStripes: boolean
  minSupport: number
  minConfidence: number
  probe: ProbeResponse | null
  emptySelection: boolean
}

export interface UiState {
  minSupport: number
  minConfidence: number
  dataset: 'train' | 'test'
  conditional: boolean
  showStripes: boolean
  expandedGroups: Set<number>  // index into rows
  expandedCells: Set<string>   // "rule:feature"
  probe: ProbeResponse | null
}
