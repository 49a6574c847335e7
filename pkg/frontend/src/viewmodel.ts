// Builds the render model from a matrix payload plus client-side UI state.

import type {
  CellVM,
  FlowSegment,
  EvidenceBox,
  GlyphLevel,
  MatrixPayload,
  MatrixRowVM,
  MatrixViewModel,
  ProbeResponse,
  RuleDoc,
  UiState,
} from './types'

export const MAX_CLASSES = 10

export const FIDELITY_HIGH = 0.8
export const FIDELITY_MEDIUM = 0.5

export const EVIDENCE_TRACK_WIDTH = 120
export const FLOW_TRACK_WIDTH = 80

export function glyphLevel(fidelity: number): GlyphLevel {
  if (fidelity >= FIDELITY_HIGH) return 'high'
  if (fidelity >= FIDELITY_MEDIUM) return 'medium'
  return 'low'
}

export interface CollapsedRow {
  kind: 'rule' | 'group'
  indices: number[]
}

/** Collapse consecutive rules failing either threshold; the default rule
 *  (last position) always stays visible. */
export function collapseRules(
  rules: RuleDoc[],
  minSupport: number,
  minConfidence: number,
): CollapsedRow[] {
  const rows: CollapsedRow[] = []
  let run: number[] = []
  const flush = () => {
    if (run.length) {
      rows.push({ kind: 'group', indices: run })
      run = []
    }
  }
  rules.forEach((rule, i) => {
    const isDefault = i === rules.length - 1
    const passes =
      isDefault ||
      (rule.metrics.support_fraction >= minSupport &&
        rule.metrics.confidence >= minConfidence)
    if (passes) {
      flush()
      rows.push({ kind: 'rule', indices: [i] })
    } else {
      run.push(i)
    }
  })
  flush()
  return rows
}

/** Per-class widths proportional to counts: total width is fixed per track,
 *  each segment rounded to whole pixels with the remainder spread from the
 *  largest segment down (keeps every width within 1px of exact). */
export function proportionalWidths(counts: number[], trackWidth: number): number[] {
  const total = counts.reduce((a, b) => a + b, 0)
  if (total === 0) return counts.map(() => 0)
  const exact = counts.map((c) => (c / total) * trackWidth)
  const widths = exact.map(Math.floor)
  let leftover = trackWidth - widths.reduce((a, b) => a + b, 0)
  const order = exact
    .map((w, i) => ({ frac: w - Math.floor(w), i }))
    .sort((a, b) => b.frac - a.frac)
  for (const { i } of order) {
    if (leftover <= 0) break
    if (counts[i] === 0) continue
    widths[i] += 1
    leftover -= 1
  }
  return widths
}

function flowSegments(counts: number[], trackWidth: number): FlowSegment[] {
  const widths = proportionalWidths(counts, trackWidth)
  return counts.map((count, classIndex) => ({
    classIndex,
    count,
    width: widths[classIndex],
  }))
}

/** Evidence boxes: per predicted class a solid (correct) and a striped
 *  (wrong) box, laid out horizontally, widths proportional to counts. */
export function evidenceBoxes(
  evidence: [number, number][],
  trackWidth: number,
): EvidenceBox[] {
  const flat: { classIndex: number; correct: boolean; count: number }[] = []
  evidence.forEach(([correct, wrong], classIndex) => {
    flat.push({ classIndex, correct: true, count: correct })
    flat.push({ classIndex, correct: false, count: wrong })
  })
  const widths = proportionalWidths(flat.map((b) => b.count), trackWidth)
  const boxes: EvidenceBox[] = []
  let x = 0
  flat.forEach((b, i) => {
    if (b.count > 0) {
      boxes.push({ ...b, width: widths[i], x })
      x += widths[i]
    }
  })
  return boxes
}

function ruleCells(rule: RuleDoc, probe: ProbeResponse | null,
                   expandedCells: Set<string>): Map<number, CellVM> {
  const cells = new Map<number, CellVM>()
  for (const [key, cell] of Object.entries(rule.cells)) {
    const featureIndex = Number(key)
    const vm: CellVM = {
      featureIndex,
      description: cell.clause.description,
      distribution: cell.distribution,
      expanded: expandedCells.has(`${rule.index}:${featureIndex}`),
    }
    if (cell.clause.category !== undefined) {
      vm.category = cell.clause.category
    } else {
      vm.interval = { lo: cell.clause.lo ?? null, hi: cell.clause.hi ?? null }
    }
    cells.set(featureIndex, vm)
  }
  if (probe && rule.index < probe.satisfaction.length) {
    const sat = probe.satisfaction[rule.index]
    let slot = 0
    for (const clause of rule.clauses) {
      const cell = cells.get(featureIndexOf(rule, clause.feature))
      if (cell) cell.satisfied = [sat[slot]]
      slot += 1
    }
  }
  return cells
}

function featureIndexOf(rule: RuleDoc, name: string): number {
  for (const [key, cell] of Object.entries(rule.cells)) {
    if (cell.clause.feature === name) return Number(key)
  }
  return -1
}

function ruleLabel(rule: RuleDoc): string {
  if (rule.is_default) return 'DEFAULT'
  return rule.clauses.map((c) => c.description).join(' AND ')
}

export function buildViewModel(payload: MatrixPayload, state: UiState): MatrixViewModel {
  if (payload.classes.length > MAX_CLASSES) {
    throw new Error(
      `the qualitative color scheme supports at most ${MAX_CLASSES} classes; ` +
        `got ${payload.classes.length}`,
    )
  }
  const rows: MatrixRowVM[] = []
  if (!payload.empty_selection) {
    const collapsed = collapseRules(payload.rules, state.minSupport, state.minConfidence)
    collapsed.forEach((row, rowIndex) => {
      if (row.kind === 'group' && !state.expandedGroups.has(rowIndex)) {
        const members = row.indices.map((i) => payload.rules[i])
        const captured = payload.classes.map((_, c) =>
          members.reduce((acc, r) => acc + r.metrics.captured[c], 0),
        )
        rows.push({
          kind: 'group',
          groupIndices: row.indices,
          label: `${row.indices.length} rules collapsed`,
          outputs: [],
          prediction: -1,
          confidence: 0,
          supportCount: members.reduce((acc, r) => acc + r.metrics.support_count, 0),
          glyph: { level: 'low', fidelity: 0 },
          evidence: [],
          flowIn: flowSegments(captured, FLOW_TRACK_WIDTH),
          flowCaptured: flowSegments(captured, FLOW_TRACK_WIDTH),
          cells: new Map(),
          expanded: false,
          highlighted: false,
        })
        return
      }
      for (const i of row.indices) {
        const rule = payload.rules[i]
        rows.push({
          kind: 'rule',
          ruleIndex: rule.index,
          label: ruleLabel(rule),
          outputs: rule.output,
          prediction: rule.prediction,
          confidence: rule.metrics.confidence,
          supportCount: rule.metrics.support_count,
          glyph: { level: glyphLevel(rule.metrics.rule_fidelity), fidelity: rule.metrics.rule_fidelity },
          evidence: evidenceBoxes(rule.metrics.evidence, EVIDENCE_TRACK_WIDTH),
          flowIn: flowSegments(rule.metrics.flow_in, FLOW_TRACK_WIDTH),
          flowCaptured: flowSegments(rule.metrics.captured, FLOW_TRACK_WIDTH),
          cells: ruleCells(rule, state.probe, state.expandedCells),
          expanded: state.expandedGroups.size > 0,
          highlighted: state.probe !== null && state.probe.fired_rule === rule.index,
        })
      }
    })
  }
  return {
    classes: payload.classes,
    columns: payload.features,
    rows,
    fidelity: payload.fidelity,
    teacherAccuracy: payload.teacher_accuracy,
    dataset: payload.dataset,
    conditional: state.conditional,
    showStripes: state.showStripes,
    minSupport: state.minSupport,
    minConfidence: state.minConfidence,
    probe: state.probe,
    emptySelection: payload.empty_selection === true,
  }
}

export function initialUiState(payload: MatrixPayload): UiState {
  return {
    minSupport: payload.filters.min_support,
    minConfidence: payload.filters.min_confidence,
    dataset: payload.dataset === 'test' ? 'test' : 'train',
    conditional: payload.conditional,
    showStripes: payload.show_stripes,
    expandedGroups: new Set(),
    expandedCells: new Set(),
    probe: null,
  }
}
