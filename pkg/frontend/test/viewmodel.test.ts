import { describe, expect, it } from 'vitest'

import {
  buildViewModel,
  collapseRules,
  evidenceBoxes,
  glyphLevel,
  initialUiState,
  proportionalWidths,
  FLOW_TRACK_WIDTH,
} from '../src/viewmodel'
import { breastCancerScenario, fiveRuleFixture, makePayload, ruleDoc, metricsDoc } from './fixtures'

describe('collapseRules', () => {
  it('collapses exactly the 7 low-support rules in the case-study scenario', () => {
    const payload = breastCancerScenario()
    const rows = collapseRules(payload.rules, 0.014, 0)
    const groups = rows.filter((r) => r.kind === 'group')
    expect(groups).toHaveLength(1)
    expect(groups[0].indices).toEqual([5, 6, 7, 8, 9, 10, 11])
    // default rule stays its own row
    expect(rows[rows.length - 1]).toEqual({ kind: 'rule', indices: [12] })
  })

  it('keeps everything at zero thresholds', () => {
    const payload = breastCancerScenario()
    const rows = collapseRules(payload.rules, 0, 0)
    expect(rows.every((r) => r.kind === 'rule')).toBe(true)
    expect(rows).toHaveLength(13)
  })

  it('collapses all non-default rules at an impossible threshold', () => {
    const payload = breastCancerScenario()
    const rows = collapseRules(payload.rules, 1.1, 0)
    expect(rows).toHaveLength(2)
    expect(rows[0]).toEqual({ kind: 'group', indices: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11] })
    expect(rows[1].kind).toBe('rule')
  })

  it('is idempotent for fixed thresholds', () => {
    const payload = breastCancerScenario()
    const once = collapseRules(payload.rules, 0.014, 0)
    const twice = collapseRules(payload.rules, 0.014, 0)
    expect(twice).toEqual(once)
  })
})

describe('glyphLevel', () => {
  it('maps the 80/50 thresholds', () => {
    expect(glyphLevel(0.99)).toBe('high')
    expect(glyphLevel(0.8)).toBe('high')
    expect(glyphLevel(0.799)).toBe('medium')
    expect(glyphLevel(0.5)).toBe('medium')
    expect(glyphLevel(0.499)).toBe('low')
    expect(glyphLevel(0.0)).toBe('low')
  })
})

describe('proportionalWidths', () => {
  it('keeps every width within 1px of the exact proportion', () => {
    const counts = [37, 11, 2, 50]
    const widths = proportionalWidths(counts, FLOW_TRACK_WIDTH)
    const total = counts.reduce((a, b) => a + b, 0)
    counts.forEach((count, i) => {
      const exact = (count / total) * FLOW_TRACK_WIDTH
      expect(Math.abs(widths[i] - exact)).toBeLessThanOrEqual(1)
    })
    expect(widths.reduce((a, b) => a + b, 0)).toBe(FLOW_TRACK_WIDTH)
  })

  it('gives zero width to zero counts', () => {
    expect(proportionalWidths([0, 10], 80)[0]).toBe(0)
  })

  it('handles an all-zero row', () => {
    expect(proportionalWidths([0, 0], 80)).toEqual([0, 0])
  })
})

describe('evidenceBoxes', () => {
  it('lays out solid and striped boxes left to right', () => {
    const boxes = evidenceBoxes([[30, 5], [12, 3]], 120)
    expect(boxes.map((b) => [b.classIndex, b.correct])).toEqual([
      [0, true], [0, false], [1, true], [1, false],
    ])
    for (let i = 1; i < boxes.length; i++) {
      expect(boxes[i].x).toBe(boxes[i - 1].x + boxes[i - 1].width)
    }
  })

  it('drops empty segments', () => {
    const boxes = evidenceBoxes([[30, 0], [0, 3]], 120)
    expect(boxes.map((b) => [b.classIndex, b.correct])).toEqual([
      [0, true], [1, false],
    ])
  })
})

describe('buildViewModel', () => {
  it('builds one row per rule plus collapsed groups', () => {
    const payload = breastCancerScenario()
    const state = { ...initialUiState(payload), minSupport: 0.014 }
    const vm = buildViewModel(payload, state)
    expect(vm.rows).toHaveLength(7) // 5 kept + 1 group + default
    const group = vm.rows.find((r) => r.kind === 'group')
    expect(group?.groupIndices).toEqual([5, 6, 7, 8, 9, 10, 11])
  })

  it('expanding a collapsed group restores its rules', () => {
    const payload = breastCancerScenario()
    const state = { ...initialUiState(payload), minSupport: 0.014 }
    const collapsedVm = buildViewModel(payload, state)
    const groupRow = collapsedVm.rows.findIndex((r) => r.kind === 'group')
    state.expandedGroups.add(groupRow)
    const expandedVm = buildViewModel(payload, state)
    expect(expandedVm.rows).toHaveLength(13)
    expect(expandedVm.rows.every((r) => r.kind === 'rule')).toBe(true)
  })

  it('columns follow the payload feature order', () => {
    const payload = fiveRuleFixture()
    const vm = buildViewModel(payload, initialUiState(payload))
    expect(vm.columns.map((c) => c.name)).toEqual(['f0', 'f1'])
  })

  it('marks the fired rule when a probe is active', () => {
    const payload = fiveRuleFixture()
    const state = initialUiState(payload)
    state.probe = {
      teacher_prediction: 1,
      teacher_label: 'pos',
      rule_prediction: 1,
      rule_label: 'pos',
      fired_rule: 2,
      satisfaction: payload.rules.map((r) => r.clauses.map(() => true)),
      agreement: true,
    }
    const vm = buildViewModel(payload, state)
    const highlighted = vm.rows.filter((r) => r.highlighted)
    expect(highlighted).toHaveLength(1)
    expect(highlighted[0].ruleIndex).toBe(2)
  })

  it('refuses more than 10 classes', () => {
    const classes = Array.from({ length: 11 }, (_, i) => `c${i}`)
    const payload = makePayload(
      [ruleDoc(0, { is_default: true, clauses: [], cells: {}, metrics: metricsDoc() })],
      classes,
    )
    expect(() => buildViewModel(payload, initialUiState(payload))).toThrow(/10 classes/)
  })

  it('flags the zero-state on empty selections', () => {
    const payload = { ...fiveRuleFixture(), empty_selection: true }
    const vm = buildViewModel(payload, initialUiState(payload))
    expect(vm.emptySelection).toBe(true)
    expect(vm.rows).toHaveLength(0)
  })
})
