import { describe, expect, it } from 'vitest'

import { renderMatrix, renderGlyph, renderEvidence, renderFlow } from '../src/render'
import { buildViewModel, initialUiState } from '../src/viewmodel'
import { breastCancerScenario, fiveRuleFixture } from './fixtures'

function mountFixture(payload = fiveRuleFixture(), state = initialUiState(payload)) {
  const container = document.createElement('div')
  renderMatrix(buildViewModel(payload, state), container)
  return container
}

describe('renderMatrix', () => {
  it('renders one row per kept rule plus group rows', () => {
    const payload = breastCancerScenario()
    const state = { ...initialUiState(payload), minSupport: 0.014 }
    const container = document.createElement('div')
    renderMatrix(buildViewModel(payload, state), container)
    expect(container.querySelectorAll('[data-role="rule-row"]')).toHaveLength(6)
    expect(container.querySelectorAll('[data-role="group-row"]')).toHaveLength(1)
    const group = container.querySelector('[data-role="group-row"]')!
    expect(group.getAttribute('data-rules')).toBe('5,6,7,8,9,10,11')
  })

  it('cell tooltips carry the clause description verbatim', () => {
    const container = mountFixture()
    const cell = container.querySelector('[data-role="clause-cell"]')!
    expect(cell.getAttribute('title')).toBe('1 <= f0 < 2 (#0)')
  })

  it('probe highlight lands on the fired rule row', () => {
    const payload = fiveRuleFixture()
    const state = initialUiState(payload)
    state.probe = {
      teacher_prediction: 0,
      teacher_label: 'neg',
      rule_prediction: 0,
      rule_label: 'neg',
      fired_rule: 3,
      satisfaction: payload.rules.map((r) => r.clauses.map(() => true)),
      agreement: true,
    }
    const container = document.createElement('div')
    renderMatrix(buildViewModel(payload, state), container)
    const highlighted = container.querySelectorAll('tr.probe-highlight')
    expect(highlighted).toHaveLength(1)
    expect(highlighted[0].getAttribute('data-rule')).toBe('3')
  })

  it('zero-state message on empty selection', () => {
    const payload = { ...fiveRuleFixture(), empty_selection: true }
    const container = document.createElement('div')
    renderMatrix(buildViewModel(payload, initialUiState(payload)), container)
    expect(container.querySelector('.zero-state')).not.toBeNull()
  })

  it('structure snapshot is stable for the 5-rule fixture', () => {
    const container = mountFixture()
    expect(container.innerHTML).toMatchSnapshot()
  })
})

describe('renderGlyph', () => {
  it('encodes the level as color class and data attribute', () => {
    expect(renderGlyph('high', 0.99).getAttribute('data-level')).toBe('high')
    expect(renderGlyph('medium', 0.7).getAttribute('data-level')).toBe('medium')
    expect(renderGlyph('low', 0.2).getAttribute('data-level')).toBe('low')
  })

  it('shows the rounded percentage', () => {
    const glyph = renderGlyph('high', 0.987)
    expect(glyph.querySelector('text')?.textContent).toBe('99')
  })
})

describe('renderEvidence', () => {
  it('stripes exactly the wrong-prediction boxes', () => {
    const payload = fiveRuleFixture()
    const vm = buildViewModel(payload, initialUiState(payload))
    const svg = renderEvidence(vm.rows[0], true)
    const boxes = [...svg.querySelectorAll('[data-role="evidence-box"]')]
    const overlays = [...svg.querySelectorAll('[data-role="stripe-overlay"]')]
    const wrong = boxes.filter((b) => b.getAttribute('data-correct') === 'false')
    expect(overlays).toHaveLength(wrong.length)
    expect(wrong.length).toBeGreaterThan(0)
    for (const overlay of overlays) {
      expect(overlay.classList.contains('striped')).toBe(true)
    }
  })

  it('hiding stripes removes the overlays but keeps the boxes', () => {
    const payload = fiveRuleFixture()
    const vm = buildViewModel(payload, initialUiState(payload))
    const svg = renderEvidence(vm.rows[0], false)
    expect(svg.querySelectorAll('[data-role="stripe-overlay"]')).toHaveLength(0)
    expect(svg.querySelectorAll('[data-role="evidence-box"]').length).toBeGreaterThan(0)
  })
})

describe('renderFlow', () => {
  it('widths are proportional to per-class counts within 1px', () => {
    const payload = fiveRuleFixture()
    const vm = buildViewModel(payload, initialUiState(payload))
    const svg = renderFlow(vm.rows[0])
    const segments = [...svg.querySelectorAll('[data-role="flow-segment"]')]
    const counts = segments.map((s) => Number(s.getAttribute('data-count')))
    const widths = segments.map((s) => Number(s.getAttribute('data-width')))
    const total = counts.reduce((a, b) => a + b, 0)
    const trackWidth = widths.reduce((a, b) => a + b, 0)
    counts.forEach((count, i) => {
      const exact = (count / total) * trackWidth
      expect(Math.abs(widths[i] - exact)).toBeLessThanOrEqual(1)
    })
  })
})

describe('cell expansion', () => {
  it('expanded cells switch to the stream variant and gain a ruler', () => {
    const payload = fiveRuleFixture()
    const state = initialUiState(payload)
    state.expandedCells.add('0:0')
    const container = document.createElement('div')
    renderMatrix(buildViewModel(payload, state), container)
    const expanded = container.querySelector('[data-role="cell"][data-expanded="true"]')
    expect(expanded).not.toBeNull()
    expect(expanded!.querySelector('[data-role="stream"]')).not.toBeNull()
    expect(container.querySelector('[data-role="ruler"]')).not.toBeNull()
    // collapsed cells keep the sparkline form
    const collapsed = container.querySelectorAll('[data-role="cell"][data-expanded="false"]')
    expect(collapsed.length).toBeGreaterThan(0)
  })
})
