// DOM/SVG rendering of the matrix view model. Structure-first markup with
// data attributes so behavior is testable without pixel inspection.

import type {
  CellVM,
  Distribution,
  FeatureDoc,
  MatrixRowVM,
  MatrixViewModel,
} from './types'

export const CLASS_COLORS = [
  '#4e79a7', '#f28e2b', '#59a14f', '#e15759', '#b07aa1',
  '#76b7b2', '#edc948', '#ff9da7', '#9c755f', '#bab0ac',
]

export const GLYPH_COLORS = { high: '#2e7d32', medium: '#f9a825', low: '#c62828' }

const SVG = 'http://www.w3.org/2000/svg'

export const CELL_WIDTH = 90
export const CELL_HEIGHT = 36
export const EXPANDED_HEIGHT = 120

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG, tag)
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value))
  }
  return el
}

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag)
  if (className) node.className = className
  if (text !== undefined) node.textContent = text
  return node
}

export function renderStripePattern(): SVGElement {
  const svg = svgEl('svg', { width: 0, height: 0, style: 'position:absolute' })
  const defs = svgEl('defs')
  const pattern = svgEl('pattern', {
    id: 'error-stripes', width: 6, height: 6, patternUnits: 'userSpaceOnUse',
    patternTransform: 'rotate(45)',
  })
  pattern.appendChild(svgEl('rect', { width: 6, height: 6, fill: 'white', 'fill-opacity': 0.55 }))
  pattern.appendChild(svgEl('rect', { width: 3, height: 6, fill: 'transparent' }))
  defs.appendChild(pattern)
  svg.appendChild(defs)
  return svg
}

/** Distribution sparkline: per-class bars; the clause interval drawn as a
 *  translucent box, with the satisfied portion at higher opacity. */
export function renderCell(
  cell: CellVM,
  feature: FeatureDoc,
  classCount: number,
  expanded: boolean,
): SVGElement {
  const height = expanded ? EXPANDED_HEIGHT : CELL_HEIGHT
  const svg = svgEl('svg', {
    width: CELL_WIDTH, height,
    'data-role': 'cell', 'data-feature': cell.featureIndex,
    'data-expanded': String(expanded),
  })
  svg.appendChild(renderDistribution(cell.distribution, classCount, CELL_WIDTH, height, expanded))

  const box = intervalBox(cell, feature)
  if (box) {
    const [x0, x1] = box
    svg.appendChild(svgEl('rect', {
      x: x0, y: 0, width: Math.max(1, x1 - x0), height,
      fill: '#555', 'fill-opacity': 0.28, stroke: '#555', 'stroke-opacity': 0.6,
      'data-role': 'interval-box',
    }))
  }
  const title = svgEl('title')
  title.textContent = cell.description
  svg.appendChild(title)
  return svg
}

function intervalBox(cell: CellVM, feature: FeatureDoc): [number, number] | null {
  if (cell.category !== undefined && feature.categories) {
    const idx = feature.categories.indexOf(cell.category)
    if (idx < 0) return null
    const width = CELL_WIDTH / feature.categories.length
    return [idx * width, (idx + 1) * width]
  }
  if (cell.interval && feature.range) {
    const [lo, hi] = feature.range
    const span = hi - lo || 1
    const a = cell.interval.lo === null ? lo : Math.max(lo, cell.interval.lo)
    const b = cell.interval.hi === null ? hi : Math.min(hi, cell.interval.hi)
    return [((a - lo) / span) * CELL_WIDTH, ((b - lo) / span) * CELL_WIDTH]
  }
  return null
}

/** Collapsed cells draw grouped bars; expanded continuous cells draw a
 *  centered stacked band per class (stream-style), categorical a stacked bar
 *  chart. */
export function renderDistribution(
  dist: Distribution,
  classCount: number,
  width: number,
  height: number,
  expanded: boolean,
): SVGElement {
  const group = svgEl('g', { 'data-role': expanded ? 'stream' : 'sparkline' })
  const bins = dist.counts[0]?.length ?? 0
  if (bins === 0) return group
  const totals = Array.from({ length: bins }, (_, b) =>
    dist.counts.reduce((acc, perClass) => acc + perClass[b], 0))
  const peak = Math.max(1, ...totals)
  const binWidth = width / bins

  if (!expanded) {
    for (let c = 0; c < classCount; c++) {
      for (let b = 0; b < bins; b++) {
        const value = dist.counts[c][b]
        if (!value) continue
        const h = (value / peak) * (height - 2)
        const base = dist.counts.slice(0, c).reduce((acc, per) => acc + (per[b] / peak) * (height - 2), 0)
        group.appendChild(svgEl('rect', {
          x: b * binWidth, y: height - base - h, width: Math.max(1, binWidth - 0.5), height: h,
          fill: CLASS_COLORS[c % CLASS_COLORS.length], 'fill-opacity': 0.85,
          'data-role': 'dist-bar', 'data-class': c, 'data-bin': b,
        }))
      }
    }
    return group
  }

  // stream: symmetric stacking around the vertical center, one path per class
  const mid = height / 2
  for (let c = 0; c < classCount; c++) {
    const upper: string[] = []
    const lower: string[] = []
    for (let b = 0; b < bins; b++) {
      const x = b * binWidth + binWidth / 2
      const below = dist.counts.slice(0, c).reduce((acc, per) => acc + per[b], 0)
      const value = dist.counts[c][b]
      const scale = (height - 6) / (2 * peak)
      const y0 = mid + (below - totals[b] / 2) * scale
      const y1 = y0 + value * scale
      upper.push(`${x.toFixed(1)},${y0.toFixed(1)}`)
      lower.unshift(`${x.toFixed(1)},${y1.toFixed(1)}`)
    }
    group.appendChild(svgEl('polygon', {
      points: [...upper, ...lower].join(' '),
      fill: CLASS_COLORS[c % CLASS_COLORS.length], 'fill-opacity': 0.8,
      'data-role': 'stream-band', 'data-class': c,
    }))
  }
  return group
}

export function renderOutputBar(row: MatrixRowVM, classes: string[]): HTMLElement {
  const wrap = el('div', 'output-cell')
  const value = el('span', 'output-number',
    row.prediction >= 0 ? (row.outputs[row.prediction] ?? 0).toFixed(2) : '')
  if (row.prediction >= 0) {
    value.style.color = CLASS_COLORS[row.prediction % CLASS_COLORS.length]
    value.setAttribute('data-class', String(row.prediction))
  }
  wrap.appendChild(value)

  const svg = svgEl('svg', { width: 14, height: 36, 'data-role': 'output-bar' })
  let y = 0
  row.outputs.forEach((p, c) => {
    const h = p * 36
    svg.appendChild(svgEl('rect', {
      x: 0, y, width: 14, height: h,
      fill: CLASS_COLORS[c % CLASS_COLORS.length],
      'data-role': 'output-seg', 'data-class': c,
    }))
    y += h
  })
  wrap.appendChild(svg)
  return wrap
}

export function renderGlyph(level: 'high' | 'medium' | 'low', fidelity: number): SVGElement {
  const svg = svgEl('svg', {
    width: 34, height: 34, 'data-role': 'fidelity-glyph', 'data-level': level,
  })
  const angle = Math.min(0.9999, Math.max(0, fidelity)) * 2 * Math.PI
  const cx = 17, cy = 17, r = 14
  const x = cx + r * Math.sin(angle)
  const y = cy - r * Math.cos(angle)
  const large = angle > Math.PI ? 1 : 0
  svg.appendChild(svgEl('circle', { cx, cy, r, fill: 'none', stroke: '#ddd', 'stroke-width': 3 }))
  svg.appendChild(svgEl('path', {
    d: `M ${cx} ${cy - r} A ${r} ${r} 0 ${large} 1 ${x.toFixed(2)} ${y.toFixed(2)}`,
    fill: 'none', stroke: GLYPH_COLORS[level], 'stroke-width': 3,
  }))
  const label = svgEl('text', {
    x: cx, y: cy + 4, 'text-anchor': 'middle', 'font-size': 10, fill: GLYPH_COLORS[level],
  })
  label.textContent = String(Math.round(fidelity * 100))
  svg.appendChild(label)
  return svg
}

export function renderEvidence(row: MatrixRowVM, showStripes: boolean): SVGElement {
  const svg = svgEl('svg', { width: 124, height: 16, 'data-role': 'evidence' })
  for (const box of row.evidence) {
    const rect = svgEl('rect', {
      x: box.x, y: 1, width: box.width, height: 14,
      fill: CLASS_COLORS[box.classIndex % CLASS_COLORS.length],
      'data-role': 'evidence-box',
      'data-class': box.classIndex,
      'data-correct': String(box.correct),
      'data-count': box.count,
    })
    svg.appendChild(rect)
    if (!box.correct && showStripes) {
      const overlay = svgEl('rect', {
        x: box.x, y: 1, width: box.width, height: 14,
        fill: 'url(#error-stripes)', 'data-role': 'stripe-overlay',
        'data-class': box.classIndex,
      })
      overlay.classList.add('striped')
      svg.appendChild(overlay)
    }
  }
  return svg
}

export function renderFlow(row: MatrixRowVM): SVGElement {
  const svg = svgEl('svg', { width: 84, height: 18, 'data-role': 'flow' })
  let x = 0
  for (const seg of row.flowCaptured) {
    if (seg.width <= 0) continue
    svg.appendChild(svgEl('rect', {
      x, y: 2, width: seg.width, height: 14,
      fill: CLASS_COLORS[seg.classIndex % CLASS_COLORS.length],
      'data-role': 'flow-segment', 'data-class': seg.classIndex,
      'data-count': seg.count, 'data-width': seg.width,
    }))
    x += seg.width
  }
  return svg
}

/** Mouse-following vertical line laid over an expanded cell, so intervals of
 *  the same feature can be compared across rules. */
export function renderRuler(): HTMLElement {
  const ruler = el('div', 'cell-ruler')
  ruler.setAttribute('data-role', 'ruler')
  ruler.style.cssText =
    'position:absolute;top:0;bottom:0;width:1px;background:#e15759;pointer-events:none;display:none;'
  const parentListener = (event: Event) => {
    const mouse = event as MouseEvent
    const host = ruler.parentElement
    if (!host) return
    const bounds = host.getBoundingClientRect()
    ruler.style.display = 'block'
    ruler.style.left = `${mouse.clientX - bounds.left}px`
  }
  queueMicrotask(() => {
    const host = ruler.parentElement
    if (host) {
      host.style.position = 'relative'
      host.addEventListener('mousemove', parentListener)
      host.addEventListener('mouseleave', () => { ruler.style.display = 'none' })
    }
  })
  return ruler
}

export function renderMatrix(vm: MatrixViewModel, container: HTMLElement): void {
  container.textContent = ''
  container.appendChild(renderStripePattern())

  if (vm.emptySelection) {
    container.appendChild(el('div', 'zero-state',
      'No instances match the active data filter.'))
    return
  }

  const header = el('div', 'matrix-header')
  header.appendChild(el('span', 'stat',
    `dataset: ${vm.dataset} | fidelity ${(vm.fidelity * 100).toFixed(1)}% | ` +
    `accuracy ${(vm.teacherAccuracy * 100).toFixed(1)}%`))
  container.appendChild(header)

  const table = el('table', 'rule-matrix')
  table.setAttribute('data-role', 'matrix')
  const head = el('tr')
  head.appendChild(el('th', 'flow-col', 'flow'))
  for (const feature of vm.columns) {
    const th = el('th', 'feature-col', feature.name)
    th.setAttribute('data-importance', String(feature.importance))
    const bar = el('div', 'importance-bar')
    const peak = Math.max(1, ...vm.columns.map((f) => f.importance))
    bar.style.width = `${(feature.importance / peak) * 60}px`
    th.appendChild(bar)
    head.appendChild(th)
  }
  head.appendChild(el('th', undefined, 'output'))
  head.appendChild(el('th', undefined, 'fidelity'))
  head.appendChild(el('th', undefined, 'evidence'))
  table.appendChild(head)

  vm.rows.forEach((row, rowIndex) => {
    const tr = el('tr', row.kind === 'group' ? 'group-row' : 'rule-row')
    tr.setAttribute('data-role', row.kind === 'group' ? 'group-row' : 'rule-row')
    if (row.ruleIndex !== undefined) tr.setAttribute('data-rule', String(row.ruleIndex))
    if (row.groupIndices) tr.setAttribute('data-rules', row.groupIndices.join(','))
    tr.setAttribute('data-row', String(rowIndex))
    if (row.highlighted) tr.classList.add('probe-highlight')

    const flowTd = el('td', 'flow-col')
    flowTd.appendChild(renderFlow(row))
    tr.appendChild(flowTd)

    if (row.kind === 'group') {
      const td = el('td', 'group-cell',
        `${row.label} (support ${row.supportCount})`) as HTMLTableCellElement
      td.colSpan = vm.columns.length
      td.setAttribute('data-role', 'expand-group')
      tr.appendChild(td)
      tr.appendChild(el('td'))
      tr.appendChild(el('td'))
      const evidence = el('td')
      evidence.appendChild(renderFlow(row))
      tr.appendChild(evidence)
    } else {
      for (const feature of vm.columns) {
        const td = el('td', 'matrix-cell')
        const cell = row.cells.get(feature.index)
        if (cell) {
          td.setAttribute('data-role', 'clause-cell')
          td.setAttribute('title', cell.description)
          if (cell.satisfied) td.setAttribute('data-satisfied', String(cell.satisfied.every(Boolean)))
          const expanded = cell.expanded === true
          td.appendChild(renderCell(cell, feature, vm.classes.length, expanded))
          if (expanded) td.appendChild(renderRuler())
        }
        tr.appendChild(td)
      }
      const outputTd = el('td')
      outputTd.appendChild(renderOutputBar(row, vm.classes))
      tr.appendChild(outputTd)
      const glyphTd = el('td')
      glyphTd.appendChild(renderGlyph(row.glyph.level, row.glyph.fidelity))
      tr.appendChild(glyphTd)
      const evidenceTd = el('td')
      evidenceTd.appendChild(renderEvidence(row, vm.showStripes))
      tr.appendChild(evidenceTd)
    }
    table.appendChild(tr)
  })
  container.appendChild(table)
}
