// Action dispatch: client-local toggles re-render immediately; filter and
// probe actions round-trip through the service.

import { ApiClient } from './api'
import { renderMatrix } from './render'
import type { MatrixPayload, UiState } from './types'
import { buildViewModel, initialUiState } from './viewmodel'

export type Action =
  | { kind: 'set-rule-filters'; minSupport: number; minConfidence: number }
  | { kind: 'set-data-filter'; filter: Record<string, unknown> | null }
  | { kind: 'toggle-dataset' }
  | { kind: 'toggle-conditional' }
  | { kind: 'toggle-stripes' }
  | { kind: 'expand-group'; rowIndex: number }
  | { kind: 'expand-cell'; ruleIndex: number; featureIndex: number }
  | { kind: 'probe'; instance: number[] }
  | { kind: 'clear-probe' }

export class MatrixController {
  payload: MatrixPayload
  state: UiState
  private api: ApiClient | null
  private container: HTMLElement

  constructor(payload: MatrixPayload, container: HTMLElement, api: ApiClient | null = null) {
    this.payload = payload
    this.container = container
    this.api = api
    this.state = initialUiState(payload)
    this.render()
  }

  render(): void {
    renderMatrix(buildViewModel(this.payload, this.state), this.container)
  }

  async dispatch(action: Action): Promise<void> {
    switch (action.kind) {
      case 'set-rule-filters': {
        this.state.minSupport = action.minSupport
        this.state.minConfidence = action.minConfidence
        this.state.expandedGroups.clear()
        this.render() // instant local collapse
        if (this.api) {
          const fresh = await this.api.setFilters({
            min_support: action.minSupport,
            min_confidence: action.minConfidence,
          })
          if (fresh) {
            this.payload = fresh
            this.render()
          }
        }
        return
      }
      case 'set-data-filter': {
        if (this.api) {
          const fresh = await this.api.setFilters({ data_filter: action.filter })
          if (fresh) {
            this.payload = fresh
            this.render()
          }
        }
        return
      }
      case 'toggle-dataset': {
        this.state.dataset = this.state.dataset === 'train' ? 'test' : 'train'
        if (this.api) {
          const fresh = await this.api.fetchMatrix({
            dataset: this.state.dataset,
            conditional: this.state.conditional,
            stripes: this.state.showStripes,
          })
          if (fresh) {
            this.payload = fresh
            this.render()
          }
        }
        return
      }
      case 'toggle-conditional': {
        this.state.conditional = !this.state.conditional
        if (this.api) {
          const fresh = await this.api.fetchMatrix({
            dataset: this.state.dataset,
            conditional: this.state.conditional,
            stripes: this.state.showStripes,
          })
          if (fresh) {
            this.payload = fresh
            this.render()
          }
        } else {
          this.render()
        }
        return
      }
      case 'toggle-stripes': {
        this.state.showStripes = !this.state.showStripes
        this.render()
        return
      }
      case 'expand-group': {
        if (this.state.expandedGroups.has(action.rowIndex)) {
          this.state.expandedGroups.delete(action.rowIndex)
        } else {
          this.state.expandedGroups.add(action.rowIndex)
        }
        this.render()
        return
      }
      case 'expand-cell': {
        const key = `${action.ruleIndex}:${action.featureIndex}`
        if (this.state.expandedCells.has(key)) {
          this.state.expandedCells.delete(key)
        } else {
          this.state.expandedCells.add(key)
        }
        this.render()
        return
      }
      case 'probe': {
        if (!this.api) return
        this.state.probe = await this.api.probe(action.instance)
        this.render()
        return
      }
      case 'clear-probe': {
        this.state.probe = null
        this.render()
        return
      }
    }
  }
}
