// Thin client for the explanation service. Filter/matrix requests carry a
// sequence number; responses superseded by a newer request are dropped.

import type { MatrixPayload, ProbeResponse } from './types'

export interface FilterRequest {
  min_support?: number
  min_confidence?: number
  data_filter?: Record<string, unknown> | null
  dataset?: 'train' | 'test'
}

export class ApiClient {
  private base: string
  private sessionId: string
  private sequence = 0

  constructor(base: string, sessionId: string) {
    this.base = base.replace(/\/$/, '')
    this.sessionId = sessionId
  }

  private url(path: string): string {
    return `${this.base}/api/v1/sessions/${this.sessionId}${path}`
  }

  /** Resolves with the payload, or null when a newer request superseded this one. */
  async fetchMatrix(params: {
    dataset: string
    conditional: boolean
    stripes: boolean
  }): Promise<MatrixPayload | null> {
    const seq = ++this.sequence
    const query = new URLSearchParams({
      dataset: params.dataset,
      conditional: String(params.conditional),
      stripes: String(params.stripes),
    })
    const response = await fetch(this.url(`/matrix?${query}`))
    if (seq !== this.sequence) return null // stale
    if (!response.ok) throw new Error(`matrix request failed: ${response.status}`)
    return (await response.json()) as MatrixPayload
  }

  async setFilters(request: FilterRequest): Promise<MatrixPayload | null> {
    const seq = ++this.sequence
    const response = await fetch(this.url('/filters'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(request),
    })
    if (seq !== this.sequence) return null
    if (!response.ok) throw new Error(`filter request failed: ${response.status}`)
    return (await response.json()) as MatrixPayload
  }

  async probe(instance: number[]): Promise<ProbeResponse> {
    const response = await fetch(this.url('/probe'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ instance }),
    })
    if (!response.ok) throw new Error(`probe request failed: ${response.status}`)
    return (await response.json()) as ProbeResponse
  }
}
