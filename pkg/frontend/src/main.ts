// Entry point: create a session against the local service, wait for an
// induction, then mount the interactive matrix.

import { ApiClient } from './api'
import { MatrixController } from './interactions'
import type { MatrixPayload } from './types'

async function createSession(base: string, dataset: string, teacher: string) {
  const response = await fetch(`${base}/api/v1/sessions`, {
    method: 'POST',
    headers: { 'content-type': 'application/json' },
    body: JSON.stringify({ dataset, teacher }),
  })
  if (!response.ok) throw new Error(`session creation failed: ${response.status}`)
  return (await response.json()) as { session_id: string }
}

async function induceAndWait(base: string, sessionId: string, onProgress: (p: number) => void) {
  const start = await fetch(`${base}/api/v1/sessions/${sessionId}/induce`, {
    method: 'POST',
    headers: { 'content-type': 'application/json' },
    body: JSON.stringify({ sampling_rate: 4.0, seed: 0 }),
  })
  if (start.status !== 202) throw new Error(`induce failed: ${start.status}`)
  const { job_id } = (await start.json()) as { job_id: string }
  for (;;) {
    const poll = await fetch(`${base}/api/v1/jobs/${job_id}`)
    const status = (await poll.json()) as { state: string; progress: number; error?: string }
    onProgress(status.progress)
    if (status.state === 'done') return
    if (status.state === 'error') throw new Error(status.error ?? 'induction failed')
    await new Promise((resolve) => setTimeout(resolve, 500))
  }
}

export async function mount(container: HTMLElement): Promise<MatrixController> {
  const params = new URLSearchParams(window.location.search)
  const base = params.get('api') ?? ''
  const dataset = params.get('dataset') ?? 'iris'
  const teacher = params.get('teacher') ?? 'mlp:50'

  container.textContent = 'creating session...'
  const { session_id } = await createSession(base, dataset, teacher)
  const api = new ApiClient(base, session_id)

  container.textContent = 'inducing rule list...'
  await induceAndWait(base, session_id, (p) => {
    container.textContent = `inducing rule list... ${(p * 100).toFixed(0)}%`
  })

  const payload = (await api.fetchMatrix({
    dataset: 'train', conditional: false, stripes: true,
  })) as MatrixPayload
  return new MatrixController(payload, container, api)
}

if (typeof document !== 'undefined' && document.getElementById('rulelens-root')) {
  mount(document.getElementById('rulelens-root') as HTMLElement).catch((err) => {
    const root = document.getElementById('rulelens-root')
    if (root) root.textContent = String(err)
  })
}
