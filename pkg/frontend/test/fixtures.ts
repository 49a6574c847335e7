// Hand-built payload fixtures for the contract tests.

import type { MatrixPayload, RuleDoc, FeatureDoc, RuleMetricsDoc } from '../src/types'

export function metricsDoc(overrides: Partial<RuleMetricsDoc> = {}): RuleMetricsDoc {
  return {
    support_count: 50,
    support_fraction: 0.1,
    confidence: 0.9,
    rule_fidelity: 0.95,
    empty: false,
    evidence: [[30, 5], [12, 3]],
    flow_in: [250, 250],
    captured: [35, 15],
    ...overrides,
  }
}

export function ruleDoc(index: number, overrides: Partial<RuleDoc> = {}): RuleDoc {
  return {
    index,
    is_default: false,
    clauses: [{ feature: 'f0', lo: 1.0, hi: 2.0, description: `1 <= f0 < 2 (#${index})` }],
    output: [0.8, 0.2],
    prediction: 0,
    prediction_label: 'neg',
    capture_count: 50,
    metrics: metricsDoc(),
    fidelity_level: 'high',
    cells: {
      '0': {
        clause: { feature: 'f0', lo: 1.0, hi: 2.0, description: `1 <= f0 < 2 (#${index})` },
        distribution: { edges: [0, 1, 2, 3], counts: [[5, 9, 2], [1, 3, 8]] },
      },
    },
    ...overrides,
  }
}

export function featureDoc(index: number, name: string): FeatureDoc {
  return {
    index,
    name,
    kind: 'continuous',
    importance: 100 - index,
    distribution: { edges: [0, 1, 2, 3], counts: [[5, 9, 2], [1, 3, 8]] },
    range: [0, 3],
    cuts: [1.0, 2.0],
  }
}

export function makePayload(rules: RuleDoc[], classes = ['neg', 'pos']): MatrixPayload {
  return {
    v: 1,
    dataset: 'train',
    n: 500,
    classes,
    conditional: false,
    show_stripes: true,
    fidelity: 0.93,
    teacher_accuracy: 0.97,
    features: [featureDoc(0, 'f0'), featureDoc(1, 'f1')],
    rules,
    rows: rules.map((r) => ({ type: 'rule', rule_index: r.index })),
    filters: { min_support: 0, min_confidence: 0, data_filter: null },
  }
}

/** The case-study shape: 12 rules + default; rules 6..12 (1-based) carry
 *  support below 1.4% of the data. */
export function breastCancerScenario(): MatrixPayload {
  const fractions = [0.3, 0.12, 0.25, 0.08, 0.05, 0.013, 0.009, 0.008,
    0.007, 0.006, 0.005, 0.004]
  const rules = fractions.map((f, i) =>
    ruleDoc(i, {
      metrics: metricsDoc({
        support_fraction: f,
        support_count: Math.round(f * 500),
      }),
    }))
  rules.push(ruleDoc(12, {
    is_default: true,
    clauses: [],
    cells: {},
    metrics: metricsDoc({ support_fraction: 0.11, support_count: 55 }),
  }))
  return makePayload(rules)
}

export function fiveRuleFixture(): MatrixPayload {
  const rules = [
    ruleDoc(0, { metrics: metricsDoc({ rule_fidelity: 0.99, support_fraction: 0.3 }) }),
    ruleDoc(1, {
      prediction: 1,
      prediction_label: 'pos',
      output: [0.15, 0.85],
      metrics: metricsDoc({ rule_fidelity: 0.75, support_fraction: 0.2 }),
      fidelity_level: 'medium',
    }),
    ruleDoc(2, { metrics: metricsDoc({ rule_fidelity: 0.42, support_fraction: 0.15 }), fidelity_level: 'low' }),
    ruleDoc(3, { metrics: metricsDoc({ rule_fidelity: 0.8, support_fraction: 0.15 }) }),
    ruleDoc(4, {
      is_default: true,
      clauses: [],
      cells: {},
      metrics: metricsDoc({ rule_fidelity: 0.88, support_fraction: 0.2 }),
    }),
  ]
  return makePayload(rules)
}
