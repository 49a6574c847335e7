"""Ordered decision-rule lists learned by Bayesian MCMC over a mined pool.

A list is a sequence of antecedents drawn from the pool plus a catch-all
default rule; prediction walks the list and fires the first satisfied rule.
The posterior combines a truncated Poisson prior on list length, a Poisson
prior on per-rule clause count (uniform across same-cardinality pool
members), and a Dirichlet-multinomial marginal likelihood of the labels each
rule captures. Search runs several annealed Metropolis chains and returns the
best list visited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import EmptyPool, NoData
from .mining import CandidateAntecedent, Clause


@dataclass(frozen=True)
class Rule:
    """One IF-THEN rule; the default rule has no clauses."""

    clauses: tuple[Clause, ...]
    output: np.ndarray          # (C,) smoothed class distribution
    capture_count: int

    @property
    def is_default(self) -> bool:
        return len(self.clauses) == 0

    @property
    def prediction(self) -> int:
        return int(np.argmax(self.output))  # argmax ties resolve to lowest index

    @property
    def confidence(self) -> float:
        return float(self.output.max())

    def matches(self, x: np.ndarray) -> bool:
        return all(c.matches_value(float(x[c.feature])) for c in self.clauses)

    def matches_matrix(self, rows: np.ndarray) -> np.ndarray:
        mask = np.ones(rows.shape[0], dtype=bool)
        for c in self.clauses:
            mask &= c.matches(rows[:, c.feature])
        return mask


@dataclass(frozen=True)
class Hyperparams:
    expected_length: float = 20.0   # lambda: prior mean list length
    expected_clauses: float = 2.0   # eta: prior mean clause count per rule
    alpha: float = 1.0              # Dirichlet pseudo-count
    max_length: int | None = None   # hard cap on non-default rules

    def __post_init__(self):
        if self.expected_length <= 0 or self.expected_clauses <= 0 or self.alpha <= 0:
            raise ValueError("hyperparameters must be positive")
        if self.max_length is not None and self.max_length < 0:
            raise ValueError("max_length must be >= 0")


@dataclass(frozen=True)
class McmcConfig:
    iterations: int = 50_000
    chains: int = 3
    seed: int = 0
    p_insert: float = 0.4
    p_remove: float = 0.3
    p_swap: float = 0.3
    start_temperature: float = 2.0  # anneals linearly to 1.0 over the first half

    def __post_init__(self):
        if self.iterations < 1 or self.chains < 1:
            raise ValueError("iterations and chains must be >= 1")


@dataclass(frozen=True)
class RuleList:
    rules: tuple[Rule, ...]         # last rule is always the default
    hyperparams: Hyperparams
    log_posterior: float

    def __len__(self) -> int:
        return len(self.rules)

    def fired_index(self, x: np.ndarray) -> int:
        for i, rule in enumerate(self.rules):
            if rule.matches(x):
                return i
        raise AssertionError("default rule must always match")

    def fired_indices(self, rows: np.ndarray) -> np.ndarray:
        """Vectorized first-match routing for an (N, k) raw matrix."""
        n = rows.shape[0]
        fired = np.full(n, len(self.rules) - 1, dtype=np.int64)
        remaining = np.ones(n, dtype=bool)
        for i, rule in enumerate(self.rules[:-1]):
            hit = remaining & rule.matches_matrix(rows)
            fired[hit] = i
            remaining &= ~hit
        return fired

    def predict(self, x: np.ndarray) -> tuple[int, int]:
        idx = self.fired_index(np.asarray(x, dtype=np.float64))
        return self.rules[idx].prediction, idx

    def predict_matrix(self, rows: np.ndarray) -> np.ndarray:
        fired = self.fired_indices(rows)
        preds = np.array([r.prediction for r in self.rules], dtype=np.int64)
        return preds[fired]


def evaluate_fidelity(rule_list: RuleList, oracle_labels, rows) -> float:
    """Fraction of rows where the list and the teacher agree."""
    rows = np.asarray(rows, dtype=np.float64)
    labels = np.asarray(oracle_labels, dtype=np.int64)
    if rows.shape[0] == 0:
        raise NoData("fidelity needs at least one instance")
    if rows.shape[0] != labels.shape[0]:
        raise ValueError("rows and labels must align")
    return float((rule_list.predict_matrix(rows) == labels).mean())


class ListScorer:
    """Direct (non-incremental) posterior evaluation for a candidate list.

    The MCMC chain keeps its own incremental bookkeeping; this class is the
    plain reference path, also used to score the final list.
    """

    def __init__(self, rows: np.ndarray, labels: np.ndarray,
                 pool: list[CandidateAntecedent], hyperparams: Hyperparams,
                 n_classes: int):
        if len(pool) == 0:
            raise EmptyPool("antecedent pool is empty")
        if rows.shape[0] == 0:
            raise NoData("cannot train on zero instances")
        self.pool = pool
        self.hp = hyperparams
        self.n = rows.shape[0]
        self.C = n_classes
        self.labels = np.asarray(labels, dtype=np.int64)
        self.coverage = np.stack([a.matches_matrix(rows) for a in pool])
        self.coverage_neg = ~self.coverage
        self.max_len = min(len(pool), hyperparams.max_length or len(pool))

        lam, eta, alpha = (hyperparams.expected_length,
                           hyperparams.expected_clauses, hyperparams.alpha)
        lengths = np.arange(self.max_len + 1)
        raw = lengths * math.log(lam) - gammaln(lengths + 1)
        self.length_logprior = raw - logsumexp(raw)

        cards = np.array(sorted({a.cardinality for a in pool}))
        raw_c = cards * math.log(eta) - gammaln(cards + 1)
        card_lp = dict(zip(cards.tolist(), (raw_c - logsumexp(raw_c)).tolist()))
        count_by_card: dict[int, int] = {}
        for a in pool:
            count_by_card[a.cardinality] = count_by_card.get(a.cardinality, 0) + 1
        self.antecedent_logprior = np.array([
            card_lp[a.cardinality] - math.log(count_by_card[a.cardinality])
            for a in pool
        ])

        # Dirichlet-multinomial lookup tables over integer counts
        ns = np.arange(self.n + 1)
        self._lg_count = gammaln(ns + alpha)
        self._lg_total = gammaln(ns + self.C * alpha)
        self._dm_const = float(gammaln(self.C * alpha) - self.C * gammaln(alpha))

    def dirichlet_multinomial(self, counts: np.ndarray) -> float:
        n = int(counts.sum())
        return float(self._dm_const - self._lg_total[n] + self._lg_count[counts].sum())

    def capture_counts(self, state: tuple[int, ...]) -> list[np.ndarray]:
        """Per-rule captured label counts, default rule last."""
        remaining = np.ones(self.n, dtype=bool)
        out = []
        for a_idx in state:
            fired = self.coverage[a_idx] & remaining
            out.append(np.bincount(self.labels[fired], minlength=self.C))
            remaining &= self.coverage_neg[a_idx]
        out.append(np.bincount(self.labels[remaining], minlength=self.C))
        return out

    def log_posterior(self, state: tuple[int, ...]) -> float:
        lp = self.length_logprior[len(state)]
        lp += self.antecedent_logprior[list(state)].sum() if state else 0.0
        for counts in self.capture_counts(state):
            lp += self.dirichlet_multinomial(counts)
        return float(lp)

    def build_rule_list(self, state: tuple[int, ...]) -> RuleList:
        alpha, C = self.hp.alpha, self.C
        counts = self.capture_counts(state)
        rules = []
        for a_idx, cnt in zip(state, counts[:-1]):
            output = (cnt + alpha) / (cnt.sum() + C * alpha)
            rules.append(Rule(clauses=self.pool[a_idx].clauses,
                              output=output, capture_count=int(cnt.sum())))
        cnt = counts[-1]
        output = (cnt + alpha) / (cnt.sum() + C * alpha)
        rules.append(Rule(clauses=(), output=output, capture_count=int(cnt.sum())))
        return RuleList(rules=tuple(rules), hyperparams=self.hp,
                        log_posterior=self.log_posterior(state))


class _Chain:
    """One annealed Metropolis chain with incremental posterior updates."""

    def __init__(self, scorer: ListScorer, rng: np.random.Generator,
                 p_insert: float = 0.4, p_remove: float = 0.3):
        self.s = scorer
        self.rng = rng
        self.p_insert = p_insert
        self.p_insert_remove = p_insert + p_remove
        self.state: list[int] = []
        self.used: set[int] = set()
        # remaining[i] = mask of instances not captured before rule i
        self.remaining: list[np.ndarray] = [np.ones(scorer.n, dtype=bool)]
        self.dm_terms: list[float] = []
        self.default_dm = scorer.dirichlet_multinomial(
            np.bincount(scorer.labels, minlength=scorer.C))
        self.prior = float(scorer.length_logprior[0])
        self.log_post = self.prior + self.default_dm
        self.best_state: tuple[int, ...] = ()
        self.best_log_post = self.log_post

    def _tail(self, new_state: list[int], from_pos: int):
        """Recompute masks/likelihood terms from `from_pos` to the end."""
        s = self.s
        rem = self.remaining[from_pos]
        rems = []
        dms = []
        for a_idx in new_state[from_pos:]:
            fired = s.coverage[a_idx] & rem
            dms.append(s.dirichlet_multinomial(
                np.bincount(s.labels[fired], minlength=s.C)))
            rem = rem & s.coverage_neg[a_idx]
            rems.append(rem)
        default_dm = s.dirichlet_multinomial(
            np.bincount(s.labels[rem], minlength=s.C))
        return rems, dms, default_dm

    def _propose(self):
        """Return (new_state, first_changed_pos) or None for a void move."""
        s = self.s
        m = len(self.state)
        u = self.rng.random()
        if u < self.p_insert:  # insert
            if m >= s.max_len or m >= len(s.pool):
                return None
            for _ in range(64):
                a_idx = int(self.rng.integers(len(s.pool)))
                if a_idx not in self.used:
                    break
            else:
                return None
            pos = int(self.rng.integers(m + 1))
            return self.state[:pos] + [a_idx] + self.state[pos:], pos
        if u < self.p_insert_remove:  # remove
            if m == 0:
                return None
            pos = int(self.rng.integers(m))
            return self.state[:pos] + self.state[pos + 1:], pos
        if m < 2:  # swap
            return None
        i = int(self.rng.integers(m))
        j = int(self.rng.integers(m - 1))
        if j >= i:
            j += 1
        i, j = min(i, j), max(i, j)
        new_state = list(self.state)
        new_state[i], new_state[j] = new_state[j], new_state[i]
        return new_state, i

    def step(self, temperature: float):
        proposal = self._propose()
        if proposal is None:
            return
        new_state, pos = proposal
        s = self.s
        rems, dms, default_dm = self._tail(new_state, pos)
        prior = float(s.length_logprior[len(new_state)])
        for a_idx in new_state:
            prior += s.antecedent_logprior[a_idx]
        log_post = prior + sum(self.dm_terms[:pos]) + sum(dms) + default_dm

        if (log_post - self.log_post) / temperature > math.log(self.rng.random() + 1e-300):
            self.state = new_state
            self.used = set(new_state)
            self.remaining = self.remaining[:pos + 1] + rems
            self.dm_terms = self.dm_terms[:pos] + dms
            self.default_dm = default_dm
            self.prior = prior
            self.log_post = log_post
            if log_post > self.best_log_post + 1e-12:
                self.best_log_post = log_post
                self.best_state = tuple(new_state)


def train_rule_list(
    rows: np.ndarray,
    labels: np.ndarray,
    pool: list[CandidateAntecedent],
    hyperparams: Hyperparams | None = None,
    mcmc: McmcConfig | None = None,
    n_classes: int | None = None,
    progress=None,
) -> RuleList:
    """MAP rule list over the pool via annealed Metropolis search.

    Deterministic for a fixed seed; chains run with independent substreams.
    `progress`, when given, is called with a float in [0, 1].
    """
    hyperparams = hyperparams or Hyperparams()
    mcmc = mcmc or McmcConfig()
    rows = np.asarray(rows, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if n_classes is None:
        n_classes = max(int(labels.max()) + 1 if labels.size else 0, 2)
    scorer = ListScorer(rows, labels, pool, hyperparams, n_classes)

    best_state: tuple[int, ...] = ()
    best_lp = -math.inf
    half = max(1, mcmc.iterations // 2)
    seeds = np.random.SeedSequence(mcmc.seed).spawn(mcmc.chains)
    total = mcmc.iterations * mcmc.chains
    done = 0
    for chain_idx in range(mcmc.chains):
        chain = _Chain(scorer, np.random.default_rng(seeds[chain_idx]),
                       mcmc.p_insert, mcmc.p_remove)
        if chain.best_log_post > best_lp:
            best_lp, best_state = chain.best_log_post, chain.best_state
        for t in range(mcmc.iterations):
            temp = (mcmc.start_temperature - (mcmc.start_temperature - 1.0) * t / half
                    if t < half else 1.0)
            chain.step(temp)
            done += 1
            if progress is not None and done % 2000 == 0:
                progress(done / total)
        if chain.best_log_post > best_lp:
            best_lp, best_state = chain.best_log_post, chain.best_state
    if progress is not None:
        progress(1.0)
    return scorer.build_rule_list(best_state)
