"""The resampling algorithm: draw all variables, resample true bad events.

Reproducibility contract: identical (events, bias, rule, seed, max_steps)
produce identical traces.  Three independent Mersenne Twister streams are
derived from the seed: one for the initial draw, one for resampling, one
for random event selection.  Rational biases are sampled exactly by
comparing an integer draw below the denominator against the numerator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError
from .events_graph import BadEvent


class SelectionRule(Enum):
    FIRST_INDEX = "first-index"
    UNIFORM_RANDOM = "uniform-random"
    LOWEST_PROBABILITY = "lowest-probability"


@dataclass
class RunStats:
    total_resamples: int
    per_event_resamples: tuple[int, ...]
    terminated: bool
    steps: int
    seed: int
    max_steps: int
    rule: SelectionRule

    def to_json_dict(self) -> dict:
        return {"total_resamples": self.total_resamples,
                "per_event_resamples": list(self.per_event_resamples),
                "terminated": self.terminated,
                "steps": self.steps,
                "seed": self.seed,
                "max_steps": self.max_steps,
                "rule": self.rule.value}


def _draw(rng: random.Random, bias: Fraction) -> bool:
    return rng.randrange(bias.denominator) < bias.numerator


def event_probability(event: BadEvent, bias: Sequence[Fraction]) -> Fraction:
    prob = Fraction(1)
    for variable, value in event.atoms:
        prob *= bias[variable] if value else 1 - bias[variable]
    return prob


def find_true_bad_event(assignment: dict[int, bool], events: Sequence[BadEvent],
                        rule: SelectionRule, rng: random.Random,
                        probabilities: Sequence[Fraction] | None = None) -> Optional[int]:
    true_events = [i for i, e in enumerate(events) if e.holds(assignment)]
    if not true_events:
        return None
    if rule is SelectionRule.FIRST_INDEX:
        return true_events[0]
    if rule is SelectionRule.UNIFORM_RANDOM:
        return true_events[rng.randrange(len(true_events))]
    if rule is SelectionRule.LOWEST_PROBABILITY:
        if probabilities is None:
            raise DomainError("lowest-probability rule needs event probabilities")
        return min(true_events, key=lambda i: (probabilities[i], i))
    raise DomainError(f"unknown selection rule {rule!r}")


def run_mt(events: Sequence[BadEvent], m: int,
           bias: Sequence[Fraction] | None = None,
           rule: SelectionRule = SelectionRule.FIRST_INDEX,
           seed: int = 0,
           max_steps: int = 1_000_000) -> tuple[dict[int, bool], RunStats]:
    """Run the resampling loop on m variables; bias[i] = P(X_i = True).

    bias is indexed 1..m (slot 0 ignored) and defaults to the uniform 1/2.
    Non-termination within max_steps surfaces as terminated=False, never
    as an exception.
    """
    if max_steps < 0:
        raise DomainError(f"max_steps must be >= 0, got {max_steps}")
    if bias is None:
        bias = [Fraction(1, 2)] * (m + 1)
    bias = [Fraction(x) for x in bias]
    if len(bias) != m + 1:
        raise DomainError(f"bias must have m+1={m + 1} entries (slot 0 unused)")
    for i in range(1, m + 1):
        if not 0 <= bias[i] <= 1:
            raise DomainError(f"bias[{i}]={bias[i]} outside [0,1]")
    for event in events:
        if any(v < 1 or v > m for v in event.variables):
            raise DomainError("event mentions a variable outside [1, m]")

    init_rng = random.Random(f"{seed}:init")
    resample_rng = random.Random(f"{seed}:resample")
    select_rng = random.Random(f"{seed}:select")
    probabilities = [event_probability(e, bias) for e in events]

    assignment = {i: _draw(init_rng, bias[i]) for i in range(1, m + 1)}
    per_event = [0] * len(events)
    steps = 0
    terminated = False
    while True:
        chosen = find_true_bad_event(assignment, events, rule, select_rng, probabilities)
        if chosen is None:
            terminated = True
            break
        if steps >= max_steps:
            break
        for variable in sorted(events[chosen].variables):
            assignment[variable] = _draw(resample_rng, bias[variable])
        per_event[chosen] += 1
        steps += 1

    stats = RunStats(total_resamples=sum(per_event),
                     per_event_resamples=tuple(per_event),
                     terminated=terminated, steps=steps, seed=seed,
                     max_steps=max_steps, rule=rule)
    return assignment, stats
