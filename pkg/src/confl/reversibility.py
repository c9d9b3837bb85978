"""Reversibility of a rule system: every step can be undone by the system
itself.  It suffices that for each rule l -> r the system rewrites r back to
l; searched breadth-first up to a step bound (default 10)."""

from __future__ import annotations

from dataclasses import dataclass

from .rewriting import Trs, reach_bounded, replay_steps


@dataclass(frozen=True)
class ReversibilityWitness:
    bound: int
    # rule name -> tuple of Steps rewriting that rule's rhs back to its lhs
    sequences: tuple  # ((name, (Step, ...)), ...)

    def sequence(self, name: str):
        for n, steps in self.sequences:
            if n == name:
                return steps
        raise KeyError(name)


def is_reversible(p_trs: Trs, bound: int = 10) -> ReversibilityWitness | None:
    """A witness that p_trs is reversible, or None if none found in bound.

    Being bidirectional (flippable rules) is necessary, so that is checked
    first as a fast filter.
    """
    if not p_trs.bidirectional():
        return None
    sequences = []
    for rule in p_trs:
        steps = reach_bounded(rule.rhs, rule.lhs, p_trs, bound)
        if steps is None:
            return None
        sequences.append((rule.name, tuple(steps)))
    return ReversibilityWitness(bound, tuple(sequences))


def replay_reversibility(p_trs: Trs, witness: ReversibilityWitness) -> bool:
    """Re-check a reversibility witness step by step."""
    names = {r.name for r in p_trs}
    if {n for n, _ in witness.sequences} != names:
        return False
    for name, steps in witness.sequences:
        rule = p_trs.rule(name)
        try:
            end = replay_steps(rule.rhs, steps, p_trs)
        except ValueError:
            return False
        if end != rule.lhs:
            return False
    return True
