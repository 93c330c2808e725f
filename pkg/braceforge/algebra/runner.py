"""Exhaustive and sampled evaluation of element laws over a finite brace.

A *law* is a vectorized predicate over element indices returning a boolean
array that is True where the law holds. Exhaustive evaluation walks the
leading arguments in flat blocks and broadcasts the last argument against
them; ranges of leading arguments can run on a thread pool. The reported
witness is always the lexicographically lowest failing tuple of the region
that was searched.

A law that is affine in its last argument is decided by that argument's
values on a spanning set: pass ``last`` = {0} plus the basis and the tail
axis shrinks from ``order`` to ``n + 1`` entries. A failing prefix is then
rescanned over every last argument so the witness is unchanged.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from loguru import logger

from braceforge.config.settings import get_settings
from braceforge.errors import BudgetExceeded, InvalidParams

Law = Callable[..., np.ndarray]


class TimeBudget:
    """Cooperative wall-clock budget checked at loop boundaries."""

    def __init__(self, seconds: float | None = None):
        self.seconds = seconds
        self.started = time.monotonic()

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def expired(self) -> bool:
        return self.seconds is not None and self.elapsed > self.seconds

    def check(self, what: str, partial: object = None) -> None:
        if self.expired():
            logger.warning(f"Time budget of {self.seconds}s exceeded during {what}")
            raise BudgetExceeded(
                f"time budget of {self.seconds}s exceeded during {what}", partial=partial
            )


UNLIMITED = TimeBudget(None)


@dataclass(frozen=True)
class SearchOutcome:
    """How many instances were evaluated and the first failing tuple."""

    checked: int
    witness: tuple[int, ...] | None

    @property
    def ok(self) -> bool:
        return self.witness is None


def _split(order: int, parts: int) -> list[range]:
    parts = max(1, min(parts, order))
    bounds = np.linspace(0, order, parts + 1).astype(int)
    return [range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def exhaustive(
    law: Law,
    order: int,
    arity: int,
    *,
    last: Sequence[int] | np.ndarray | None = None,
    threads: int = 1,
    budget: TimeBudget = UNLIMITED,
    what: str = "exhaustive check",
    block: int = 1 << 16,
) -> SearchOutcome:
    """Evaluate ``law`` on every tuple of ``[0, order)^arity``.

    Args:
        law: Vectorized predicate taking ``arity`` broadcastable index arrays
        order: Size of the element range
        arity: Number of arguments
        last: Representatives of the last argument; the law must be affine in it
        threads: Worker threads over ranges of leading arguments
        budget: Cooperative time budget, checked once per block
        what: Label used in budget messages
        block: Tuples evaluated per law call

    Returns:
        SearchOutcome counting every certified tuple and the lowest witness
    """
    if arity < 1:
        raise InvalidParams(f"laws take at least one argument, got arity {arity}")
    every = np.arange(order)
    tail = every if last is None else np.unique(np.asarray(last, dtype=np.int64))
    head_shape = (order,) * (arity - 1)
    prefixes = order ** (arity - 1)
    rows = max(1, block // tail.size)

    def evaluate(lo: int, hi: int, values: np.ndarray) -> np.ndarray:
        heads = np.unravel_index(np.arange(lo, hi), head_shape) if arity > 1 else ()
        args = [h[:, None] for h in heads] + [values[None, :]]
        return np.broadcast_to(np.asarray(law(*args), dtype=bool), (hi - lo, values.size))

    def witness_at(prefix: int) -> tuple[int, ...]:
        row = evaluate(prefix, prefix + 1, every)[0]
        head = np.unravel_index(prefix, head_shape) if arity > 1 else ()
        return (*(int(h) for h in head), int(np.argmin(row)))

    def run_chunk(chunk: range) -> SearchOutcome:
        checked = 0
        for lo in range(chunk.start, chunk.stop, rows):
            budget.check(what, partial=checked)
            hi = min(lo + rows, chunk.stop)
            ok = evaluate(lo, hi, tail).all(axis=1)
            if not ok.all():
                bad = lo + int(np.argmin(ok))
                checked += (bad - lo + 1) * order
                return SearchOutcome(checked, witness_at(bad))
            checked += (hi - lo) * order
        return SearchOutcome(checked, None)

    if threads <= 1:
        return run_chunk(range(prefixes))

    done = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(run_chunk, chunk) for chunk in _split(prefixes, threads * 4)]
        try:
            for future in futures:
                outcome = future.result()
                done += outcome.checked
                if outcome.witness is not None:
                    for pending in futures:
                        pending.cancel()
                    return SearchOutcome(done, outcome.witness)
        except BudgetExceeded as e:
            for pending in futures:
                pending.cancel()
            raise BudgetExceeded(str(e), partial=done) from e
    return SearchOutcome(done, None)


def sampled(
    law: Law,
    order: int,
    arity: int,
    count: int,
    seed: int,
    *,
    budget: TimeBudget = UNLIMITED,
    batch: int = 1 << 16,
    what: str = "sampled check",
) -> SearchOutcome:
    """Evaluate ``law`` on ``count`` uniform tuples drawn from a seeded PCG64 stream."""
    rng = np.random.default_rng(seed)
    checked = 0
    while checked < count:
        budget.check(what, partial=checked)
        m = min(batch, count - checked)
        draws = rng.integers(0, order, size=(m, arity))
        ok = np.asarray(law(*draws.T), dtype=bool)
        checked += m
        if not ok.all():
            failing = draws[~ok]
            lowest = failing[np.lexsort(failing.T[::-1])[0]]
            return SearchOutcome(checked, tuple(int(v) for v in lowest))
    return SearchOutcome(checked, None)


@dataclass(frozen=True)
class CheckMode:
    """``full`` iterates every tuple; ``sampled`` draws ``samples`` seeded tuples."""

    kind: str = "full"
    samples: int = 0
    seed: int | None = None

    @classmethod
    def full(cls) -> CheckMode:
        return cls("full")

    @classmethod
    def sampled(cls, samples: int, seed: int) -> CheckMode:
        if samples < 1:
            raise InvalidParams(f"sampled mode requires samples >= 1, got {samples}")
        return cls("sampled", samples, seed)

    @classmethod
    def auto(cls, order: int, samples: int | None = None, seed: int | None = None) -> CheckMode:
        """Full when ``order`` is at most ``full_check_max_order``, sampled otherwise."""
        settings = get_settings()
        if order <= settings.full_check_max_order:
            return cls.full()
        return cls.sampled(
            samples if samples is not None else settings.samples,
            seed if seed is not None else settings.seed,
        )

    @property
    def is_full(self) -> bool:
        return self.kind == "full"

    def run(
        self,
        law: Law,
        order: int,
        arity: int,
        *,
        last: Sequence[int] | np.ndarray | None = None,
        threads: int = 1,
        budget: TimeBudget = UNLIMITED,
        what: str = "check",
    ) -> SearchOutcome:
        """Run ``law`` in this mode; ``last`` only narrows full iteration."""
        if self.is_full:
            return exhaustive(law, order, arity, last=last, threads=threads, budget=budget, what=what)
        return sampled(law, order, arity, self.samples, self.seed or 0, budget=budget, what=what)
