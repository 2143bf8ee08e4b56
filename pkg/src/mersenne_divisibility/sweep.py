"""
Parameter-grid sweeps comparing the divisibility criterion with the oracles.

The grid is walked in lexicographic order of (a, m, k, d). With more than one
job the grid is partitioned by the leading coordinate ``a``; partitions are
evaluated in worker processes and handed back in order, so the output does not
depend on the number of jobs.
"""

import logging
import time
from multiprocessing import Pool
from typing import Iterator, List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import DEFAULT_MAX_BITS, DEFAULT_MAX_DEGREE, Configuration
from .exceptions import BudgetExceededError, GuardExceededError
from .mersenne import divides_criterion, divides_oracle
from .models import DivInstance, PartitionResult, SweepRecord
from .polyring import mersenne_quotient


logger = logging.getLogger(__name__)

_MINIMA = {"a_range": 2, "m_range": 1, "k_range": 1, "d_range": 2}


class SweepConfig(BaseModel):
    """Grid bounds (inclusive) and evaluation options of a sweep."""
    model_config = ConfigDict(frozen=True)

    a_range: Tuple[int, int] = (2, 5)
    m_range: Tuple[int, int] = (1, 24)
    k_range: Tuple[int, int] = (1, 4)
    d_range: Tuple[int, int] = (2, 6)
    include_poly: bool = False
    max_bits: int = Field(default=DEFAULT_MAX_BITS, ge=1)
    max_degree: int = Field(default=DEFAULT_MAX_DEGREE, ge=1)
    jobs: int = Field(default=1, ge=1)
    format: Literal["json", "csv", "table"] = "table"
    seed: int = Field(default=0, ge=0)
    timing: bool = False
    on_guard: Literal["skip", "fail"] = "skip"

    @model_validator(mode="after")
    def _check_minima(self) -> "SweepConfig":
        for name, minimum in _MINIMA.items():
            low, _ = getattr(self, name)
            if low < minimum:
                raise ValueError(f"{name} lower bound must be >= {minimum}, got {low}")
        return self

    @classmethod
    def from_configuration(cls, config: Configuration) -> "SweepConfig":
        """Build a sweep configuration from the loaded settings."""
        return cls(
            a_range=tuple(config.sweep.a_range),
            m_range=tuple(config.sweep.m_range),
            k_range=tuple(config.sweep.k_range),
            d_range=tuple(config.sweep.d_range),
            include_poly=config.sweep.include_poly,
            max_bits=config.guard.max_bits,
            max_degree=config.guard.max_degree,
            jobs=config.sweep.jobs,
            format=config.output.format,
            seed=config.factor.seed,
            timing=config.output.timing,
            on_guard=config.sweep.on_guard,
        )

    def leading_values(self) -> List[int]:
        return list(range(self.a_range[0], self.a_range[1] + 1))

    def points(self, a: int) -> Iterator[Tuple[int, int, int, int]]:
        """Grid points with leading coordinate ``a`` in lexicographic order."""
        for m in range(self.m_range[0], self.m_range[1] + 1):
            for k in range(self.k_range[0], self.k_range[1] + 1):
                for d in range(self.d_range[0], self.d_range[1] + 1):
                    yield (a, m, k, d)

    def size(self) -> int:
        return _span(self.a_range) * _span(self.m_range) * _span(self.k_range) * _span(self.d_range)


def _span(bounds: Tuple[int, int]) -> int:
    return max(0, bounds[1] - bounds[0] + 1)


def evaluate_point(
    inst: DivInstance,
    include_poly: bool = False,
    max_bits: int = DEFAULT_MAX_BITS,
    max_degree: int = DEFAULT_MAX_DEGREE,
    timing: bool = False,
) -> SweepRecord:
    """Criterion, oracle and (optionally) polynomial verdicts for one instance."""
    started = time.perf_counter_ns()
    criterion = divides_criterion(inst.m, inst.k, inst.d)
    oracle = divides_oracle(inst, max_bits)
    poly = None
    if include_poly:
        poly = mersenne_quotient(inst.m, inst.k, inst.d, max_degree) is not None
    elapsed = (time.perf_counter_ns() - started) // 1000 if timing else 0
    return SweepRecord(
        a=inst.a,
        m=inst.m,
        k=inst.k,
        d=inst.d,
        criterion=criterion,
        oracle=oracle,
        poly=poly,
        elapsed_micros=elapsed,
    )


def evaluate_partition(task: Tuple[SweepConfig, int]) -> PartitionResult:
    """Evaluate every grid point with leading coordinate ``a``."""
    config, a = task
    result = PartitionResult(a=a)
    for point in config.points(a):
        try:
            record = evaluate_point(
                DivInstance(*point),
                include_poly=config.include_poly,
                max_bits=config.max_bits,
                max_degree=config.max_degree,
                timing=config.timing,
            )
        except (GuardExceededError, BudgetExceededError) as e:
            if config.on_guard == "fail":
                raise
            logger.debug(f"skipping {point}: {e}")
            result.skipped.append(point)
            continue
        result.records.append(record)
    logger.debug(f"partition a={a}: {len(result.records)} records, {len(result.skipped)} skipped")
    return result


def run_sweep(config: SweepConfig) -> Iterator[PartitionResult]:
    """Yield partition results in increasing order of the leading coordinate."""
    values = config.leading_values()
    logger.debug(f"sweeping {config.size()} points over {len(values)} partitions with {config.jobs} job(s)")
    tasks = [(config, a) for a in values]
    if config.jobs == 1 or len(tasks) <= 1:
        for task in tasks:
            yield evaluate_partition(task)
        return

    with Pool(processes=min(config.jobs, len(tasks))) as pool:
        # imap hands results back in submission order.
        yield from pool.imap(evaluate_partition, tasks)

