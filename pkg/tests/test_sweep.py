"""
Tests for parameter-grid sweeps.
"""

import pytest
from pydantic import ValidationError

from mersenne_divisibility.config import Configuration
from mersenne_divisibility.exceptions import GuardExceededError
from mersenne_divisibility.models import DivInstance
from mersenne_divisibility.sweep import SweepConfig, evaluate_partition, evaluate_point, run_sweep


def collect(config):
    records, skipped = [], []
    for partition in run_sweep(config):
        records.extend(partition.records)
        skipped.extend(partition.skipped)
    return records, skipped


class TestSweepConfig:
    """Test sweep configuration validation."""

    def test_defaults(self):
        """Test that the defaults are the verify preset."""
        config = SweepConfig()

        assert config.a_range == (2, 5)
        assert config.m_range == (1, 24)
        assert config.k_range == (1, 4)
        assert config.d_range == (2, 6)
        assert config.jobs == 1
        assert config.format == "table"
        assert config.size() == 1840

    @pytest.mark.parametrize(
        "overrides",
        [
            {"a_range": (1, 3)},
            {"m_range": (0, 3)},
            {"k_range": (0, 3)},
            {"d_range": (1, 3)},
            {"jobs": 0},
            {"format": "xml"},
            {"on_guard": "ignore"},
            {"max_bits": 0},
        ],
    )
    def test_invalid(self, overrides):
        """Test rejected configurations."""
        with pytest.raises(ValidationError):
            SweepConfig(**overrides)

    def test_empty_range_allowed(self):
        """Test that an empty range is a valid, empty grid."""
        config = SweepConfig(m_range=(5, 4))
        assert config.size() == 0

    def test_from_configuration(self):
        """Test building from loaded settings."""
        configuration = Configuration()
        configuration.sweep.a_range = [2, 3]
        configuration.sweep.include_poly = True
        configuration.output.format = "json"
        configuration.guard.max_bits = 777

        config = SweepConfig.from_configuration(configuration)

        assert config.a_range == (2, 3)
        assert config.include_poly is True
        assert config.format == "json"
        assert config.max_bits == 777


class TestEvaluation:
    """Test evaluation of grid points."""

    def test_evaluate_point(self):
        """Test a single record."""
        record = evaluate_point(DivInstance(2, 4, 2, 3), include_poly=True)

        assert record.criterion is True
        assert record.oracle is True
        assert record.poly is True
        assert record.elapsed_micros == 0

    def test_evaluate_point_without_poly(self):
        """Test that the polynomial verdict is absent unless requested."""
        record = evaluate_point(DivInstance(2, 6, 2, 3))

        assert record.criterion is False
        assert record.oracle is False
        assert record.poly is None

    def test_partition_order(self):
        """Test lexicographic order inside a partition."""
        config = SweepConfig(a_range=(2, 2), m_range=(1, 2), k_range=(1, 2), d_range=(2, 3))
        result = evaluate_partition((config, 2))

        assert [(r.m, r.k, r.d) for r in result.records] == [
            (1, 1, 2), (1, 1, 3), (1, 2, 2), (1, 2, 3),
            (2, 1, 2), (2, 1, 3), (2, 2, 2), (2, 2, 3),
        ]


class TestRunSweep:
    """Test complete sweeps."""

    def test_small_grid(self):
        """Test a=2..3, m=1..8, k=1..3, d=2..4 with zero mismatches."""
        config = SweepConfig(a_range=(2, 3), m_range=(1, 8), k_range=(1, 3), d_range=(2, 4))
        records, skipped = collect(config)

        assert len(records) == 144
        assert skipped == []
        assert all(record.is_consistent() for record in records)

    def test_with_poly(self):
        """Test the polynomial verdict on m, k <= 6, d <= 5."""
        config = SweepConfig(
            a_range=(2, 3), m_range=(1, 6), k_range=(1, 6), d_range=(2, 5), include_poly=True
        )
        records, _ = collect(config)

        assert len(records) == 2 * 6 * 6 * 4
        assert all(record.poly == record.criterion for record in records)

    def test_empty_range(self):
        """Test that an empty range yields no records."""
        records, skipped = collect(SweepConfig(d_range=(3, 2)))
        assert records == []
        assert skipped == []

    def test_parallel_matches_sequential(self):
        """Test that the record stream does not depend on the number of jobs."""
        base = dict(a_range=(2, 4), m_range=(1, 10), k_range=(1, 3), d_range=(2, 4))
        sequential, _ = collect(SweepConfig(**base))
        parallel, _ = collect(SweepConfig(jobs=3, **base))

        assert parallel == sequential

    def test_guard_skip(self):
        """Test that oversized points are skipped and reported."""
        config = SweepConfig(a_range=(2, 2), m_range=(1, 12), k_range=(1, 1), d_range=(2, 2), max_bits=10)
        records, skipped = collect(config)

        assert [r.m for r in records] == [1, 2, 3, 4, 5]
        assert skipped == [(2, m, 1, 2) for m in range(6, 13)]

    def test_guard_fail(self):
        """Test that on_guard=fail raises the guard error."""
        config = SweepConfig(
            a_range=(2, 2), m_range=(1, 12), k_range=(1, 1), d_range=(2, 2), max_bits=10, on_guard="fail"
        )
        with pytest.raises(GuardExceededError):
            collect(config)

    def test_timing(self):
        """Test that timing fills in elapsed microseconds only when enabled."""
        config = SweepConfig(a_range=(2, 2), m_range=(1, 2), k_range=(1, 1), d_range=(2, 2), timing=True)
        records, _ = collect(config)

        assert all(record.elapsed_micros >= 0 for record in records)

    @pytest.mark.slow
    def test_verify_preset(self):
        """Test the full verify preset: 1840 records, zero mismatches."""
        records, skipped = collect(SweepConfig())

        assert len(records) == 1840
        assert skipped == []
        assert all(record.is_consistent() for record in records)
