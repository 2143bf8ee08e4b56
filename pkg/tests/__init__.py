"""Test suite for mersenne-divisibility."""
