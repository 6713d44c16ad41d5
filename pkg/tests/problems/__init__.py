"""
Tests for src.problems.
"""
