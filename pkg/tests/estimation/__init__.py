"""
Tests for src.estimation.
"""
