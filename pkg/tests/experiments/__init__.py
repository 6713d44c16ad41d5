"""
Tests for src.experiments.
"""
