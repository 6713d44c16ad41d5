"""
Tests for src.learning.
"""
