"""
Tests for src.linalg.
"""
