"""
Tests for src.geometry.
"""
