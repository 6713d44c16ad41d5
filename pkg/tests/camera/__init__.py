"""
Tests for src.camera.
"""
