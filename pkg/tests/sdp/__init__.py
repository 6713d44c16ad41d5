"""
Tests for src.sdp.
"""
