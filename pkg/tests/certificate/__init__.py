"""
Tests for src.certificate.
"""
