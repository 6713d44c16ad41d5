"""Tests for app routes."""
