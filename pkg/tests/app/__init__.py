"""Tests for the FastAPI application."""
