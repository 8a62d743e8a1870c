"""Unit tests for this package."""
