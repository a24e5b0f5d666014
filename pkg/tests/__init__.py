"""Tests for adenewton."""
