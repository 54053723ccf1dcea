"""Tests for the SSC kernel."""
