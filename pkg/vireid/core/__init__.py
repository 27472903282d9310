"""Canonical implementation of the re-ranking and evaluation engine."""
