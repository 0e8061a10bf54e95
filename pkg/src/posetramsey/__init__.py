"""Poset Ramsey theory on Boolean lattices."""
