"""Exact hypercombinatorics for complexity-one torus actions."""
