"""Seeded sampling, Monte Carlo estimation and exact oracles."""
