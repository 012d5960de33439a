"""Concentration bounds, exact binomial oracles and threshold expressions."""
