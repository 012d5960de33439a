"""HTTP surface of the bootstrap percolation toolkit."""
