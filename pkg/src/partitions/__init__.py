"""Distance partitions, their verifiers and the independence audit."""
