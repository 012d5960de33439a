"""Regular graph families, spec parsing and sphere geometry."""
