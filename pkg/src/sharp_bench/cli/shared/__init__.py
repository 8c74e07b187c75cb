"""Console and option helpers shared by the CLI commands."""
