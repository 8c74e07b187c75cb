"""CLI command modules, one per subcommand, registered in main.py."""
