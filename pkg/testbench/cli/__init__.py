"""Command line surface: one subcommand per testbench operation."""
