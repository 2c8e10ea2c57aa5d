"""Configuration, snapshots, the verification suite and the CLI."""
