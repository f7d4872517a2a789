"""Workbench for one-step idempotent right-modular quasigroups."""

__version__ = "0.1.0"
