"""Experiment layer: point-set files, generators, verification campaigns,
statistical sweeps, and the CLI."""

from .campaigns import ExperimentPlan, SweepRow, critical_size, run_sweep, run_verify_spheres
from .generators import sample_random_set, structured_set
from .setio import load_set, save_set
