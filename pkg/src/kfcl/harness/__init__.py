"""Experiment configuration, builtin covers and orchestration."""
from .builtin import builtin_cover, caps_demo_s1, caps_random, chi_demo_s1, simplex_voronoi, simplex_vertices
from .config import KINDS, ExperimentConfig
from .runner import EXIT_ERROR, EXIT_PASS, EXIT_THRESHOLD, ExperimentReport, resolve_cover, run
