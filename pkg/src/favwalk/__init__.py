"""Favorite edges and downcrossing sites of simple random walk.

Exact tracking of local times and most-visited sets, brute-force oracles,
and reproducible Monte Carlo experiments on their scaling laws.
"""
from .favorites import (ArgmaxSet, FavoritesState, check_edge_downcross_lemma,
                        extremal_abs, favorite_downcross, favorite_edges,
                        favorite_sites, update_on_step)
from .localtime import CountField
from .oracle import (ExactDistribution, brute_favorites, brute_local_times,
                     enumerate_paths, verify_all_paths, verify_invariants)
from .rng import RecordedPath, Seed, StepStream, WalkState, advance, new_stream, next_step
from .stats import (CheckpointRecord, InverseLocalTimeRecord, RunningExtrema,
                    ScheduleSpec, gamma_ratio, inverse_local_time_track,
                    inverse_local_times, lil_ratio, record_checkpoint,
                    schedule_points, update_running_extrema)
from .tracker import WalkTracker

__version__ = "0.1.0"
