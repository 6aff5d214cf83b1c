"""Single-junction BML traffic variant: exact simulation and analysis lab."""

from .analysis import (CycleReport, NamedCheck, SegmentStats, StructureReport,
                       c_of_p, count_segments, find_cycle,
                       iter_hypothesis_states, m_bounds, per_color_segments,
                       speed_bound, stable_structure_report,
                       verify_theorem_suite)
from .direct import (DirectState, MoveCount, direct_from_cars, direct_run,
                     direct_step)
from .engine import JunctionEngine
from .errors import (DensityTooHigh, EmptyInterval, HypothesisNotMet,
                     JunctionDoublyOccupied, ResourceLimit)
from .experiments import (CSV_HEADER, AggregateRow, RunRecord, SweepSpec,
                          aggregate, format_table, run_experiment,
                          sample_junction, sweep, write_csv)
from .normalized import (NormalizedState, PushEvent, PushKind, ViolationSet,
                         from_normalized, gap_count, is_free_flowing,
                         normalized_from_cars, normalized_step, to_normalized,
                         violations)
from .rng import BLUE_STREAM_SALT, SplitMix64, as_fraction, partial_sample, round_half_up
from .torus import (OutcomeKind, RunOutcome, TorusGrid, classify_run,
                    torus_random, torus_step, write_frame)

__version__ = "0.1.0"
