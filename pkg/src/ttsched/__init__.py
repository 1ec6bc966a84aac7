"""Slot schedules that need no neighbour knowledge, for packets with per-frame deadlines."""

from .analytics import (aloha_average_lb, aloha_pair_lb, collision_free_profile,
                        combination_average_lb, critical_density, expected_deliveries,
                        gf_average_lb, tdma_average, throughput_case1, throughput_case2)
from .schemes import (Schedule, SequenceSet, aloha_probability, blocked,
                      combination_min_length, combination_sequences, gf_params,
                      gf_sequences, tdma_sequences)
from .simulator import SimConfig, SimResult, run, run_experiment
from .topology import Topology, generate_topology

__version__ = "0.1.0"
