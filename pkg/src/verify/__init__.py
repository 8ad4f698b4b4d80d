"""Brute-force oracles, extremal families and sweeps for checking the bounds."""

from src.verify.objective import lower_three_block_objective, maximize_three_block, three_block_objective
from src.verify.oracles import dh_oracle, smooth_oracle
from src.verify.suites import VERIFY_TARGETS, run_target
from src.verify.sweep import SweepConfig, SweepReport, sweep_bounds

__all__ = [
    'smooth_oracle', 'dh_oracle',
    'three_block_objective', 'lower_three_block_objective', 'maximize_three_block',
    'SweepConfig', 'SweepReport', 'sweep_bounds',
    'VERIFY_TARGETS', 'run_target',
]
