"""Deep-space optical link engineering: budgets, PPM capacity and design."""
from .capacity import (CapacityReport, OperatingPoint, Regime, holevo_limit,
                       ns_dimensional_factor, ppm_pc_capacity, saturation_rate, soft_capacity)
from .designer import (DesignConstraints, DesignSolution, InfeasibleDesign, ccsds_search,
                       design_for_rate, ecc_rate_for_target, optimal_order, required_power)
from .link_budget import (ComputedPointing, FixedPointing, LinkScenario, PathEnvironment,
                          Terminal, budget, received_power)
from .ppm import PoissonSlotModel, PpmConfig, data_rate, symbol_error_probability
from .quantities import db_to_linear, linear_to_db, photon_energy
from .scenarios import MissionPreset, evaluate_link

__version__ = "0.1.0"
