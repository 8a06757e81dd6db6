"""Cross-layer NOMA + instantly decodable network coding broadcast scheduling."""
from .channel import (Group, PowerAllocation, Receiver, Topology, capacity_far, capacity_near,
                      dbm_to_watt, generate_topology, path_loss_db)
from .clique import (Heuristic, exact_max_weight_clique, mwp_mwv_search, mwp_path, mwv_search,
                     two_stage_schedule)
from .errors import ConfigError, ContractError, OracleRefused
from .experiment import (ExperimentConfig, TrialResult, emit_results, figure_config,
                         generate_wants, load_config, read_results, run_sweep)
from .graph import (IdncGraph, Vertex, build_graph, clique_to_layer, is_clique,
                    is_maximal_clique)
from .idnc import (ScheduleDecision, ScheduleLayer, SideInfo, layering_gain, targeted_receivers,
                   theorem1_gain, throughput, update_wants)
from .power import (Bottleneck, PowerBounds, bottlenecks, bounds, feasibility, grid_oracle,
                    ife_optimize, phi, phi_derivative)
from .schemes import (ALL_SCHEMES, Scheme, SchemeParams, SchemeResult, idnc_plain, noma_idnc,
                      noma_rlnc, r_idnc, rlnc, run_scheme)

__version__ = "0.1.0"
