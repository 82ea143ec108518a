"""damkit: distance-approximating minors for planar-style graphs.

Build (1+eps)-stretch terminal-distance sketches that are true minors of the
input graph, via shortest-path separator hierarchies, multi-scale portals,
detour paths, and proxy pairs; plus emulator/overlay baselines and a
brute-force verification harness.
"""

from .canonical import (CanonicalPair, CanonicalSequence,
                        canonical_sequence_on_separator, find_canonical_sequence,
                        pair_in_relpairs, pair_is_valid, pair_order_leq, rel_pairs,
                        relevant_portals)
from .dam import (BuildContext, Dam, Emulator, build_dam, build_dam_fast,
                  build_emulator, build_overlay_baseline, contract_degree2,
                  derive_eps)
from .detour import (DetourResult, count_splitting_points, detour_path, threatens)
from .distances import DistanceCache
from .errors import (DamkitError, InputError, InvariantViolation, PreconditionError)
from .fileio import parse_edgelist, parse_terminals, write_edgelist, write_terminals
from .generators import generate_badgrid, generate_grid, random_connected_graph
from .graph import (Graph, Path, PerturbedWeight, normalize_and_perturb, perturb,
                    shortest_path, sssp_distances)
from .hierarchy import (RDivision, Region, SeparatorHierarchy, build_hierarchy,
                        build_r_division, dump_hierarchy, load_hierarchy,
                        lowest_common_region, validate_hierarchy)
from .portals import PortalIndex, build_portals, portals_near
from .proxy import ProxyResult, find_proxy_pairs
from .verify import (MinorReport, StretchReport, brute_force_distances,
                     domain_replacement, measure_stretch, verify_minor)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
