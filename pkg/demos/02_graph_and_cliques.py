"""
IDNC graphs and clique search
=============================

Build the rate-annotated coding graph for a small side-information pattern
and compare the two greedy clique heuristics with the exact search.
"""

import numpy as np

from nomaidnc import SideInfo, build_graph, clique_to_layer
from nomaidnc.clique import exact_max_weight_clique, mwp_mwv_search, mwv_search

# Four receivers, four packets; row m lists the packets receiver m still wants.
wants = SideInfo.from_sets([{0, 2}, {1}, {0, 1}, {3}], num_packets=4)
caps = np.array([3.0, 2.0, 2.5, 1.0])
everyone = range(4)

g = build_graph(wants, caps, everyone)
print(f"{len(g)} vertices, {g.num_edges} edges, rates {g.rate_set}")

for name, search in [("MWV", mwv_search), ("MWP-MWV", mwp_mwv_search),
                     ("exact", exact_max_weight_clique)]:
    k = search(g)
    layer = clique_to_layer(g, k, wants, caps, everyone)
    print(f"{name:8s} packet {sorted(layer.packet)} at {layer.rate} bps/Hz "
          f"-> receivers {sorted(layer.targets)}, throughput {layer.throughput:.2f}")
