"""
All schedulers on one realisation
=================================

Run every scheme on the same cell and side information, as the Monte Carlo
harness does for each trial.
"""

from nomaidnc import ALL_SCHEMES, generate_topology, run_scheme
from nomaidnc.experiment import generate_wants

topo = generate_topology(20, 500.0, seed=3)
wants = generate_wants(L=20, mu=0.6, M=20, seed=3)
print(f"{len(topo.near_ids)} of 20 receivers can cancel the far layer")

for scheme in ALL_SCHEMES:
    res = run_scheme(scheme, topo, wants)
    print(f"  {scheme.value:18s} {res.throughput:7.2f} bps/Hz  ({res.ao_iterations} iterations)")

# The two-layer decision chosen by the alternating scheduler.
d = run_scheme("NOMA-IDNC-MWP-MWV", topo, wants).decision
print(f"\nnear-layer power share {d.power.p_near / topo.p_max:.3f}")
print(f"far layer: packet {sorted(d.layer_far.packet)} at {d.layer_far.rate:.2f} bps/Hz "
      f"to {len(d.layer_far.targets)} receivers")
if not d.layer_near.is_absent:
    print(f"near layer: packet {sorted(d.layer_near.packet)} at {d.layer_near.rate:.2f} bps/Hz "
          f"to {len(d.layer_near.targets)} receivers")
