"""
A small receiver sweep
======================

The same machinery the command line uses: a config, a sweep and a CSV with
its summary. Kept to a few trials so it finishes in seconds.
"""

import tempfile
from pathlib import Path

from nomaidnc.experiment import emit_results, figure_config, run_sweep, summarize

cfg = figure_config("receivers", trials=10)
rows = run_sweep(cfg)

out = Path(tempfile.mkdtemp()) / "receivers.csv"
emit_results(rows, out)
print(f"wrote {len(rows)} rows to {out}")

print(f"\n{'scheme':18s}" + "".join(f"  M={m:<5d}" for m in cfg.M))
table = {}
for scheme, _, value, n, mean, hw in summarize(rows):
    table.setdefault(scheme, []).append(mean)
for scheme, means in table.items():
    print(f"{scheme:18s}" + "".join(f"  {m:7.1f}" for m in means))
