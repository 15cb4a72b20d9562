"""Count Szym classes of all relations on at most n points.

Run with ``python3 demos/census_table.py [n_max]`` (default 4; 5 takes
well under a minute on one core).
"""

import sys

from szymrel.census import find_incompleteness_witnesses, run_census

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 4
report = run_census(n_max, progress=None)
print(report.summary())
print(f"wall time: {report.wall_time:.1f}s")

# %% Smallest classes by size of the canonical object
for rec in report.records[:6]:
    print(rec.class_id, rec.n_canonical, rec.canonical_matrix or "-", rec.classifying_graph or "-")

# %% Do any two classes share a classifying graph?
pairs = find_incompleteness_witnesses(report.records)
print(f"classes sharing a classifying graph: {len(pairs)}")
