"""Two ways to protect the number of runs: the periodic inner code and colour classes."""
from insdel_fcc.channel import simulate
from insdel_fcc.constructions import runs_as_locally_bounded, runs_construction
from insdel_fcc.words_metric import insdel_distance

for k in (4, 6):
    periodic = runs_construction(k, 1)
    coloured = runs_as_locally_bounded(k, 1)
    print(f"k={k}: periodic r={periodic.r} verdict {periodic.report.verdict}, "
          f"success {simulate(periodic, adversary='exhaustive').success_rate:.3f}; "
          f"coloured r={coloured.r} verdict {coloured.report.verdict}, "
          f"success {simulate(coloured, adversary='exhaustive').success_rate:.3f}")

x, y, _ = runs_construction(2, 1).report.counterexample
enc = runs_construction(2, 1)
print(f"\nsmallest collision: {x} -> {enc.encode(x)}, {y} -> {enc.encode(y)}, "
      f"distance {insdel_distance(enc.encode(x), enc.encode(y))}")
