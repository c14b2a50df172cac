"""Distances, spheres and balls in the insertion-deletion metric."""
from insdel_fcc.channel import apply_channel, events_between
from insdel_fcc.words_metric import (deletion_sphere, insdel_ball, insdel_distance, insertion_sphere,
                                     lcs_length, run_profile, runs_deletion_bounds)

pairs = [("101", "010"), ("000010111", "111100000"), ("0110", "1100")]
for x, y in pairs:
    events = events_between(x, y)
    print(f"{x} -> {y}: lcs {lcs_length(x, y)}, distance {insdel_distance(x, y)}, "
          f"{len(events)} edits, replay ok: {apply_channel(x, events) == y}")

word = "0100101"
prof = run_profile(word)
print(f"\n{word}: {prof.run_count} runs, longest run {prof.max_run}")
for t in range(4):
    lo, hi = runs_deletion_bounds(word, t)
    print(f"  t={t}: |D_t| = {len(deletion_sphere(word, t)):3d}  (run-count bounds {lo}..{hi}), "
          f"|I_t| = {len(insertion_sphere(word, t))}")

print("\nball of radius 2 around 00:", insdel_ball("00", 2))
