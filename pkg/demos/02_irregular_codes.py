"""Shortest codes meeting a pairwise distance requirement, exact and greedy."""
import numpy as np

from insdel_fcc.bounds import hamming_plotkin_lower, minimal_supersequence_length, plotkin_like_lower
from insdel_fcc.irregular_search import gv_bound, gv_greedy_construct, search_min_length
from insdel_fcc.matrices import DistanceMatrix

rng = np.random.default_rng(11)
for _ in range(6):
    M = int(rng.integers(2, 6))
    upper = np.triu(rng.integers(0, 7, size=(M, M)), 1)
    m = DistanceMatrix(upper + upper.T)
    exact = search_min_length(m)
    greedy = gv_greedy_construct(m)
    print(m.entries.tolist())
    print(f"  hamming {hamming_plotkin_lower(m).value}  plotkin {plotkin_like_lower(m, minimal_supersequence_length(m)).value}"
          f"  exact {exact.min_length} {exact.words}  greedy {greedy.min_length}  gv {gv_bound(m)}")
