"""Exact values of the runs redundancy lower bound next to the pair-sum it comes from."""
from insdel_fcc.bounds import runs_double_sum, runs_redundancy_lower

print(" t  pair-sum  lower bound     as float")
for t in range(1, 11):
    b = runs_redundancy_lower(t).value
    print(f"{t:2d}  {runs_double_sum(t):8d}  {str(b):>11}  {float(b):11.4f}")
