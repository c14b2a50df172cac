"""Protect the VT syndrome of 2-bit messages against one insertion or deletion."""
from insdel_fcc.channel import simulate
from insdel_fcc.fcidc import build_encoder_from_code, optimal_redundancy_exact, redundancy_bracket, verify_all
from insdel_fcc.functions import vt_syndrome
from insdel_fcc.matrices import function_matrix

f = vt_syndrome(2)
print("type-2 requirement over function values:")
print(function_matrix(f, 1, kind="type2").entries)

enc = build_encoder_from_code(f, 1, ("000000", "000111", "110100"))
for x in ("00", "01", "10", "11"):
    print(f"  {x} (f={f(x)}) -> {enc.encode(x)}")
for name, rep in verify_all(enc).items():
    print(f"verifier {name}: {rep.verdict}")

bracket = redundancy_bracket(f, 1)
print("redundancy bracket", tuple(bracket), "exact optimum", optimal_redundancy_exact(f, 1).r)

summary = simulate(enc, adversary="exhaustive")
print(f"exhaustive channel: {summary.successes}/{summary.trials} decoded correctly")
