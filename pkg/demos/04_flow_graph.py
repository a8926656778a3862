"""The information flow graph and random linear network coding.

Each repair group is fed by one vertex with capacity r*alpha, so a
collector gains at most r*alpha from any group it touches. The minimum
over all collectors of the max flow is the file size the graph can carry.
"""
from lrcodes.flownet import build_flownet, closed_form_capacity, extract_code, min_cut_all_dcs, rlnc_verify
from lrcodes.verifier import exact_distance, exact_locality

net = build_flownet(n=6, r=2, M=8, alpha=3)
print(f"d={net.d}, {len(net.collectors)} collectors, {len(net.vertices)} vertices")
print(f"min cut {min_cut_all_dcs(net)}  closed form {closed_form_capacity(6, 2, 8, 3)}")

# Random coefficients at every edge. Larger fields make rank failures rarer.
net = build_flownet(6, 2, 9, 3)
for q in (2, 4, 16, 256):
    rep = rlnc_verify(net, q, trials=100, seed=1)
    print(f"q={q:3d}  all conditions met in {rep.success_rate:.0%} of trials")

# A passing trial is a concrete code; check it independently.
rep = rlnc_verify(net, 256, trials=10, seed=1)
gen = extract_code(next(t for t in rep.trials if t.passed))
print("extracted code: distance", exact_distance(gen),
      "locality", max(exact_locality(gen, i) for i in range(gen.n)))
