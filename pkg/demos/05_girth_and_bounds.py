"""Girth via the universal cover, and the eigenvalue trend across levels.

The girth (shortest homotopically nontrivial closed path) is found by a
breadth-first search over tuples of reduced generator words: two distinct
cover vertices with the same image close an essential loop.  The level
controls a logarithmic lower bound.  Across growing levels the largest
nontrivial eigenvalue approaches the tree bound from below, which is the
sense in which the bound is best possible.
"""

import math

import ramcube as rc

print("girth of the level-13 graph on 2184 vertices:")
X = rc.build_complex([5], 13)
res = rc.girth(X, max_depth=12)
print(f"  girth = {res.girth}, level bound = {res.bound}, "
      f"satisfied = {res.satisfied}")

print("\nlevel family for the 6-regular series:")
print(f"  tree bound: 2*sqrt(5) = {2 * math.sqrt(5):.6f}")
print(f"  {'N1':>4} {'vertices':>9} {'girth':>6} {'mu':>9}")
for n1 in (3, 7, 11, 13):
    Xi = rc.build_complex([5], n1)
    gi = rc.girth(Xi, max_depth=12)
    sp = rc.spectrum_report(Xi)
    mu = sp.entries[0].verdict.mu
    print(f"  {n1:>4} {Xi.n_vertices:>9} {gi.girth:>6} {mu:>9.6f}")
print("\nmu stays below the tree bound at every level, while no growing")
print("family can remain bounded away from it; the girth grows with the")
print("level like 2 log_5 of the level squared")
