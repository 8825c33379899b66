"""Show that the aggregate exploration-penalty formula for T1 can undershoot.

The formula max_girth*(n-2) + n - n_c + ep evaluates to 0 on a 2x2 matrix
whose critical graph is a 2-cycle, yet A^3 != A^1 (up to λ^2) so T1 = 2.
The componentwise version keeps the per-component cyclicity and stays sound.

Run: python3 demos/aggregate_formula_counterexample.py
"""

from weakcsr.bounds import DM_EXPLORATION_COUNTEREXAMPLE, t1_bounds
from weakcsr.core import Matrix, mat_power, scalar_times
from weakcsr.csr import csr_terms, run_scheme
from weakcsr.oracle import exact_t1
from weakcsr.spectral import critical_graph

A = Matrix([list(r) for r in DM_EXPLORATION_COUNTEREXAMPLE])
crit = critical_graph(A)
print(A)
print(f"λ = {crit.lam}, critical nodes {sorted(i + 1 for i in crit.nodes)}, "
      f"cyclicity {crit.cyclicity()}")
for t in range(1, 5):
    same = mat_power(A, t + 2) == scalar_times(2 * crit.lam, mat_power(A, t))
    print(f"A^{t + 2} == λ^2 A^{t}: {same}")
rep = t1_bounds(A)
for name in ("t1_dm_exploration", "t1_dm_exploration_componentwise"):
    e = rep.get(name)
    print(f"{name}: {e.value}  {e.excluded or ''}")
print("exact T1:", exact_t1(A, run_scheme(A, "nachtigall"), csr_terms(A)).value)
