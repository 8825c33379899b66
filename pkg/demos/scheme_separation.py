"""Walk through the five-node instance on which the three schemes disagree.

Run: python3 demos/scheme_separation.py
"""

from importlib import resources

from weakcsr.bounds import T, T1, T2, literature_bounds, scheme_bounds
from weakcsr.csr import SCHEMES, csr_terms, run_scheme
from weakcsr.io import format_scalar, parse_matrix
from weakcsr.oracle import exact_t1, exact_t2, exact_transient

A = parse_matrix((resources.files("weakcsr") / "data" / "separator5.txt").read_text())
triple = csr_terms(A)
print(A, "\n")
print(f"T(A) = {exact_transient(A).value}\n")
print(f"{'scheme':<20}{'removed':<16}{'λ(B)':>6}{'T1':>5}{'T2':>5}"
      f"{'bound T1':>10}{'bound T2':>10}{'combined':>10}")
for s in SCHEMES:
    r = run_scheme(A, s)
    rep = scheme_bounds(A, r)
    removed = "{" + ",".join(str(i + 1) for i in sorted(r.removed_nodes)) + "}"
    print(f"{s:<20}{removed:<16}{format_scalar(r.lambda_B):>6}"
          f"{exact_t1(A, r, triple).value:>5}{exact_t2(A, r, triple).value:>5}"
          f"{rep.best(T1):>10}{format_scalar(rep.best_value(T2)):>10}"
          f"{format_scalar(rep.best_value(T)):>10}")
lit = literature_bounds(A).get("lit_ha_matrix")
print(f"\nearlier bound from the literature: {format_scalar(lit.value)}")
