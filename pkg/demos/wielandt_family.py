"""Boolean Wielandt digraphs reach the Wielandt number exactly.

Run: python3 demos/wielandt_family.py
"""

from weakcsr.bounds import T1, t1_bounds
from weakcsr.digraph import wielandt
from weakcsr.generators import wielandt_matrix
from weakcsr.oracle import exact_transient

for n in range(2, 9):
    A = wielandt_matrix(n)
    print(f"n={n}: exact T = {exact_transient(A).value:3d}   Wi(n) = {wielandt(n):3d}   "
          f"best T1 bound = {t1_bounds(A).best(T1)}")
