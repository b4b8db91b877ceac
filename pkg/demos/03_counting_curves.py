"""
Counting curves three ways
==========================

Each curve class is counted by plain enumeration of section pairs, by
enumeration inside the fibers E_w over the prescribed incidence divisors,
and by inclusion-exclusion over the intersection lattice of the bad strata.
The three must agree.
"""

import time

from dp4lab import picard as pc
from dp4lab import strata as st

classes = [(3, pc.F_CLASS), (4, pc.F_CLASS), (3, pc.MINUS_K), (3, pc.MINUS_K + pc.F_CLASS + pc.FPRIME)]
print(f"{'q':>2} {'class':>16} {'method':>8} {'#M':>8} {'bound':>10} {'sec':>6}")
for q, alpha in classes:
    for fn in (st.count_naive, st.count_fibered, st.count_sieve_exact):
        t0 = time.perf_counter()
        r = fn(q, alpha)
        print(f"{q:>2} {r.class_text:>16} {r.method:>8} {r.curve_count:>8} "
              f"{st.upper_bound(q, r.h):>10.0f} {time.perf_counter() - t0:>6.2f}")

###############################################################################
# a short agreement battery over the smallest heights

rep = st.counter_battery(3, 4, time_budget=120)
print(f"q=3, h<=4: {rep.complete}/{len(rep.records)} classes agree, "
      f"{len(rep.disagreements)} disagreements, {rep.seconds:.1f}s")
