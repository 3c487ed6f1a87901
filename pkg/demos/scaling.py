"""Runtime of two-cut synthesis on layered random models."""
import time

from secprot.generate import layered_automaton
from secprot.synthesis import UscpInstance, ucc_u

for n in (250, 500, 1000, 2000, 4000):
    a = layered_automaton(n, n_states=n, n_events=20)
    t = time.perf_counter()
    r = ucc_u(UscpInstance.build(a, u=3, v=0, threshold=2))
    dt = time.perf_counter() - t
    print(f"{n:5d} states  {len(a.transitions):6d} transitions  i_min={r.i_min}  {dt:.3f} s")
