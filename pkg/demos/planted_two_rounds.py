"""A graph that needs two rounds of blowup and subcover.

The planted graphs in tests/data/multiround were built by taking a random
cover of a small target and collapsing its 1-1 edges.  Pumping one of them
finds a blowup and subcover, then a second one on the result; the two are
merged into a single blowup whose collapsing forest strictly grows.

Run with ``python3 demos/planted_two_rounds.py``.
"""

from pathlib import Path

from maxsym.formats import read_graph
from maxsym.pumping import (collapse_and_subcover, has_blowup_and_proper_subcover, pump_up, subroutine1,
                            subroutine2, verify_witness)

path = Path(__file__).resolve().parents[1] / "tests" / "data" / "multiround" / "m01.eig"
g = read_graph(path)
print("start:", g)

g1, _ = collapse_and_subcover(g)
print("after collapse and subcover:", g1)

first = subroutine1(g1, has_blowup_and_proper_subcover(g1))
print(f"round 1: blow up along {len(first.blowup.forest)} edge(s), cover onto {first.target}")
second = subroutine1(first.target, has_blowup_and_proper_subcover(first.target))
print(f"round 2: blow up along {len(second.blowup.forest)} edge(s), cover onto {second.target}")

merged = subroutine2(first, second)
verify_witness(merged)
print(f"merged: one blowup of {g1} along {len(merged.blowup.forest)} edges covering {merged.target}")

h, cert = pump_up(g)
cert.replay()
print("pump_up result:", h, "| forest sizes", cert.forest_sizes)
