"""Pump two small quotient graphs up to their maximally symmetric form.

Run with ``python3 demos/pump_arc_and_wallet.py``.
"""

from maxsym.covering import are_isomorphic
from maxsym.families import arc, edge_graph, wallet_triangle
from maxsym.pumping import is_maximally_symmetric, pump_up


def show(title, g, expected):
    print(f"== {title}")
    print("start:", g)
    verdict = is_maximally_symmetric(g)
    print("maximally symmetric?", bool(verdict), f"({verdict.clause})" if verdict.clause else "")
    h, cert = pump_up(g)
    for step in cert.steps:
        print(f"  {step.kind:9s} {step.source} -> {step.target}")
    cert.replay()
    print("result:", h, "| isomorphic to", expected, ":", are_isomorphic(h, expected) is not None)
    print("certificate replays; blowup forest sizes per round:", cert.forest_sizes or "none")
    print()


# A path u-m-w with indices 4,5 | 3,6.  Splitting the middle vertex into two
# vertices joined by a 1-1 edge lets the whole thing fold onto one edge.
show("arc 4,5 | 3,6", arc(4, 5, 3, 6), edge_graph(6, 4))

# A triangle whose index-1 ends collapse it to a loop, which then folds.
show("wallet triangle", wallet_triangle(), edge_graph(2, 106))

# An edge with distinct indices is already as symmetric as it gets.
show("EDGE(5,3)", edge_graph(5, 3), edge_graph(5, 3))

# Equal indices are not: the edge folds in half onto EDGE(4,2).
r = is_maximally_symmetric(edge_graph(4, 4))
print("== EDGE(4,4)")
print("maximally symmetric?", bool(r), "| clause:", r.clause, "| witness target:", r.witness.target)
