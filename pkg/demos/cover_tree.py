"""Grow a ball in the universal cover and check it against the quotient.

Run with ``python3 demos/cover_tree.py [out.dot]``; the optional argument
writes the ball in Graphviz format.
"""

import sys

from maxsym.families import edge_graph, triangle
from maxsym.formats import cover_tree_to_dot
from maxsym.ucover import bushy_witness, build_truncated_cover, check_local_even_covering

g = edge_graph(3, 2)
t = build_truncated_cover(g, "u", 3)
print("EDGE(3,2) from the index-3 side, level sizes:", t.level_sizes())
print("every interior vertex has valence equal to its image's total index:",
      all(t.valence(n) == g.total_index(v.image) for n, v in t.vertices.items() if t.is_interior(n)))
print("local even covering:", bool(check_local_even_covering(t)))
print("branch vertex seen from the root:", bushy_witness(t))

tri = triangle(2, 3, 2, 3, 2, 3)
ball = build_truncated_cover(tri, tri.vertices[0], 4)
print("\ntriangle 2,3 | 2,3 | 2,3, depth 4 level sizes:", ball.level_sizes())

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(cover_tree_to_dot(t))
    print("wrote", sys.argv[1])
