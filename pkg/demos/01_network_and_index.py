"""Load a small sewer network, validate it and query upstream closures.

A sewer network is a forest of in-trees: every manhole drains into at most
one downstream manhole, and outfalls drain nowhere.
"""

from sewer_osp.network import build_upstream_index, is_upstream, parse_network, validate_network

NODES = """id,x,y
a,0,2
b,2,2
c,1,1
d,1,0
e,3,1
"""
EDGES = """from,to
a,c
b,c
c,d
e,d
"""

net = parse_network(NODES, EDGES)
print(f"{net.n} manholes, {net.num_edges} pipes")
print(validate_network(net).to_text())

idx = build_upstream_index(net)
for i in range(net.n):
    ups = [net.label(j) for j in idx.closure(i).nonzero()[0]]
    print(f"upstream of {net.label(i)}: {ups} (size {idx.up_size[i]})")

print("a drains through c:", is_upstream(idx, net.node_id("a"), net.node_id("c")))

# a second outgoing pipe breaks the in-tree model and is reported, not silently fixed
bad = parse_network(NODES, EDGES + "a,b\n")
print(validate_network(bad).to_text())
