"""Coverage and expected search cost of sensor placement plans.

Each sensor owns the manholes whose flow reaches it first. Coverage counts
every owned manhole; the search cost is the expected number of binary
search steps needed to localise a source inside the owning entry set.
"""

from sewer_osp.network import SewerNetwork, build_upstream_index
from sewer_osp.objectives import assign_entry_sets, entry_set_sizes, evaluate_plan, make_plan

net = SewerNetwork.from_labels("abcde", [("a", "c"), ("b", "c"), ("c", "d"), ("e", "d")])
idx = build_upstream_index(net)

for labels in (["d"], ["c"], ["c", "d"], ["a", "b", "e"]):
    plan = make_plan(net.node_id(s) for s in labels)
    m = {net.label(s): size for s, size in entry_set_sizes(plan, idx).items()}
    owners = {net.label(k): net.label(v) for k, v in assign_entry_sets(plan, idx).items()}
    obj = evaluate_plan(plan, idx)
    print(f"sensors {labels}: m={m} coverage={obj.coverage} cost={obj.search_cost:.3f}")
    print(f"  owners {owners}")
