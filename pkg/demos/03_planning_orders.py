"""Orderings and assignments for the box-packing task.

The handoffs induce a partial order on petals. Any linear extension of it
that also survives compilation is a feasible way to sequence the work, and
a capability table lets the planner pick owners before sequencing.
"""
import json

from madtn import (
    UNASSIGNED,
    compile_to_stn,
    enumerate_orders,
    greedy_assign,
    load_packaged_example,
    packaged_example_path,
    parse_daisy,
    partial_order,
    solve,
)

doc = load_packaged_example()
daisy = doc.daisy

# The precedence web, straight from the constraints. Note the lone edge
# the same agent serves on both ends (Pack Object C feeds Seal Package):
# it still orders the petals even though nothing changes hands.
precedence = partial_order(daisy)
print("must precede:")
for before, after in sorted(precedence.edges):
    print(f"  {before} -> {after}")

orders = enumerate_orders(daisy)
print(f"\n{len(orders)} feasible orders:")
for order in orders:
    print("  " + ", ".join(order))

# Tightening the deadline prunes the list. At 8 seconds the human can no
# longer afford the detour of fetching object C before object A, nor the
# robot packing A before wrapping B; only the prompt orders survive.
raw = json.loads(packaged_example_path().read_text())
raw["makespan"] = [0.0, 8.0]
rushed = parse_daisy(raw).daisy
pruned = enumerate_orders(rushed)
print(f"\nwith an 8 s deadline, {len(pruned)} orders remain:")
for order in pruned:
    lower, _ = solve(compile_to_stn(rushed, ordering=order)).bounds(
        rushed.start, rushed.end
    )
    print(f"  at best {lower:g}s  " + ", ".join(order))

# Assignment. Strip the authored owners, then let the capability table
# pick them back: highest score wins each petal, ties to the smaller id.
blank = daisy.with_petals(tuple(p.with_owner(UNASSIGNED) for p in daisy.petals))
assigned = greedy_assign(blank, doc.capabilities)
print("\ngreedy assignment from the capability table:")
for petal, original in zip(assigned.petals, daisy.petals):
    note = "" if petal.owner == original.owner else "  (changed)"
    print(f"  {petal.name}: {petal.owner}{note}")
