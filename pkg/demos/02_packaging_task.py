"""The shipped box-packing task, from document to schedule.

A task is a daisy: petals of consecutive actions around a shared start and
end, each petal owned by one agent, with cross-petal constraints gluing
the petals together. Compiling a daisy produces the temporal network that
demo 01 introduced, and everything from there is plain network solving.
"""
from madtn import (
    ConstraintKind,
    compile_to_stn,
    earliest_schedule,
    load_packaged_example,
    solve,
)

doc = load_packaged_example()
daisy = doc.daisy
print(doc.comments)

print("\nagents:")
for agent in daisy.agents:
    print(f"  {agent.id}: {agent.name}")

print("\npetals:")
for petal in daisy.petals:
    spread = sum(a.lower for a in petal.actions)
    print(f"  {petal.name} ({petal.owner}, at least {spread:g}s)")
    for action in petal.actions:
        print(f"      {action.name}: [{action.lower:g}, {action.upper:g}]")

# The handoffs are what make this a team task: four of the five pass work
# between the two agents, the fifth hands the human its own sealing work.
print("\nhandoffs:")
for c in daisy.constraints:
    if c.kind is not ConstraintKind.HANDOFF:
        continue
    print(f"  {c.source.label} -> {c.target.label}")

stn = compile_to_stn(daisy)
graph = solve(stn)
print(f"\ncompiled: {len(stn)} timepoints, {len(stn.constraints)} constraints")
print("consistent:", graph.consistent)
lower, upper = graph.bounds(daisy.start, daisy.end)
print(f"task duration window: [{lower:g}, {upper:g}] seconds")

# The earliest schedule, listed per agent. Watch the robot idle from 1.5 s
# to 3.0 s: it cannot pack object A before the human has delivered it.
print("\nearliest schedule:")
times = earliest_schedule(stn)
for agent in daisy.agents:
    print(f"  {agent.id}:")
    for petal in daisy.petals:
        if petal.owner != agent.id:
            continue
        for action in petal.actions:
            begin = times[action.start]
            finish = times[action.end]
            print(f"    {begin:5.1f} .. {finish:5.1f}  {petal.name}: {action.name}")
