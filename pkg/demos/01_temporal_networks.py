"""A first look at simple temporal networks.

A network is a set of timepoints plus [lower, upper] bounds on the gaps
between them. Solving answers two questions at once: can all the bounds
hold together, and if they can, how much room does each gap really have?
"""
from madtn import INF, STN, earliest_schedule, minimal_network, solve

# One person makes an espresso. Timepoints mark instants; constraints say
# how far apart they may sit, in seconds.
stn = STN()
start = stn.add_timepoint("start")
ground = stn.add_timepoint("beans ground")
brewed = stn.add_timepoint("shot brewed")
steamed = stn.add_timepoint("milk steamed")

stn.constrain(start, ground, 30.0, 60.0)    # grinding takes 30 to 60 s
stn.constrain(ground, brewed, 25.0, 35.0)   # brewing follows immediately
stn.constrain(ground, steamed, 20.0, INF)   # steaming needs at least 20 s
stn.constrain(steamed, brewed, 0.0, INF)    # milk must be ready by the shot

graph = solve(stn)
print("consistent:", graph.consistent)
print("start to shot:", graph.bounds(start, brewed))

# The earliest schedule pushes every point as early as the bounds allow.
print("\nearliest schedule:")
times = earliest_schedule(stn)
for point in stn.timepoints:
    print(f"  {times[point]:6.1f}  {point.label}")

# The minimal network turns every implied bound into an explicit one. The
# original says nothing directly about steaming versus brewing, yet the
# bounds above leave the milk only a narrow window.
print("\nimplied windows:")
tight = minimal_network(stn)
for c in tight.constraints:
    upper = "inf" if c.upper == INF else f"{c.upper:g}"
    print(f"  {c.source.label} -> {c.target.label}: [{c.lower:g}, {upper}]")

# Demanding the shot within 50 s of the start contradicts the 55 s floor
# of grinding plus brewing. One extra constraint flips the verdict.
stn.constrain(start, brewed, 0.0, 50.0)
print("\nafter a 50 s deadline:", "consistent" if solve(stn).consistent
      else "inconsistent")
