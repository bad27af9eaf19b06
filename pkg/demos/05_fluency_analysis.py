"""Scoring traces with team-fluency metrics.

Given a task and a trace, the report breaks the makespan into concurrent
and sole activity, splits each agent's idleness into waiting and resting,
and measures how long work sat at each handoff. Metrics are descriptive:
an infeasible trace is analyzed just like a clean one.
"""
from madtn import (
    BehaviorProfile,
    HandoffState,
    fluency_report,
    load_packaged_example,
    simulate,
)

daisy = load_packaged_example().daisy


def show(title, trace):
    report = fluency_report(daisy, trace)
    print(f"\n{title}")
    print(f"  makespan: {report.makespan:g}s")
    for breakdown in report.idle:
        print(f"  idle {breakdown.agent}: {breakdown.total:g}s "
              f"(waiting {breakdown.waiting_time:g}s, "
              f"resting {breakdown.resting_time:g}s)")
    ca = report.concurrent_activity_time
    print(f"  concurrent activity: {ca:g}s "
          f"({report.fraction_of_makespan(ca):.0%} of the makespan)")
    for agent, spans in report.sole_activity.items():
        print(f"  sole activity {agent}: {spans.measure:g}s")
    print("  handoffs:")
    for h in report.handoffs:
        tail = f"readiness {h.readiness_delay:+g}s"
        if h.state is not HandoffState.EXACT:
            tail += f", start lag {h.functional_delay:+g}s"
        print(f"    {h.source_action} -> {h.target_action}: {h.state.value}, {tail}")
    return report


# Even the punctual run is not perfectly fluent. Object B sits wrapped for
# 3.5 s before sealing can begin (a stale handoff), and the robot waits
# 1.5 s for object A (a blocked one). Those pauses are structural: they
# come from the task, not from anyone dawdling.
punctual = show("punctual run", simulate(daisy))

# A hesitant human stretches every pause. The delay lands where the
# metrics say it should: in the robot's idle time and in the handoffs the
# human is on the receiving end of.
slow = BehaviorProfile(reaction_delay=1.5)
hesitant = show("hesitant human", simulate(daisy, profiles={"human": slow}, seed=3))

print("\ndelay attributed per agent (positive means its petals started late):")
for agent in hesitant.agents:
    print(f"  {agent}: {punctual.delay_by_agent[agent]:g}s punctual, "
          f"{hesitant.delay_by_agent[agent]:g}s hesitant")
