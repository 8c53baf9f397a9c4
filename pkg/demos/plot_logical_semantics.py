"""
Supported models of small programs
==================================

Counting supported models tells coherent, non-deterministic and
non-reactive programs apart.
"""

from esterel_causality import load
from esterel_causality.grounding import ground_space
from esterel_causality.models import classify_logical, residual_facts
from esterel_causality.syntax import pretty

# a program that tests a signal and then emits it
ctx = load("""
present s then emit s else nothing end
""")
u = ground_space(ctx)
print(len(u.terms), "terms,", len(u.pos_space), "positive formulae")

# two ways out: either s is emitted or it is not
lv = classify_logical(u, ctx)
print(lv.status, lv.count)
for k, m in enumerate(lv.models):
    print("model", k + 1)
    for line in m.render():
        print("   ", line)

# emitting s only when it is absent has no consistent outcome
ctx = load("present s then nothing else emit s end")
print(classify_logical(ground_space(ctx), ctx).status)

# residual terms such as nothing || nothing show up as sources too
ctx = load("output o; present s then emit o else nothing end || emit s")
u = ground_space(ctx)
m = classify_logical(u, ctx).unique_model
for f in residual_facts(u, m):
    print("residual:", pretty(f.source))
