"""
Constructive proofs
===================

A program is constructive when every signal and its termination are
settled by a finite proof, positive or negative.
"""

from esterel_causality import load
from esterel_causality.formulas import InputEvaluation, trans
from esterel_causality.grounding import ground_space
from esterel_causality.proofs import Prover, classify_constructive, render_proof
from esterel_causality.syntax import NIL, Par

src = """
output o;
present s then emit o else nothing end || emit s
"""
ctx = load(src)
u = ground_space(ctx)
prover = Prover(u)

cv = classify_constructive(u, ctx, prover=prover)
print("constructive:", cv.constructive)
for (I, ob), res in cv.per_obligation.items():
    print(" ", I, ob, res.status)

# the proof of o's transition goes through the emission of s
o = next(x for x in u.signals if x.name == "o")
goal = trans(ctx.context, InputEvaluation(), o, Par(NIL, NIL))
print(render_proof(prover.prove(goal)))

# a program that only emits s when it already knows s is present
ctx = load("present s then emit s else emit s end")
u = ground_space(ctx)
cv = classify_constructive(u, ctx)
print("constructive:", cv.constructive, [(str(I), ob) for I, ob in cv.failures()])

# negative proofs refute every rule that could conclude the opposite
ctx = load("input i; output o; present i then emit o end")
u = ground_space(ctx)
prover = Prover(u)
cv = classify_constructive(u, ctx, prover=prover)
for (I, ob), res in cv.per_obligation.items():
    if ob == "o" and res.trees:
        print(I)
        print(render_proof(res.trees[0]))
