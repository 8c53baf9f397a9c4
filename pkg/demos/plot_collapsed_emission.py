"""
Deriving emission from transitions
==================================

Replacing the emission rules by a single rule that reads emission off
a transition loses constructiveness on cyclic-looking programs.
"""

from esterel_causality.cli import CORPUS_DIR, format_table, run_corpus

standard = run_corpus(CORPUS_DIR)
collapsed = run_corpus(CORPUS_DIR, collapsed=True)

print(format_table(standard))
print()
print(format_table(collapsed))

# the logical verdicts agree, only the proofs change
for a, b in zip(standard, collapsed):
    flip = "" if a["constructive"] == b["constructive"] else "  <- changes"
    print(a["name"], a["status"], b["status"], a["constructive"], b["constructive"], flip)
