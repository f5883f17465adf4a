"""Reducing alignment uncertainty automatically.

Four transforms: the confidence cut (trimming), the two-pass
strongest-first disambiguation, the exact maximum-weight matching, and
the rewrite of ambiguous equivalences into subsumptions.
"""

from ontoweave import (
    Alignment,
    Correspondence,
    RelationType,
    disambiguate_max_weight,
    disambiguate_two_pass,
    rewrite_ambiguous_to_subsumption,
    trim,
)


def cells(*rows):
    return [Correspondence(e1, e2, rel, conf) for e1, e2, rel, conf in rows]


def show(label, alignment):
    print(f"{label}:")
    for c in alignment.cells:
        print(f"  {c.entity1:28s} {c.relation.symbol} {c.entity2:36s} [{c.confidence}]")


EQ = RelationType.EQUIVALENCE

# a competing pair with distinct confidences: keep the strongest
congo = Alignment(cells=cells(
    ("a#Repub._of_the_Congo", "b#Democratic_Republic_of_the_Congo", EQ, 0.76),
    ("a#Repub._of_the_Congo", "b#Congo", EQ, 0.8),
))
show("competing Congo cells", congo)
show("after two-pass disambiguation", disambiguate_two_pass(congo))

# an exact tie cannot be broken automatically: both cells stay
tie = Alignment(cells=cells(
    ("a#Republic_of_Congo", "b#Congo_(Brazzaville)", EQ, 0.8),
    ("a#Republic_of_Congo", "b#Congo_(Kinshasa)", EQ, 0.8),
))
show("\nexact tie", tie)
show("after two-pass disambiguation (both kept)", disambiguate_two_pass(tie))

# ambiguous equivalences often hide a part-of story; rewrite them as
# subsumptions with the shared entity as the more general one
sudan = Alignment(cells=cells(
    ("a#Sudan_(former)", "b#Sudan", EQ, 1.0),
    ("a#Sudan_(former)", "b#South_Sudan", EQ, 1.0),
))
show("\nambiguous Sudan equivalences", sudan)
show("after subsumption rewrite", rewrite_ambiguous_to_subsumption(sudan))

# local strongest-first and global max-weight can disagree
grid = Alignment(cells=cells(
    ("a#e1", "b#f1", EQ, 0.9),
    ("a#e1", "b#f2", EQ, 0.8),
    ("a#e2", "b#f1", EQ, 0.8),
    ("a#e2", "b#f2", EQ, 0.1),
))
show("\n2x2 grid", grid)
show("two-pass (locally strongest)", disambiguate_two_pass(grid))
show("max-weight (globally best total)", disambiguate_max_weight(grid))

# trimming is a plain confidence cut
noisy = Alignment(cells=cells(
    ("a#x", "b#x", EQ, 1.0),
    ("a#y", "b#junk", EQ, 0.31),
    ("a#z", "b#z", EQ, 0.77),
))
show("\nnoisy alignment", noisy)
show("after trim at alpha=0.5", trim(noisy, 0.5))
