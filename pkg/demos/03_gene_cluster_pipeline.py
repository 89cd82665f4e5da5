"""Gene-cluster strings to trees to a learned grammar.

Gene-order strings are parsed into binary trees (runs of one gene are
merged first so tandem copies stay in one subtree), the trees become a
weighted corpus, and a corpus oracle answers membership queries by decayed
edit distance.  Learning against that oracle with the duplications
equivalence strategy yields a grammar over the observed cluster.
"""
from fractions import Fraction

from skelgram import (CorpusOracle, DuplicationsStrategy, SimulatedTeacher,
                      format_wcfg, learn, pmta_to_wcfg)
from skelgram.geneclusters import (SubstringFrequencyWeight, parse_gene_string,
                                   duplication_distance)

raw_strings = [
    ("fimA fimA fimA fimC", 8),
    ("fimA fimA fimC", 3),
    ("fimC fimA fimA fimA", 1),
]
corpus_strings = [tuple(s.split()) for s, _ in raw_strings]
weight = SubstringFrequencyWeight(corpus_strings)

print("optimal parses (runs merged, then expanded back):")
corpus = []
for text, freq in raw_strings:
    tree, score = parse_gene_string(text.split(), weight)
    corpus.append((tree, Fraction(freq)))
    print(f"  {text:28s} -> {tree.text}  (score {score})")

oracle = CorpusOracle(corpus, decay=Fraction(1, 5), distance="duplication")
print("\ncorpus values decay with duplication distance:")
probe = corpus[0][0]
print(f"  exact corpus tree: {oracle.smq(probe)}")

strategy = DuplicationsStrategy([t for t, _ in corpus], max_dup=2)
teacher = SimulatedTeacher(oracle, strategy)
report = learn(teacher, oracle.alphabet(), max_iterations=5000)
print(f"\nlearned rank-{report.basis_size} automaton with "
      f"{report.seq_count} equivalence queries")
grammar = pmta_to_wcfg(report.hypothesis)
print(format_wcfg(grammar))
