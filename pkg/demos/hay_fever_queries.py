"""
MAP, top-theta and marginal queries
===================================
"""
from stratkb import (
    format_map_report, format_marginal_report, format_top_report, map_entails, marginal,
    parse_formula, parse_kb, top_theta_entails, top_theta_levels,
)

toy = parse_kb("""
@atoms Gardener, HayFever, Coughs
0.9 :: Gardener -> !HayFever
0.8 :: Coughs -> HayFever
""")
v = toy.vocab

# a gardener who coughs: the weaker rule is drowned at cutoff 0.8
print(format_map_report(map_entails(toy, parse_formula("Gardener & Coughs", v),
                                    parse_formula("!HayFever", v))))

# someone with hay fever is most likely not a gardener
print(format_map_report(map_entails(toy, parse_formula("HayFever", v),
                                    parse_formula("!Gardener", v))))

birds = parse_kb("""
@atoms Bird, Antarctic, Flies
@spkb true
1 :: !Bird | Antarctic | Flies
1 :: !Bird | !Antarctic | !Flies
0.9375 :: !Bird | !Antarctic | Flies
0.875 :: Bird | !Flies
0.8125 :: !Bird | Antarctic | !Flies
0.75 :: Bird | Flies
""")
b = birds.vocab
ev, q = parse_formula("true", b), parse_formula("!Flies", b)
print(format_top_report(top_theta_levels(birds, ev), top_theta_entails(birds, ev, q)))

# exact marginals need a knowledge base that came from a density tree
print(format_marginal_report(marginal(birds, parse_formula("Bird", b))))
