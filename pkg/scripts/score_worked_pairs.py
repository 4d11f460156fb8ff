"""Lexical scores and comparator branches for the hand-worked input/rewrite pairs.

The semantic column is the score a judge gave each pair in the worked examples;
the lexical column is recomputed here.
"""

from sentsimp.orchestrator import Thresholds, comparator
from sentsimp.scoring import SimilarityScores, lexical_score

PAIRS = [
    (
        "example 1",
        "When a fox sees the rabbit touch a carrot, it chases it until the rabbit moves.",
        ["When the fox sees the rabbit and rabbit touches a carrot, the fox turns silver for 0.1 second.",
         "When the fox is silver and a rabbit touches a carrot, the fox chases the rabbit.",
         "When rabbit moves, the fox stops."],
        100,
    ),
    (
        "example 2",
        "When the rabbit is red, the fox cannot eat the rabbit.",
        ["When the rabbit is red, the fox cannot eat the rabbit."],
        100,
    ),
    (
        "example 3",
        "When a rabbit is touched, score adds 1.",
        ["When a rabbit is touched, the score increases by 1."],
        90,
    ),
]


def main():
    t = Thresholds()
    print(f"{'pair':10s} {'semantic':>8s} {'lexical':>8s}  branch")
    for name, source, rewrite, semantic in PAIRS:
        lex = lexical_score(source, rewrite)
        branch = comparator(SimilarityScores(semantic, lex), t)
        print(f"{name:10s} {semantic:8d} {lex:8.2f}  {branch.value}")


if __name__ == "__main__":
    main()
