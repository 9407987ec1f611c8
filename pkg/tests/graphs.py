"""Named example graphs shared by the tests."""
from __future__ import annotations

from symlat.coloured_graph import ColouredGraph

FOUR = (1, 2, 3, 4)


def g4(V, E) -> ColouredGraph:
    """Graph on [4] from compact strings: V=["13", "24"], E=[["12", "34"], ...]."""
    return ColouredGraph.build(
        FOUR,
        [[int(c) for c in b] for b in V],
        [[(int(e[0]), int(e[1])) for e in c] for c in E],
    )


# two graphs on the four-cycle and their lattice meet and join
CYCLE_OPPOSITE_PAIRS = g4(["13", "24"], [["12", "34"], ["14", "23"]])
CYCLE_WITH_DIAGONAL = g4(["13", "2", "4"], [["12", "23"], ["14", "34"], ["13"]])
CYCLE_MEET = g4(["13", "24"], [["12", "14", "23", "34"]])
CYCLE_JOIN = g4(["13", "2", "4"], [["12"], ["13"], ["14"], ["23"], ["34"]])

# a triple violating distributivity of the edge regular lattice
TRIANGLE_124 = g4(["124", "3"], [["12", "14", "24"]])
TRIANGLE_234 = g4(["234", "1"], [["23", "24", "34"]])
SQUARE_ALTERNATING = g4(["13", "24"], [["12", "14", "23", "34"]])
TRIANGLE_234_MEET_SQUARE = g4(["1234"], [])
TRIANGLE_124_JOIN_OTHERS = g4(["1", "24", "3"], [["12", "14"], ["23", "34"], ["24"]])

# colouring classes on the four-cycle
EDGE_REGULAR_SQUARE = g4(["13", "24"], [["12", "14"], ["23", "34"]])
NOT_EDGE_REGULAR_SQUARE = g4(["14", "23"], [["12", "14", "23", "34"]])
VERTEX_REGULAR_SQUARE = g4(["13", "24"], [["12", "14", "23", "34"]])
NOT_VERTEX_REGULAR_SQUARE = g4(["13", "24"], [["12", "14", "23"], ["34"]])

# members of the acceptance and rejection duals of EDGE_REGULAR_SQUARE
ADUAL_TWO_CLASSES = g4(["14", "23"], [])
ADUAL_ONE_EDGE_CLASS = g4(["1234"], [["12", "13", "14", "23"]])
RDUAL_MERGED_PAIR = g4(["14", "2", "3"], [["12"], ["13"], ["14"], ["23"], ["24"], ["34"]])
RDUAL_MISSING_EDGE = g4(["1", "2", "3", "4"], [["12"], ["13"], ["14"], ["23"], ["24"]])
RDUAL_EDGE_PAIR = g4(["13", "2", "4"], [["12", "23"], ["13"], ["14"], ["24"], ["34"]])

# regular but not permutation generated, on eleven vertices
R_NOT_PI = ColouredGraph.build(
    range(1, 12),
    [[1, 2, 3], [4, 5, 6, 7, 8, 9], [10, 11]],
    [
        [(1, 4), (1, 5), (2, 6), (2, 7), (3, 8), (3, 9)],
        [(4, 10), (5, 10), (6, 10), (7, 11), (8, 11), (9, 11)],
    ],
)

# examination marks: variables sorted alphabetically
MARKS_NAMES = {1: "algebra", 2: "analysis", 3: "mechanics", 4: "statistics", 5: "vectors"}


def marks_graph(V, E) -> ColouredGraph:
    return ColouredGraph.build(
        MARKS_NAMES.values(),
        [[MARKS_NAMES[int(c)] for c in b] for b in V],
        [[(MARKS_NAMES[int(e[0])], MARKS_NAMES[int(e[1])]) for e in c] for c in E],
    )


MARKS_V = ["1", "25", "34"]
# reference RCON model for the marks data, BIC 2587.404
MARKS_RCON = marks_graph(MARKS_V, [["12"], ["13", "14", "15", "24", "35"]])
# reference minimally accepted edge regular models with their BICs
MARKS_MIN_ACCEPTED = [
    (marks_graph(MARKS_V, [["23", "35"], ["13", "14"], ["24"], ["15"], ["12"]]), 2601.617),
    (marks_graph(MARKS_V, [["23", "24", "35"], ["12"], ["13"], ["14"], ["15"]]), 2600.017),
    (marks_graph(MARKS_V, [["23", "24"], ["13", "14"], ["35"], ["15"], ["12"]]), 2603.376),
    (marks_graph(MARKS_V, [["24", "35"], ["13", "14"], ["12"], ["15"]]), 2591.468),
]


# head dimensions of brothers
FRETS = ("B1", "B2", "L1", "L2")


def frets_graph(V, E) -> ColouredGraph:
    return ColouredGraph.build(FRETS, V, [[tuple(e.split("-")) for e in c] for c in E])


# reference minimally accepted permutation generated models with their BICs
FRETS_MIN_ACCEPTED = [
    (frets_graph([["B1", "L1", "L2"], ["B2"]], [["B1-B2", "B2-L1", "B2-L2"], ["B1-L1", "B1-L2", "L1-L2"]]), 458.6692),
    (frets_graph([["B1"], ["B2"], ["L1"], ["L2"]], [["B1-L1"], ["B1-L2"], ["B2-L2"]]), 471.1172),
    (frets_graph([["B1"], ["B2"], ["L1"], ["L2"]], [["B1-L1"], ["B2-L1"], ["B2-L2"]]), 470.4083),
    (frets_graph([["B1", "L1"], ["B2"], ["L2"]], [["B1-B2", "B2-L1"], ["B1-L1"], ["B2-L2"]]), 465.8199),
    (frets_graph([["B1", "L1"], ["B2"], ["L2"]], [["B1-L1"], ["B1-L2", "L1-L2"], ["B2-L2"]]), 466.0704),
    (frets_graph([["B1", "L2"], ["B2"], ["L1"]], [["B1-B2", "B2-L2"], ["B1-L1", "L1-L2"]]), 460.7432),
    (frets_graph([["B1", "B2"], ["L1", "L2"]], [["B1-L1", "B2-L2"], ["L1-L2"]]), 458.9100),
    (frets_graph([["B1", "B2"], ["L1", "L2"]], [["B1-B2"], ["B1-L1", "B2-L2"]]), 459.2543),
    (frets_graph([["B1", "B2"], ["L1", "L2"]], [["B1-L1", "B1-L2", "B2-L1", "B2-L2"]]), 451.3409),
]
FRETS_BEST = FRETS_MIN_ACCEPTED[-1][0]
# four-cycle model invariant under swapping the two sons, reference BIC 471.2982
FRETS_SWAP_SONS = frets_graph([["B1", "B2"], ["L1", "L2"]], [["B1-L1", "B2-L2"], ["B1-B2"], ["L1-L2"]])
# sample size behind the reference Frets BIC penalties
FRETS_PENALTY_N = 88
