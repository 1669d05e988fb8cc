"""Shared test data: reference matrices typed in by hand and small fixture games."""

from fractions import Fraction

from partmon.game import LOSS, TIE, WIN, Game

# K=4 dueling matrices typed in by hand, independent of the builder: "h" is 1/2;
# D, S, B are the tie, loss and win symbols.
K4_GAIN = {
    "11": "0000 0000 1111 1111",
    "12": "0000 hhhh hhhh 1111",
    "13": "00hh 00hh hh11 hh11",
    "14": "0h0h 0h0h h1h1 h1h1",
    "22": "0000 1111 0000 1111",
    "23": "00hh hh11 00hh hh11",
    "24": "0h0h h1h1 0h0h h1h1",
    "33": "0011 0011 0011 0011",
    "34": "0hh1 0hh1 0hh1 0hh1",
    "44": "0101 0101 0101 0101",
}
K4_FEEDBACK = {
    "11": "DDDD DDDD DDDD DDDD",
    "12": "DDDD SSSS BBBB DDDD",
    "13": "DDSS DDSS BBDD BBDD",
    "14": "DSDS DSDS BDBD BDBD",
    "22": "DDDD DDDD DDDD DDDD",
    "23": "DDSS BBDD DDSS BBDD",
    "24": "DSDS BDBD DSDS BDBD",
    "33": "DDDD DDDD DDDD DDDD",
    "34": "DSBD DSBD DSBD DSBD",
    "44": "DDDD DDDD DDDD DDDD",
}
K4_OUTCOMES = [format(m, "04b") for m in range(16)]

GAIN_CHAR = {"0": Fraction(0), "h": Fraction(1, 2), "1": Fraction(1)}
SYM_CHAR = {"D": TIE, "S": LOSS, "B": WIN}


def decode(row: str, table: dict) -> tuple:
    return tuple(table[c] for c in row.replace(" ", ""))


K4_SIGNAL_12 = {
    LOSS: "0000 1111 0000 0000",
    TIE: "1111 0000 0000 1111",
    WIN: "0000 0000 1111 0000",
}


def hopeless_game():
    return Game("hopeless", ["a", "b"], ["x", "y"], ["c"], [[1, 0], [0, 1]], [[0, 0], [0, 0]])


def trivial_game():
    return Game("trivial", ["a", "b"], ["x", "y"], ["c", "d"], [[1, 1], [0, 1]], [[0, 1], [0, 0]])


def hard_game():
    """Label-efficient prediction: only the zero-gain action sees the outcome."""
    return Game.from_symbols(
        "label-efficient",
        ["ask", "say-a", "say-b"],
        ["a", "b"],
        [[0, 0], [1, 0], [0, 1]],
        [["a", "b"], ["c", "c"], ["c", "c"]],
    )
