"""Hand-entered ice quivers for the five small amalgamation examples.

Vertices are named by (row, column) of a two-row drawing; frozen vertices are
listed separately.
"""

from collections import Counter

from deeploci.cluster import IceQuiver, Vertex


def _quiver(arrows, frozen):
    names = sorted({x for a in arrows for x in a})
    ids = {name: k for k, name in enumerate(names)}
    vertices = [Vertex(ids[x], frozen=x in frozen) for x in names]
    return IceQuiver.build(vertices, Counter((ids[a], ids[b]) for a, b in arrows))


def _row(tag, length):
    return [((tag, x), (tag, x + 1)) for x in range(length - 1)]


def equioriented_a(n):
    # n vertices in a path, the last one frozen
    return _quiver(_row("T", n), {("T", n - 1)})


def d5():
    arrows = _row("T", 5) + [(("B", 3), ("B", 4)), (("T", 4), ("B", 3)), (("B", 3), ("T", 2))]
    return _quiver(arrows, {("T", 4), ("B", 4)})


def e6():
    arrows = _row("T", 4) + _row("B", 4)
    arrows += [(("B", x), ("T", x)) for x in range(3)]
    arrows += [(("T", x + 1), ("B", x)) for x in range(3)]
    return _quiver(arrows, {("T", 3), ("B", 3)})


def e7():
    arrows = _row("T", 5) + _row("B", 4)
    arrows += [(("B", x), ("T", x)) for x in range(4)]
    arrows += [(("T", x + 1), ("B", x)) for x in range(3)]
    return _quiver(arrows, {("T", 4), ("B", 3)})


def e8():
    arrows = _row("T", 5) + _row("B", 5)
    arrows += [(("B", x), ("T", x)) for x in range(4)]
    arrows += [(("T", x + 1), ("B", x)) for x in range(4)]
    return _quiver(arrows, {("T", 4), ("B", 4)})
