#!/usr/bin/env python3
"""Generates data/sprint52.topo, a 52-node PoP-level backbone in the style of
the Rocketfuel SPRINT map: 33 core routers, 8 producers and 11 consumers.

Core routers are scattered on a unit square and joined to their nearest
neighbours (plus a spanning chain so the core is connected and a handful of
long-haul trunks). Producers and
consumers are dual-homed to their two nearest core routers.
"""
import math
import random
import sys

SEED = 1239  # Sprint's AS number
CORE, PRODUCERS, CONSUMERS = 33, 8, 11
NEAREST = 2
LONG_HAUL = 10


def main(out):
    rng = random.Random(SEED)
    total = CORE + PRODUCERS + CONSUMERS
    ids = list(range(total))
    rng.shuffle(ids)
    core = sorted(ids[:CORE])
    producers = sorted(ids[CORE:CORE + PRODUCERS])
    consumers = sorted(ids[CORE + PRODUCERS:])
    pos = {i: (rng.random(), rng.random()) for i in range(total)}

    def dist(a, b):
        return math.dist(pos[a], pos[b])

    edges = set()

    def link(a, b):
        if a != b:
            edges.add((min(a, b), max(a, b)))

    for r in core:
        for other in sorted((o for o in core if o != r), key=lambda o: dist(r, o))[:NEAREST]:
            link(r, other)
    # Join components greedily by their closest pair.
    while True:
        comp = {core[0]}
        frontier = [core[0]]
        while frontier:
            n = frontier.pop()
            for a, b in edges:
                for x, y in ((a, b), (b, a)):
                    if x == n and y not in comp and y in core:
                        comp.add(y)
                        frontier.append(y)
        rest = [r for r in core if r not in comp]
        if not rest:
            break
        a, b = min(((a, b) for a in comp for b in rest), key=lambda p: dist(*p))
        link(a, b)
    # A few long-haul trunks, as in real backbones.
    added = 0
    while added < LONG_HAUL:
        a, b = rng.sample(core, 2)
        if (min(a, b), max(a, b)) not in edges and dist(a, b) > 0.4:
            link(a, b)
            added += 1
    for edge_node in producers + consumers:
        for r in sorted(core, key=lambda o: dist(edge_node, o))[:2]:
            link(edge_node, r)

    lines = [
        "# SPRINT-like PoP-level backbone: 52 nodes (8 producers, 11 consumers, 33 routers).",
        "# Generated by tools/gen_sprint52.py (seed %d); representative, not the measured map." % SEED,
        "",
    ]
    for i in range(total):
        role = "producer" if i in producers else "consumer" if i in consumers else "router"
        lines.append("node R%d %s" % (i, role))
    lines.append("")
    for a, b in sorted(edges):
        lines.append("edge R%d R%d" % (a, b))
    with open(out, "w") as f:
        f.write("\n".join(lines) + "\n")
    print("%d nodes, %d edges" % (total, len(edges)), file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/sprint52.topo")
