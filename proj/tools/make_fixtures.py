#!/usr/bin/env python3
"""Regenerate the synthetic fixture networks under fixtures/.

The generated graphs are layered: most directed edges point from an upper
layer to a lower one, and a configurable number of back edges closes
feedback loops.  Seeds are searched deterministically until the simple-cycle
count lands in the requested tier.

Usage: python3 tools/make_fixtures.py [out_dir]
"""
import json
import random
import sys
from pathlib import Path

import networkx as nx


def count_simple_paths(g, cap):
    total = 0
    succ = {u: list(g.successors(u)) for u in g}
    for start in g:
        stack = [(start, iter(succ[start]))]
        on_path = {start}
        while stack:
            u, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                on_path.discard(u)
                continue
            if nxt in on_path:
                continue
            total += 1
            if total > cap:
                return None
            on_path.add(nxt)
            stack.append((nxt, iter(succ[nxt])))
    return total


def count_cycles(g, cap):
    c = 0
    for _ in nx.simple_cycles(g):
        c += 1
        if c >= cap:
            break
    return c


def layered(n, m, layers, back, undirected, seed):
    rng = random.Random(seed)
    layer = {i: min(layers - 1, i * layers // n) for i in range(n)}
    used = set()
    directed = []
    for v in range(n):
        if layer[v] > 0:
            parents = [u for u in range(n) if layer[u] == layer[v] - 1]
            u = rng.choice(parents)
            directed.append((u, v))
            used.add(frozenset((u, v)))
    forward_goal = m - back - undirected
    while len(directed) < forward_goal:
        u, v = rng.sample(range(n), 2)
        if layer[u] < layer[v] <= layer[u] + 2 and frozenset((u, v)) not in used:
            directed.append((u, v))
            used.add(frozenset((u, v)))
    while len(directed) < m - undirected:
        u, v = rng.sample(range(n), 2)
        if layer[u] > layer[v] and frozenset((u, v)) not in used:
            directed.append((u, v))
            used.add(frozenset((u, v)))
    undirected_edges = []
    while len(undirected_edges) < undirected:
        u, v = rng.sample(range(n), 2)
        if abs(layer[u] - layer[v]) <= 1 and frozenset((u, v)) not in used:
            undirected_edges.append((min(u, v), max(u, v)))
            used.add(frozenset((u, v)))
    return layer, directed, undirected_edges


def document(name, n, layers, layer, directed, undirected_edges, stats):
    width = len(str(n - 1))
    nid = lambda i: f"n{i:0{width}d}"
    nodes = []
    for i in range(n):
        role = "source" if layer[i] == 0 else ("target" if layer[i] == layers - 1 else "internal")
        nodes.append({"id": nid(i), "role": role})
    edges = []
    for k, (u, v) in enumerate(directed + undirected_edges):
        edges.append({
            "id": f"e{k:03d}",
            "tail": nid(u),
            "head": nid(v),
            "directed": k < len(directed),
        })
    return {
        "schema": "layoutgame.network/1",
        "id": name,
        "description": stats,
        "nodes": nodes,
        "edges": edges,
    }


SPECS = [
    # name, n, m, layers, back, undirected, cycle tier [lo, hi), path cap
    ("layered_dag_30", 30, 50, 6, 0, 0, (0, 1), 10**7),
    ("cycle_rich_30", 30, 70, 6, 20, 0, (1000, 10**9), 10**6),
    ("g1_like", 71, 112, 9, 3, 14, (3, 4), 10**7),
    ("g2_like", 69, 131, 8, 20, 10, (5000, 20000), 10**7),
    ("g3_like", 58, 136, 8, 34, 12, (10**5, 10**9), None),
]


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures")
    out.mkdir(parents=True, exist_ok=True)
    for name, n, m, layers, back, undirected, (lo, hi), path_cap in SPECS:
        for seed in range(500):
            layer, directed, undirected_edges = layered(n, m, layers, back, undirected, seed)
            g = nx.DiGraph()
            g.add_nodes_from(range(n))
            g.add_edges_from(directed)
            cycles = count_cycles(g, hi)
            if not (lo <= cycles < hi):
                continue
            paths = count_simple_paths(g, path_cap or 10**7)
            if path_cap and paths is None:
                continue
            path_text = str(paths) if paths is not None else "more than 10000000"
            stats = (f"synthetic layered network: {n} nodes, {m} edges "
                     f"({len(undirected_edges)} undirected), {cycles} simple cycles, "
                     f"{path_text} simple directed paths; seed {seed}")
            doc = document(name, n, layers, layer, directed, undirected_edges, stats)
            (out / f"{name}.network.json").write_text(json.dumps(doc, indent=1) + "\n")
            print(name, stats)
            break
        else:
            raise SystemExit(f"no seed found for {name}")

    chain = {
        "schema": "layoutgame.network/1",
        "id": "chain3",
        "nodes": [{"id": "a", "role": "source"}, {"id": "b", "role": "internal"},
                  {"id": "c", "role": "target"}],
        "edges": [{"id": "ab", "tail": "a", "head": "b", "directed": True},
                  {"id": "bc", "tail": "b", "head": "c", "directed": True}],
    }
    (out / "chain3.network.json").write_text(json.dumps(chain, indent=1) + "\n")

    def layout(positions):
        return {
            "schema": "layoutgame.layout/1",
            "network": "chain3",
            "box": {"w": "5000", "h": "6000"},
            "positions": {k: {"x": x, "y": y} for k, (x, y) in positions.items()},
        }

    (out / "chain3_down.layout.json").write_text(
        json.dumps(layout({"a": ("2500", "0"), "b": ("2500", "300"), "c": ("2500", "600")}), indent=1) + "\n")
    (out / "chain3_out_of_box.layout.json").write_text(
        json.dumps(layout({"a": ("2500", "0"), "b": ("2500", "300"), "c": ("5001", "600")}), indent=1) + "\n")


if __name__ == "__main__":
    main()
