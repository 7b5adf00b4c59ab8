"""Shared instance generators for the ampleness cross-checks."""

from troplift.ampleness import ample_cycle, ample_general, ample_tree
from troplift.divisor import PLFunction
from troplift.graph import AbstractGraph, Edge, Subgraph, Vertex


def build_ampleness_instance(gamma_edges, spikes, values):
    """Parent graph = gamma + spike edges to fresh outer vertices."""
    vertex_ids = set(values)
    edges = [Edge(eid, (a, b)) for eid, a, b in gamma_edges]
    vals = {v: values[v] for v in vertex_ids}
    vertices = [Vertex(v) for v in sorted(vertex_ids)]
    for eid, v, far in spikes:
        outer = f"outer_{eid}"
        vertices.append(Vertex(outer))
        edges.append(Edge(eid, (v, outer)))
        vals[outer] = far
    g = AbstractGraph(vertices, edges)
    phi = PLFunction.for_graph(g, vals)
    gamma = Subgraph.from_elements(g, edges=[eid for eid, _, _ in gamma_edges],
                                   extra_vertices=list(values))
    gamma_prime = Subgraph.from_elements(
        g, edges=list(g.edges), extra_vertices=list(g.vertices))
    return g, phi, gamma, gamma_prime


def random_tree_instance(rng):
    n = rng.randint(1, 8)
    gamma_edges = []
    degree = {f"v{i}": 0 for i in range(n)}
    for i in range(1, n):
        parents = [j for j in range(i) if degree[f"v{j}"] < 2]
        if not parents:
            return None
        p = rng.choice(parents)
        gamma_edges.append((f"g{i}", f"v{p}", f"v{i}"))
        degree[f"v{p}"] += 1
        degree[f"v{i}"] += 1
    values = {f"v{i}": rng.randint(0, 2) for i in range(n)}
    spikes = []
    for i in range(n):
        for k in range(rng.randint(0, 3 - degree[f"v{i}"])):
            far = values[f"v{i}"] + rng.randint(-3, 2)
            spikes.append((f"s{i}_{k}", f"v{i}", far))
    return build_ampleness_instance(gamma_edges, spikes, values)


def random_cycle_instance(rng):
    n = rng.randint(3, 8)
    gamma_edges = [(f"g{i}", f"v{i}", f"v{(i + 1) % n}") for i in range(n)]
    values = {f"v{i}": rng.randint(0, 2) for i in range(n)}
    spikes = []
    for i in range(n):
        if rng.random() < 0.8:
            far = values[f"v{i}"] + rng.randint(-3, 2)
            spikes.append((f"s{i}", f"v{i}", far))
    return build_ampleness_instance(gamma_edges, spikes, values)


def oracle_agreement_trials(rng, kind, count):
    """Yield (exact_verdict, general_verdict) pairs for ``count`` instances."""
    done = 0
    while done < count:
        if kind == "tree":
            inst = random_tree_instance(rng)
            if inst is None:
                continue
            _, phi, gamma, gp = inst
            exact = ample_tree(phi, gamma, gp)
        else:
            _, phi, gamma, gp = random_cycle_instance(rng)
            exact = ample_cycle(phi, gamma, gp)
        general = ample_general(phi, gamma, gp)
        if general.status == "indeterminate":
            continue
        yield exact.status, general.status
        done += 1
