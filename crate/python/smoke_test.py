"""Smoke test for the pybackcloth extension.

Build the module first, e.g. `maturin develop -m crates/py/Cargo.toml`, or
`cargo build --release -p backcloth-py --features extension-module` and copy
target/release/libpybackcloth.so next to this file as pybackcloth.so.
"""

import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pybackcloth as bc


def main():
    params = bc.SimParams(target_nodes=2000, seed=3)
    params.validate()
    assert params.psi == 2.0 and params.kappa == 3

    graph, turns = bc.run(params)
    assert graph.node_count() >= 2000
    assert sum(t["entrants"] for t in turns) + params.n0 == graph.node_count()
    assert all(sum(t["consumed_by_rule"]) <= t["tau"] for t in turns)
    again, _ = bc.run(params)
    assert graph == again, "runs with the same seed differ"

    report = bc.compute_metrics(graph)
    assert report["nodes"] == graph.node_count()
    assert report["edges"] == graph.edge_count()
    assert 0.0 < report["modularity"] < 1.0
    assert len(report["centralities"]["betweenness"]) == graph.node_count()

    tri = bc.Graph(6)
    for s, d in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]:
        tri.add_edge(s, d)
    q = bc.modularity(tri, [0, 0, 0, 1, 1, 1])
    assert abs(q - 5.0 / 14.0) < 1e-12, q
    membership, q_louvain = bc.louvain(tri)
    assert q_louvain >= q - 1e-12

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "edges.txt")
        graph.write(path)
        loaded, labels = bc.Graph.load(path)
        assert loaded.edge_count() == graph.edge_count()
        cmp = bc.compare(loaded, loaded)
        assert cmp["objective"] == 0.0
        try:
            bc.Graph.load(os.path.join(tmp, "missing.txt"))
        except OSError:
            pass
        else:
            raise AssertionError("missing file accepted")

    pa = bc.pref_attach(5000, 2, seed=1)
    assert max(pa.in_degrees()) > 50
    er = bc.erdos_renyi(500, 0.01, seed=1)
    assert er.node_count() == 500

    try:
        bc.SimParams(p_random=2.0).validate()
    except ValueError as e:
        assert "p_random" in str(e)
    else:
        raise AssertionError("invalid probability accepted")
    try:
        bc.SimParams(speed=1)
    except (ValueError, AttributeError):
        pass
    else:
        raise AssertionError("unknown field accepted")

    print(f"pybackcloth {bc.__version__}: smoke test passed "
          f"({graph.node_count()} nodes, {graph.edge_count()} edges, Q={report['modularity']:.3f})")


if __name__ == "__main__":
    main()
