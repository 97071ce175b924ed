"""Smoke test for the wlcovers extension module.

Build and install first, e.g. `pip install ./crates/py` or
`maturin develop -m crates/py/Cargo.toml`, then run this file.
"""

import json
import tempfile
from pathlib import Path

import wlcovers


def main():
    c6 = wlcovers.Graph.cycle(6)
    two_c3 = wlcovers.Graph.cycle(3).disjoint_union(wlcovers.Graph.cycle(3))
    assert wlcovers.wl_test(c6, two_c3) == (True, None)
    assert wlcovers.graphs_isomorphic(c6, two_c3) is None
    assert wlcovers.check_decomposition(c6, two_c3)
    equivalent, round_ = wlcovers.wl_test(c6, wlcovers.Graph.path(6))
    assert not equivalent and round_ >= 1

    base = wlcovers.experiment_base()
    assert (base.vertex_count, base.edge_count) == (9, 10)
    assert base.euler_characteristic() == -1
    assert wlcovers.is_discrete(base)
    assert wlcovers.Graph.parse(base.to_edge_list()) == base

    edges = wlcovers.base_distinguished_edges(base)
    x = wlcovers.VoltageAssignment(base, 3, [[1, 2, 0], [1, 0, 2]])
    y = wlcovers.VoltageAssignment(base, 3, [[2, 0, 1], [1, 0, 2]])
    assert x.edges == edges and x.is_transitive()
    assert wlcovers.VoltageAssignment.from_json(x.to_json()) == x
    cx, cy = wlcovers.build_cover(base, x), wlcovers.build_cover(base, y)
    assert cx.is_valid() and cx.lift_check() and cx.degree() == 3
    witness = wlcovers.covers_isomorphic(cx, cy)
    assert witness is not None and sorted(witness) == list(range(27))

    counts = {d: len(wlcovers.generate_graphcovers(base, d)) for d in (2, 3, 4)}
    assert counts == {2: 3, 3: 7, 4: 26}, counts
    assert [wlcovers.hall_count(d, 2) for d in range(1, 6)] == [1, 3, 13, 71, 461]
    assert wlcovers.hall_count(13, 3).bit_length() == 69

    ds = wlcovers.generate_graphcovers(base, 3)
    ok, failures = ds.verify()
    assert ok, failures
    assert ds.stats() == {"scanned": 36, "connected": 26, "classes": 7, "complete": True}
    with tempfile.TemporaryDirectory() as tmp:
        assert ds.export(tmp) == 7
        manifest = json.loads((Path(tmp) / "manifest.json").read_text())
        assert len(manifest["classes"]) == 7
        assert len(wlcovers.load_dataset(str(Path(tmp) / "manifest.json"))) == 7

    five = wlcovers.generate_graphcovers(base, 5, max_classes=3).graphs()
    for features in ("constant", "degree"):
        report = wlcovers.indistinguishability_report(five, features)
        assert report["indistinguishable"], features
    report = wlcovers.indistinguishability_report(five, "onehot")
    assert not report["indistinguishable"]
    assert report["distinct_embeddings"] == 3
    assert len(wlcovers.embed_graph(five[0])) == 200

    code = wlcovers.universal_cover_ball_code(c6, 0, 2)
    assert code == "((())(()))", code

    try:
        wlcovers.Graph(3, [(0, 3)])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range edge accepted")

    print("wlcovers smoke test passed")


if __name__ == "__main__":
    main()
