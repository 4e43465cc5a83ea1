"""Smoke test for the pyinterlock extension module.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json

import pyinterlock as il


def main():
    grid = il.Assembly.cube_grid(3, 3)
    assert len(grid) == 9 and grid.backend == "exact"
    v = grid.verify()
    assert v.status == "sliding", v
    assert v.witness == [0, 0, 0, 0, 0, 1], v.witness
    assert len(grid.matrix()) == 16

    skew = il.Assembly.skew_cubes(3)
    v = skew.verify("full")
    assert v.interlocked and v.certificate["label"] == "certified"
    assert skew.to_float().verify("translational").interlocked
    assert il.Assembly.from_json(skew.to_json()).verify().interlocked

    t = il.Tiling.hexagon(3, 3, 3).shuffled(200, 7)
    assert t.is_valid() and len(t) == 27
    assert il.Tiling.from_json(t.to_json()).fingerprint() == t.fingerprint()
    for variant in ("first", "second"):
        a = t.assemble(variant)
        assert a.validate()["ok"]
        v = a.verify("translational")
        assert v.interlocked and v.certificate["label"] == "numerical", v
    assert t.assemble(boundary=False).verify("translational").status == "sliding"

    assert il.fm_trivial_cone([[1, 0], [0, 1], [-1, -1]])
    assert not il.fm_trivial_cone([[1, 0], [0, 1]])
    assert il.verify_matrix([[1, 0], [0, 1], [-1, -1]]).interlocked

    rep = il.edge_rank_check([0.0, 0.0], [1.0, 0.0], [0.5, 0.5])
    assert rep["rank"] == 6 and rep["closed_forms_match"]

    try:
        il.Tiling.hexagon(1, 1, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("bad hexagon accepted")
    try:
        il.Assembly.from_json(json.dumps({"backend": "exact", "blocks": "x"}))
    except il.InterlockError:
        pass
    else:
        raise AssertionError("bad document accepted")

    print("pyinterlock smoke test passed")


if __name__ == "__main__":
    main()
