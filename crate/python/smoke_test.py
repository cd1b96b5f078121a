"""Smoke test for the ncdeg extension module.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json
import pathlib
import sys
from fractions import Fraction

import ncdeg

ROOT = pathlib.Path(__file__).resolve().parent.parent


def k3_terms():
    edges = [(0, 1), (0, 2), (1, 2)]
    return [[(i, j, 1), (j, i, -1)] for i, j in edges]


def main():
    # rank 2 commutatively, 3 noncommutatively
    assert ncdeg.nc_rank(3, k3_terms()) == 3
    assert ncdeg.delta_profile(3, k3_terms(), [1, 1, 1]) == [0, 1, 2, 3]

    edges = [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert ncdeg.bipartite_profile(2, edges, [3, 1, 2, 4]) == [0, 4, 7]
    assert ncdeg.bipartite_profile(2, [], []) == [0, None, None]

    best, per = ncdeg.fmm(3, [[1, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1], [0, 0, 1]], [1, 1, 1], 3)
    assert Fraction(best) == Fraction(3, 2), best
    assert [None if v is None else Fraction(v) for v in per] == [0, Fraction(1, 2), 1, Fraction(3, 2)]

    maps = [[[1, 0, 0], [0, 1, 0]], [[1, 0, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 1]]]
    assert ncdeg.bl_member(3, maps, ["1/2", "1/2", "1/2"], 3)
    assert not ncdeg.bl_member(3, maps, ["1/2", "1/2", "3/4"], 3)

    code, text = ncdeg.run(["hungarian", str(ROOT / "instances" / "k3_tutte.json"), "--seed", "1"])
    report = json.loads(text)
    assert code == 0 and report["result"]["values"] == [0, 1, 2, 3], report["result"]["values"]

    try:
        ncdeg.nc_rank(2, [[(2, 0, 1)]])
    except ValueError as e:
        assert "outside" in str(e)
    else:
        raise AssertionError("out-of-range entry accepted")

    print("python smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
