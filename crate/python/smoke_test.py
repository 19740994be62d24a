#!/usr/bin/env python3
"""Smoke test for the heighttower Python extension.

Builds the cdylib in release mode, copies it next to this script under the
importable name, then exercises the main types and operations. Exits
nonzero on the first failure.

Usage: python3 python/smoke_test.py [--skip-build]
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
ROOT = HERE.parent


def build_and_copy():
    subprocess.run(
        ["cargo", "build", "-p", "heighttower-py", "--release"],
        cwd=ROOT,
        check=True,
    )
    built = ROOT / "target" / "release" / "libheighttower_py.so"
    shutil.copy2(built, HERE / "heighttower.so")


def main():
    if "--skip-build" not in sys.argv:
        build_and_copy()
    sys.path.insert(0, str(HERE))
    import heighttower as ht

    # primality verdicts
    assert ht.is_prime(561).status == "composite"
    v = ht.is_prime(293)
    assert v.status == "provable_prime" and v.method == "trial_division"
    v = ht.is_prime(2**61 - 1)
    assert v.status == "provable_prime" and v.method == "deterministic_mr"
    v = ht.is_prime(2**89 - 1)
    assert v.status == "probable_prime" and v.method == "bpsw"
    print("PASS primality verdicts")

    # prime interval search
    assert ht.find_prime_in_interval(4, 8, [5]) == 7
    assert ht.find_prime_in_interval(24, 28) is None
    print("PASS interval search")

    # heights, two routes
    h = ht.radical_height(5, 2)
    # the enclosure is far tighter than an f64 ulp, so compare midpoints and
    # the outward-rounded float endpoints rather than exact containment
    assert abs(h.midpoint() - 0.8047189562170502) < 1e-12, h.lo
    assert h.lo_float <= 0.8047189562170502 <= h.hi_float
    w = ht.weil_height_from_minpoly("x^2-5")
    assert h.overlaps(w)
    assert h.width < 1e-10
    print("PASS heights")

    # Mahler measure
    m = ht.mahler_measure("x^2-2")
    assert m.contains(2.0)
    m = ht.mahler_measure("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")
    assert abs(m.midpoint() - 1.176280818259917) < 1e-9, m.lo
    print("PASS mahler measure")

    # Eisenstein
    assert ht.eisenstein_check("x^3-5", 5)
    assert not ht.eisenstein_check("x^2-4", 2)
    print("PASS eisenstein")

    # tower construction and brackets
    params = ht.ConstructionParams.delta(2.0, 3)
    levels = ht.build_tower(params)
    assert [(l.d, l.p) for l in levels] == [(2, 5), (7, 53), (17, 293)]
    assert levels[2].abs_degree == 2 * 7 * 17
    gen = ht.ConstructionParams.general(1.0, 1.0, 1)
    assert ht.p_interval(7, gen) == (15, 28)
    print("PASS tower")

    # metrics and witness search
    m = ht.level_metrics(levels[2], params)
    assert m.witness_overlap_ok and m.chain_ok
    assert abs(m.a.midpoint() - 2.8469592649608512) < 1e-12
    wparams = ht.ConstructionParams.delta(2.0, 3, epsilon=0.9)
    reached, index, b = ht.witness_index(wparams, 0.5, 10)
    assert reached and index == 3
    assert abs(b.midpoint() - 0.4435652386649598) < 1e-12
    print("PASS metrics and witness")

    # full report
    report = json.loads(ht.audit_report_json(params, eta=0.5))
    assert report["schema_version"] == "1"
    assert report["witness"]["index"] == 3
    assert report["levels"][2]["p"] == "293"
    assert report["audit"]["a_monotone_from"] == 1
    print("PASS certificate report")

    print("smoke test OK")


if __name__ == "__main__":
    main()
