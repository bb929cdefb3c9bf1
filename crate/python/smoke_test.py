"""Smoke test for the typeseq Python extension.

Builds the extension with cargo (unless TYPESEQ_LIB points at an already built
library), imports it and runs a few known rings through it.
"""

import json
import os
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    lib = os.environ.get("TYPESEQ_LIB")
    if lib is None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "typeseq-py", "--features", "extension-module"],
            cwd=ROOT,
            check=True,
        )
        lib = ROOT / "target" / "release" / "libtypeseq.so"
    target = pathlib.Path(tempfile.mkdtemp()) / "typeseq.so"
    shutil.copy(lib, target)
    sys.path.insert(0, str(target.parent))
    import typeseq

    return typeseq


def main():
    ts = load_module()

    ex1 = ts.Ring((ROOT / "rings" / "example1.json").read_text())
    assert ex1.type_sequence == [3, 4, 4, 2], ex1
    assert ex1.lengths == (13, 11)
    assert ex1.label == "almost-gorenstein"
    assert ex1.degree == 4 and ex1.conductor == 6

    ex2 = ts.Ring((ROOT / "rings" / "example2.json").read_text())
    assert ex2.type_sequence == [5, 5, 5]
    assert ex2.label == "maximal-length"

    f7 = ts.Ring((ROOT / "rings" / "f7-comparison.json").read_text())
    assert f7.type_sequence == [2, 2, 1, 1]
    gsr = f7.associated_gsr()
    assert gsr.is_gsr and gsr.type_sequence == [3, 1, 1, 1]
    verdicts = json.loads(f7.compare_gsr())
    assert verdicts["gsr_almost_gorenstein"] and verdicts["biconditional_holds"]

    cusp = ts.Ring((ROOT / "rings" / "cusp.json").read_text())
    assert all(passed for _, passed, _ in cusp.check())
    report = json.loads(cusp.analyze(emit_duals=True))
    assert report["ring"]["classification"]["label"] == "gorenstein"
    assert "duals" in report

    assert ts.semigroup_type_sequence([4, 6, 11, 13]) == [3, 1, 1, 1]
    fuzz = json.loads(ts.fuzz(seed=1, count=8, max_n=2, max_conductor=6))
    assert fuzz["failed_instances"] == 0

    try:
        ts.Ring('{"base": "Q", "ring": {"generators": ["X^2", "X^4"]}, "options": {"max-degree-cap": 32}}')
    except ts.TypeseqError as e:
        print("expected error:", e)
    else:
        raise AssertionError("a ring without a conductor was accepted")

    print(ex1, ex2, f7, gsr, cusp, sep="\n")
    print("smoke test passed")


if __name__ == "__main__":
    main()
