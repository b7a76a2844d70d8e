"""Smoke test for the globop_py extension.

Build and install first:  pip install --no-build-isolation ./crates/py
"""
from pathlib import Path

import globop_py

ROOT = Path(__file__).resolve().parent.parent


def main():
    lines = [l for l in globop_py.collection(0, 3).splitlines() if l[0] not in "#@"]
    assert len(lines) == 10, lines

    assert globop_py.enumerate(0, 1, 2) == ["pt:1:1", "gen:mu_0^1", "br(pt:1:0,pt:1:0)"]
    assert globop_py.enumerate(0, 1, 0) == []

    ok, report = globop_py.verify("AD")
    assert ok and "result applicative pass" in report
    ok, report = globop_py.verify("CAD", "applicative")
    assert ok and report.count("status=corrected") == 3
    ok, _ = globop_py.verify("AD", "diagrammatic")
    assert not ok

    span = (ROOT / "crates/core/data/span_b1.alg").read_text()
    ok, checks, witnesses = globop_py.check_algebra(span)
    assert ok and not witnesses, witnesses
    assert any(c.startswith("multiplicativity") for c in checks)

    try:
        globop_py.verify("XY")
    except ValueError as e:
        assert "unknown axiom" in str(e)
    else:
        raise AssertionError("bad axiom accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
