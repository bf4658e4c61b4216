"""Smoke test for the plumbcalc Python module.

    cd crates/python && maturin develop --release
    python python/smoke_test.py
"""

import json
import pathlib
import subprocess
import sys

import plumbcalc

ROOT = pathlib.Path(__file__).resolve().parent.parent
EXAMPLE = ROOT / "configs" / "example.conf"


def main() -> int:
    c = plumbcalc.Config([([2], [1])])
    assert c.solve() == (2, [[1]])
    assert c.intersection_matrix() == [[-2]]
    assert c.validate()["rational"] is True

    # one (-2)-curve, target = twist = 2C
    s = c.peel_summary([[2]], [[2]])
    assert s["h0"] == {"lo": 1, "hi": 1}, s
    assert s["h1"] == {"lo": 9, "hi": 9}, s
    assert s["euler"] == -8
    assert c.ne_summary(2) == s

    ledger = c.peel_ledger([[2]], [[2]], order="reverse")
    assert len(ledger["steps"]) == 2

    assert c.component_vanishing(2) == [[True]]
    assert c.e_vanishing(2) is True

    g = c.growth(1, 6)
    assert [r["h1_lo"] for r in g["rows"]] == ["3", "9", "19", "33", "51", "73"]
    assert g["quadratic_leading_coefficient"] == "2"

    d = c.discrepancy(1, 2)
    assert len(d) == 2 and "paper_value" in json.dumps(d)

    assert plumbcalc.p1_cohomology(-3) == (0, 2)
    assert plumbcalc.hirzebruch_jung([3, 2]) == (5, 2)
    assert plumbcalc.closed_form_small_m([3], [2]) == [3, 2]
    assert plumbcalc.alpha_bound(2, 1, 2, 2) == 3

    try:
        plumbcalc.Config([([1], [1])])
    except ValueError:
        pass
    else:
        raise AssertionError("b=1 accepted")

    # the Python report matches the CLI byte for byte when the binary is built
    text = EXAMPLE.read_text()
    cfg = plumbcalc.Config.parse(text)
    assert cfg.sweep == (2, 10)
    ours = cfg.report_json(text, 2, cfg.sweep)
    cli = ROOT / "target" / "debug" / "plumbcalc"
    if cli.exists():
        out = subprocess.run(
            [str(cli), "report", str(EXAMPLE), "--format", "json"], check=True, capture_output=True, text=True
        ).stdout
        assert out == ours, "python and cli reports differ"
        print("report matches cli")
    json.loads(ours)

    print("smoke test ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
