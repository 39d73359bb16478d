"""The full command-line pipeline, driven end to end in a scratch directory.

Equivalent shell session:

    cfkit synth disks.spec --n 500 --seed 7 --out train.csv
    cfkit synth disks.spec --n 1000 --seed 8 --out test.csv
    cfkit train train.csv --degree 4 --seed 7 --out model.cfm
    cfkit predict model.cfm test.csv --out predictions.csv
    cfkit eval model.cfm test.csv --shapes disks.spec --epsilon 0.1
    cfkit levelset model.cfm --bounds=-3.2:3.2,-1.2:1.2 --grid-res 40 --out grid.csv
    cfkit sweep disks.spec --n-list 50,200 --t-list 2,4 --seeds 0,1 --out sweep.csv
"""

import tempfile
from pathlib import Path

from cfkit.cli import main

SPEC = """\
class=1 kind=disk center=-2,0 radius=1
class=2 kind=disk center=2,0 radius=1
"""

with tempfile.TemporaryDirectory() as tmp:
    work = Path(tmp)
    spec = work / "disks.spec"
    spec.write_text(SPEC)

    steps = [
        ["synth", str(spec), "--n", "500", "--seed", "7",
         "--out", str(work / "train.csv")],
        ["synth", str(spec), "--n", "1000", "--seed", "8",
         "--out", str(work / "test.csv")],
        ["train", str(work / "train.csv"), "--degree", "4", "--seed", "7",
         "--out", str(work / "model.cfm")],
        ["predict", str(work / "model.cfm"), str(work / "test.csv"),
         "--out", str(work / "predictions.csv")],
        ["eval", str(work / "model.cfm"), str(work / "test.csv"),
         "--shapes", str(spec), "--epsilon", "0.1"],
        ["levelset", str(work / "model.cfm"), "--bounds=-3.2:3.2,-1.2:1.2",
         "--grid-res", "40", "--out", str(work / "grid.csv")],
        ["sweep", str(spec), "--n-list", "50,200", "--t-list", "2,4",
         "--seeds", "0,1", "--test-n", "400", "--out", str(work / "sweep.csv")],
    ]
    for argv in steps:
        print(f"\n$ cfkit {' '.join(argv)}")
        code = main(argv)
        assert code == 0, f"exit code {code}"

    print("\n--- sweep.csv ---")
    print((work / "sweep.csv").read_text())
