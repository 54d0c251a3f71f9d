"""
End to end with the ``vxm`` command line
=========================================

Writes three generators x four settlements to a temporary folder, then runs
``batch``, ``infogain`` and ``report`` the way a shell user would.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from vxmetrics import Palette, VoxelGrid, serialize_grid
from vxmetrics.defaults import BLOCKS_1_12_2

palette = Palette(BLOCKS_1_12_2)
rng = np.random.default_rng(7)
styles = {"tidy": ["planks"], "stone": ["cobblestone", "stonebrick"],
          "wild": ["planks", "glass", "wool", "torch", "bookshelf", "fence"]}

work = Path(tempfile.mkdtemp(prefix="vxm-demo-"))
runs = []
for gen, materials in styles.items():
    for sample in range(4):
        cells = np.zeros((10, 16, 16), dtype=np.uint16)
        cells[:2] = palette.id_of("grass")
        lines = []
        for _ in range(150):
            x, z = (int(v) for v in rng.integers(0, 16, 2))
            y = int(rng.integers(2, 7))
            block = palette.id_of(materials[rng.integers(len(materials))])
            lines.append(f"{x},{y},{z},{cells[y, z, x]},{block}")
            cells[y, z, x] = block
        name = f"{gen}_{sample}"
        (work / f"{name}.vxl").write_bytes(serialize_grid(VoxelGrid(cells, palette)))
        (work / f"{name}.csv").write_text("\n".join(lines) + "\n")
        runs.append({"generator": gen, "sample": sample, "grid": f"{name}.vxl",
                     "changes": f"{name}.csv", "box": "0,0,0,16,10,16"})
(work / "manifest.json").write_text(json.dumps({"runs": runs}, indent=1))


def vxm(*args):
    proc = subprocess.run([sys.executable, "-m", "vxmetrics", *args], capture_output=True, text=True)
    print(f"$ vxm {' '.join(args)}  -> exit {proc.returncode}")
    print(proc.stdout + proc.stderr)


vxm("batch", "--manifest", str(work / "manifest.json"), "--out", str(work / "out"), "--jobs", "2")
print((work / "out" / "samples.csv").read_text().splitlines()[0])
vxm("infogain", str(work / "out" / "samples.csv"), "--format", "markdown", "--bins", "3")
vxm("report", str(work / "out" / "samples.csv"))
