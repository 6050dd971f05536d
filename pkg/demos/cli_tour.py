"""Drive the command line tool from Python, one request per command."""

import json
import subprocess
import sys

requests = [
    ("canonicalize", {"matrix": [[1, 0, 0], [0, 1, 0], [0, 0, -1]]}),
    ("chart", {"matrix": [[1, 0, 0], [0, 2, 0], [0, 0, 3]]}),
    ("classify", {"A": [[-1, 0, 0], [0, -1, 0], [0, 0, 2]], "lambda": 0}),
    ("equiv", {"M": [[2, 0, 0], [0, 0, 0], [0, 0, 0]], "N": [[-2, 0, 0], [0, 0, 0], [0, 0, 0]]}),
    ("solve-basis", {"isotropy": "axial", "lift": "su2", "n": 0}),
    ("iso-modulus", {"matrix": [[1, 0, 0], [0, 2, 0], [0, 0, 3]]}),
]

for command, payload in requests:
    proc = subprocess.run(
        [sys.executable, "-m", "homconn", command, "-"],
        input=json.dumps(payload),
        capture_output=True,
        text=True,
    )
    print(f"$ homconn {command}  (exit {proc.returncode})")
    print(proc.stdout.strip())

lines = "\n".join(json.dumps({"a": a, "b": 3, "c": 4}) for a in (0, 1, 2))
proc = subprocess.run(
    [sys.executable, "-m", "homconn", "batch", "--command", "axial-canonical"],
    input=lines + "\nnot json\n",
    capture_output=True,
    text=True,
)
print(f"$ homconn batch --command axial-canonical  (exit {proc.returncode})")
print(proc.stdout.strip())
