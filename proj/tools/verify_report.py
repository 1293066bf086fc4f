#!/usr/bin/env python3
# Copyright 2026 The kktcert Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Recompute the KKT residual of a kktcert JSON certificate.

Reads only the stored selections (vertices and weights), never the
problem file. Exits 0 when the recomputed residual matches the reported
one within --tol, 1 otherwise.
"""

import argparse
import json
import math
import sys


def recompute(report):
    sel = report["selections"]
    r = [0.0] * len(report["point"])

    def add(weight, vec):
        for i, v in enumerate(vec):
            r[i] += weight * v

    obj = sel["objective"]
    for w, v in zip(obj["weights"], obj["vertices"]):
        add(w, v)
    for c in sel["constraints"]:
        if c["whole_space"] and not c["vertices"]:
            add(c["lambda"], c["direction"])
            continue
        for w, v in zip(c["weights"], c["vertices"]):
            add(w, v)
    return math.sqrt(sum(x * x for x in r))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("report", help="JSON certificate, '-' for stdin")
    ap.add_argument("--tol", type=float, default=1e-12)
    args = ap.parse_args()
    with (sys.stdin if args.report == "-" else open(args.report)) as f:
        report = json.load(f)
    reported = report["residual"]
    if not isinstance(reported, (int, float)):
        print(f"no finite residual reported ({reported!r})")
        return 1
    got = recompute(report)
    diff = abs(got - reported)
    print(f"verdict {report['verdict']} reported {reported:.17g} recomputed {got:.17g} diff {diff:.3g}")
    return 0 if diff <= args.tol else 1


if __name__ == "__main__":
    sys.exit(main())
