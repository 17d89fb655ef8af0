#!/usr/bin/env python3
# Copyright 2026 The EdgeSpec Authors.
#
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

"""Runs `edgespec run` on a config and validates summary.json against the schema."""

import json
import subprocess
import sys

import jsonschema


def main() -> int:
    if len(sys.argv) != 5:
        print("usage: validate_summary.py EDGESPEC CONFIG SCHEMA OUT_DIR", file=sys.stderr)
        return 2
    binary, config, schema_path, out_dir = sys.argv[1:]
    subprocess.run([binary, "run", config, "--seed", "1", "--out", out_dir], check=True, stdout=subprocess.DEVNULL)
    with open(schema_path) as f:
        schema = json.load(f)
    with open(f"{out_dir}/summary.json") as f:
        summary = json.load(f)
    jsonschema.validate(summary, schema)
    with open(f"{out_dir}/rounds.csv") as f:
        header = f.readline().strip()
    expected = "round,rate_bps,k,tau,t_edge,t_up,t_cloud,t_down,t_total,energy_j,gamma_hat,fallback"
    if header != expected:
        print(f"unexpected rounds.csv header: {header}", file=sys.stderr)
        return 1
    print("summary.json valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
