#!/usr/bin/env python3
# Copyright 2026 The mdclt Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the JSON fixtures under fixtures/exact and fixtures/exact_broken."""

import itertools
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent


def grid_points(dims):
    return list(itertools.product(*[range(d) for d in dims]))


def index(dims, coords):
    idx = 0
    for d, c in zip(dims, coords):
        idx = idx * d + c
    return idx


def rotation(dims, axis, step=1):
    image = []
    for c in grid_points(dims):
        c = list(c)
        c[axis] = (c[axis] + step) % dims[axis]
        image.append(index(dims, c))
    return image


def labels(dims, key):
    return [key(c) for c in grid_points(dims)]


def lab(key_values):
    ids = {}
    return [ids.setdefault(k, len(ids)) for k in key_values]


def write(path, obj):
    path.write_text(json.dumps(obj, indent=1) + "\n")


def main():
    exact = ROOT / "fixtures" / "exact"
    broken = ROOT / "fixtures" / "exact_broken"
    exact.mkdir(parents=True, exist_ok=True)
    broken.mkdir(parents=True, exist_ok=True)

    torus = [6, 4]
    gens = [rotation(torus, 0), rotation(torus, 1)]
    residues = lab(labels(torus, lambda c: (c[0] % 2, c[1] % 2)))
    x_parity = lab(labels(torus, lambda c: c[0] % 2))
    n = 24
    prop = [
        {"name": "torus-6x4-residues-C-trivial", "check": "prop_pro", "points": n,
         "generators": gens, "F": residues, "C": [0] * n},
        {"name": "torus-6x4-residues-C-x-parity", "check": "prop_pro", "points": n,
         "generators": gens, "F": residues, "C": x_parity},
        {"name": "torus-6x4-F-discrete", "check": "prop_pro", "points": n,
         "generators": gens, "F": list(range(n)), "C": [0] * n},
        {"name": "torus-6x4-C-equals-F", "check": "prop_pro", "points": n,
         "generators": gens, "F": residues, "C": residues},
    ]
    # Non-transitive action: rotations by 2 leave four orbits, with weights
    # that vary between orbits.
    gens2 = [rotation(torus, 0, 2), rotation(torus, 1, 2)]
    orbit_weight = {(0, 0): 1, (0, 1): 2, (1, 0): 3, (1, 1): 4}
    total = sum(orbit_weight[(c[0] % 2, c[1] % 2)] for c in grid_points(torus))
    weights = [f"{orbit_weight[(c[0] % 2, c[1] % 2)]}/{total}" for c in grid_points(torus)]
    prop.append({"name": "torus-6x4-step2-weighted", "check": "prop_pro", "points": n,
                 "weights": weights, "generators": gens2,
                 "F": lab(labels(torus, lambda c: (c[0] % 3, c[1] % 2))),
                 "C": lab(labels(torus, lambda c: c[1] % 2))})
    write(exact / "prop_pro.json", prop)

    cube = [2, 3, 5]
    indep = [
        {"name": "rotations-Z2xZ3xZ5", "check": "independence", "points": 30,
         "generators": [rotation(cube, k) for k in range(3)]},
        {"name": "cyclic-Z30-trivial-factors", "check": "independence", "points": 30,
         "generators": [[(x + 1) % 30 for x in range(30)]] * 3},
    ]
    write(exact / "independence.json", indep)

    cycle6 = [(x + 1) % 6 for x in range(6)]
    lemma = [
        {"name": "cycle6-one-point-past", "check": "lemma_class", "points": 6,
         "permutation": cycle6, "base": [1, 0, 0, 0, 0, 0], "generate_past": True},
        {"name": "identity-map", "check": "lemma_class", "points": 6,
         "permutation": list(range(6)), "base": [0, 0, 1, 1, 2, 2]},
        {"name": "cycle6-discrete", "check": "lemma_class", "points": 6,
         "permutation": cycle6, "base": list(range(6))},
    ]
    write(exact / "lemma_class.json", lemma)

    # Product filtration on Z3 x Z4: nested per-axis partitions, product weights.
    wa = [(1, 6), (2, 6), (3, 6)]
    wb = [(1, 10), (2, 10), (3, 10), (4, 10)]
    a_chain = [[0, 0, 0], [0, 1, 1], [0, 1, 2]]
    b_chain = [[0, 0, 0, 0], [0, 0, 1, 1], [0, 1, 2, 3]]
    cells = []
    for pa in a_chain:
        for pb in b_chain:
            cells.append(lab([(pa[i], pb[j]) for i in range(3) for j in range(4)]))
    weights = [f"{x[0] * y[0]}/{x[1] * y[1]}" for x in wa for y in wb]
    chain = [[0] * 6, [0, 0, 0, 1, 1, 1], [0, 0, 1, 2, 2, 3], list(range(6))]
    commuting = [
        {"name": "product-filtration-3x4", "check": "completely_commuting", "points": 12,
         "weights": weights,
         "grid": {"origin": [-1, -1], "extent": [3, 3], "cells": cells}},
        {"name": "degenerate-F_ij-equals-F_j", "check": "completely_commuting", "points": 6,
         "weights": ["1/12", "1/12", "1/6", "1/6", "1/4", "1/4"],
         "grid": {"origin": [0, 0], "extent": [2, 4],
                  "cells": [chain[j] for i in range(2) for j in range(4)]}},
    ]
    write(exact / "completely_commuting.json", commuting)

    p = [0, 0, 1, 1]
    q = [0, 1, 0, 1]
    write(broken / "non_commuting.json", [
        {"name": "two-crossing-partitions", "check": "completely_commuting", "points": 4,
         "weights": ["1/2", "1/6", "1/6", "1/6"],
         "grid": {"origin": [0, 0], "extent": [2, 2],
                  "cells": [[0, 0, 0, 0], q, p, [0, 1, 2, 3]]}},
    ])


if __name__ == "__main__":
    main()
