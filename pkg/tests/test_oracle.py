import itertools
import json
import math
import random
from pathlib import Path

import pytest

from batchplate.formats import layout_from_report
from batchplate.model import Instance, Part, Platform
from batchplate.oracle import (OracleLimitExceeded, canonical_count, canonical_orderings,
                               enumerate_optimal)
from batchplate.packer import pack_sequence

FIXTURE = json.loads((Path(__file__).parent / "fixtures" / "case_study_oracle.json").read_text())


def brute_force(instance):
    """Best mass and best covered area over all n! orders, no pruning."""
    best_mass = best_area = 0
    for perm in itertools.permutations(instance.parts):
        lay = pack_sequence(instance.platform, perm)
        best_mass = max(best_mass, lay.total_mass)
        best_area = max(best_area, lay.covered_area)
    return best_mass, best_area


def random_instance(rng, n, duplicates=True):
    shapes = [(rng.choice([20, 30, 40, 50, 60]), rng.choice([20, 30, 50, 70]),
               rng.choice([10, 20]), rng.choice([0.2, 0.5, 1.0])) for _ in range(n)]
    if duplicates:
        for i in range(1, n):
            if rng.random() < 0.4:
                shapes[i] = shapes[rng.randrange(i)]
    parts = [Part(f"r{i}", *s) for i, s in enumerate(shapes)]
    return Instance(Platform("T", 100, 90, 50), parts)


def test_single_part():
    inst = Instance(Platform("A", 10, 10, 10), [Part("a", 5, 5, 5, 1)])
    res = enumerate_optimal(inst)
    assert res.canonical_sequences == 1
    assert res.best_by_mass.part_names() == ["a"]


def test_identical_parts_collapse():
    inst = Instance(Platform("A", 10, 10, 10), [Part("a", 5, 5, 5, 1), Part("b", 5, 5, 5, 1)])
    res = enumerate_optimal(inst)
    assert res.canonical_sequences == 1 and res.sequences_evaluated == 1


def test_canonical_orderings_cover_multiset_exactly():
    rng = random.Random(3)
    for _ in range(20):
        inst = random_instance(rng, rng.randint(1, 6))
        orders = [tuple(p.shape_key() for p in o) for o in canonical_orderings(inst.parts)]
        every = {tuple(p.shape_key() for p in perm)
                 for perm in itertools.permutations(inst.parts)}
        assert len(orders) == len(set(orders)) == canonical_count(inst.parts)
        assert set(orders) == every


def test_case_study_count():
    from batchplate.formats import case_study
    assert canonical_count(case_study().parts) == math.factorial(10) // 96 == 37_800


def test_pruned_oracle_matches_brute_force():
    rng = random.Random(17)
    for _ in range(40):
        inst = random_instance(rng, rng.randint(1, 6))
        res = enumerate_optimal(inst)
        mass, area = brute_force(inst)
        assert res.best_by_mass.total_mass == mass
        assert res.best_by_coverage.covered_area == area


def test_limit_refusal_reports_count(case):
    with pytest.raises(OracleLimitExceeded) as err:
        enumerate_optimal(case, limit=1000)
    assert err.value.count == 37_800
    assert "37800" in str(err.value)


def test_full_rotation_space_contains_heuristic_space():
    rng = random.Random(5)
    for _ in range(15):
        inst = random_instance(rng, rng.randint(1, 5), duplicates=False)
        plain = enumerate_optimal(inst)
        full = enumerate_optimal(inst, full_rotation=True)
        assert full.sequences_evaluated == plain.canonical_sequences * 2 ** len(inst.parts)
        assert full.best_by_mass.total_mass >= plain.best_by_mass.total_mass
        assert full.best_by_coverage.covered_area >= plain.best_by_coverage.covered_area


def test_oracle_deterministic_across_workers(case):
    a = enumerate_optimal(case)
    b = enumerate_optimal(case, workers=4)
    assert a == b


def test_case_study_matches_frozen_fixture(case):
    res = enumerate_optimal(case)
    assert res.canonical_sequences == FIXTURE["canonical_sequences"]
    assert res.best_by_mass == layout_from_report(FIXTURE["best_by_mass"], case)
    assert res.best_by_coverage == layout_from_report(FIXTURE["best_by_coverage"], case)
    assert res.best_by_mass.total_mass >= 1_523_500
    assert res.best_by_coverage.coverage >= 0.9763
