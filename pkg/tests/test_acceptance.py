"""Exit criteria.  Each test records one PASS/FAIL line, printed in the
session summary."""

import itertools
import json
import math
import random
import time

import pytest

from batchplate.bench import REFERENCE_COVERAGE_BATCH, REFERENCE_MASS_BATCH
from batchplate.cli import main
from batchplate.model import Instance, Part, Platform, part_mass, part_volume, search_space_size
from batchplate.oracle import enumerate_optimal
from batchplate.packer import SearchConfig, iter_pack, multi_start, pack_sequence
from batchplate.wdp import select_winner

from conftest import record
from geometry import check_layout, check_state

pytestmark = pytest.mark.acceptance

TABLE3_MASS = 1_523_500
TABLE3_AREA = 37_075
TABLE4_MASS = 1_502_500
TABLE4_AREA = 39_050

# (name, length, width, height, filling, area, volume, stuff), per the row
# values of the case-study tables; area is length*width.
PART_ROWS = [
    ("P1", 100, 100, 100, 0.5, 10_000, 1_000_000, 500_000),
    ("P2", 100, 100, 100, 0.5, 10_000, 1_000_000, 500_000),
    ("P3", 50, 100, 100, 0.2, 5_000, 500_000, 100_000),
    ("P4", 50, 100, 100, 0.2, 5_000, 500_000, 100_000),
    ("P5", 50, 100, 100, 0.2, 5_000, 500_000, 100_000),
    ("P6", 50, 100, 100, 0.2, 5_000, 500_000, 100_000),
    ("P7", 45, 45, 100, 0.5, 2_025, 202_500, 101_250),
    ("P8", 45, 45, 100, 0.5, 2_025, 202_500, 101_250),
    ("P9", 55, 55, 100, 0.4, 3_025, 302_500, 121_000),
    ("P10", 80, 80, 100, 0.3, 6_400, 640_000, 192_000),
]


@pytest.fixture(scope="module")
def pack_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("accept") / "report.json"
    t0 = time.perf_counter()
    code = main(["pack", "case-study", "--iterations", "120", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    assert code == 0
    return json.loads(out.read_text()), elapsed


@pytest.fixture(scope="module")
def case_oracle(case):
    t0 = time.perf_counter()
    res = enumerate_optimal(case)
    return res, time.perf_counter() - t0


def test_c1_case_study_mass(pack_run, case_oracle):
    report, elapsed = pack_run
    mass = report["metrics"]["total_mass_mm3"]
    oracle_mass = case_oracle[0].best_by_mass.total_mass
    ok = mass >= TABLE3_MASS and oracle_mass >= TABLE3_MASS and elapsed < 5
    assert record("C1 case-study mass", ok,
                  f"winner {mass:.0f} >= {TABLE3_MASS}, oracle {oracle_mass:.0f}, "
                  f"{elapsed:.2f}s < 5s")


def test_c2_case_study_coverage(pack_run, case_oracle, case):
    report, _ = pack_run
    area = report["max_coverage"]["covered_area_mm2"]
    frac = area / case.platform.area
    oracle_area = case_oracle[0].best_by_coverage.covered_area
    ok = area >= TABLE4_AREA and frac >= 0.9763 and oracle_area >= TABLE4_AREA
    assert record("C2 case-study coverage", ok,
                  f"max-coverage {area:.0f} mm2 ({100 * frac:.2f}%) >= {TABLE4_AREA}, "
                  f"oracle {oracle_area:.0f}")


def _full_layout(instance, names):
    """A heuristic layout that places exactly the parts in ``names``."""
    parts = [instance.part(n) for n in names]
    for perm in itertools.permutations(parts):
        lay = pack_sequence(instance.platform, perm)
        if not lay.unplaced:
            return lay
    raise AssertionError(f"no ordering of {names} places every part")


def test_c3_winner_selection(case):
    mass_batch = _full_layout(case, REFERENCE_MASS_BATCH)
    cover_batch = _full_layout(case, REFERENCE_COVERAGE_BATCH)
    assert (mass_batch.total_mass, mass_batch.covered_area) == (TABLE3_MASS, TABLE3_AREA)
    assert (cover_batch.total_mass, cover_batch.covered_area) == (TABLE4_MASS, TABLE4_AREA)
    w1 = select_winner([mass_batch, cover_batch])
    w2 = select_winner([cover_batch, mass_batch])
    diff = mass_batch.total_mass - cover_batch.total_mass
    ok = w1 is mass_batch and w2 is mass_batch and diff == 21_000
    assert record("C3 winner selection", ok,
                  f"winner = {sorted(w1.part_names())}, mass difference {diff:.0f} == 21000")


SIDE_GRID = (10, 20, 30, 40, 50, 60, 70)
HEIGHT_GRID = (10, 20, 30, 40, 50)
FILLING_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


def distinct_instance(rng, n):
    """n parts with pairwise distinct shapes drawn uniformly from the grids."""
    seen, parts = set(), []
    while len(parts) < n:
        shape = (rng.choice(SIDE_GRID), rng.choice(SIDE_GRID),
                 rng.choice(HEIGHT_GRID), rng.choice(FILLING_GRID))
        if shape not in seen:
            seen.add(shape)
            parts.append(Part(f"d{len(parts)}", *shape))
    return Instance(Platform("G", 100, 100, 50), parts)


def test_c4_oracle_gap(case, case_oracle):
    rng = random.Random(4)
    mismatches = 0
    for k in range(50):
        inst = distinct_instance(rng, 1 + k % 6)
        oracle = enumerate_optimal(inst)
        best = 0
        for perm in itertools.permutations(inst.parts):
            res = multi_start(Instance(inst.platform, perm),
                              SearchConfig(iterations=1, ordering="as-given"))
            best = max(best, res.winner.layout.total_mass)
        mismatches += best != oracle.best_by_mass.total_mass
    oracle, oracle_time = case_oracle
    heuristic = multi_start(case, SearchConfig(iterations=120)).winner.layout.total_mass
    ratio = heuristic / oracle.best_by_mass.total_mass
    ok = mismatches == 0 and ratio >= 0.95 and oracle_time < 600
    assert record("C4 oracle gap", ok,
                  f"{50 - mismatches}/50 exhaustive matches; case study "
                  f"{100 * ratio:.2f}% of oracle mass (>= 95%); oracle {oracle_time:.2f}s")


def test_c5_geometric_invariants():
    rng = random.Random(5)
    failures = 0
    for _ in range(1000):
        plat = Platform("F", rng.randint(20, 300), rng.randint(20, 300), 100)
        parts = [Part(f"f{i}", rng.randint(1, 150), rng.randint(1, 150),
                      rng.randint(1, 100), rng.choice(FILLING_GRID))
                 for i in range(rng.randint(1, 30))]
        for state in iter_pack(plat, parts):
            failures += bool(check_state(state, plat))
        failures += bool(check_layout(pack_sequence(plat, parts)))
    assert record("C5 geometric invariants", failures == 0,
                  f"{failures} failures over 1000 fuzzed instances (n <= 30)")


def test_c6_search_space():
    big = search_space_size(25)
    recurrence = all(search_space_size(n) == 2 * n * search_space_size(n - 1)
                     for n in range(1, 31))
    independent = big == 2**25 * math.factorial(25)
    ok = big > 10**31 and recurrence and independent
    assert record("C6 search-space size", ok,
                  f"2^25*25! = {big} > 10^31; recurrence n=1..30 {recurrence}")


def test_c7_determinism(tmp_path):
    outs = []
    for i, threads in enumerate(["1", "1", "8"]):
        out = tmp_path / f"r{i}.json"
        assert main(["pack", "case-study", "--threads", threads, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1] == outs[2]
    assert record("C7 determinism", ok,
                  "two runs and --threads 1 vs 8 produce byte-identical reports")


def test_c8_formula_spot_checks():
    good = 0
    for name, l, w, h, f, area, volume, stuff in PART_ROWS:
        p = Part(name, l, w, h, f)
        good += (p.area == area and part_volume(p) == volume
                 and math.isclose(part_mass(p), stuff, rel_tol=0, abs_tol=1e-6))
    assert record("C8 formula spot-checks", good == 10, f"{good}/10 parts exact")
