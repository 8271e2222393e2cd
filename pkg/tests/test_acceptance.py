"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines live.
Oracles are independent of the code paths they check: plain sieves and
trial division for window extrema, brute-force scans for roots, and exact
integer comparisons recomputed inline for the theta witnesses.
"""

from __future__ import annotations

import json
import os
import random
import subprocess
import sys
import time

import prckit as pk

from conftest import sieve_list, trial_is_prime


def _report(criterion: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion:2d} {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def _cli(*argv: str) -> subprocess.CompletedProcess:
    env = dict(os.environ)
    env.pop("PRC_BIT_CEILING", None)
    return subprocess.run(
        [sys.executable, "-m", "prckit.cli", *argv],
        capture_output=True,
        text=True,
        env=env,
    )


DIGITS_POWFACT3 = (
    "digits", "--exps", "powfact:3", "--seed", "2", "--depth", "3",
    "--mode", "min", "--gap-policy", "empirical",
)
DIGITS_FACTORIAL = (
    "digits", "--exps", "factorial", "--seed", "2", "--depth", "6",
    "--mode", "min", "--gap-policy", "rh-cms",
)
DIGITS_POWFACT2 = (
    "digits", "--exps", "powfact:2", "--seed", "2", "--depth", "3",
    "--mode", "min", "--gap-policy", "cully-hugill",
)


def test_criterion_1_powfact3_digits():
    started = time.monotonic()
    proc = _cli(*DIGITS_POWFACT3)
    elapsed = time.monotonic() - started
    doc = json.loads(proc.stdout)
    ok = (
        proc.returncode == 0
        and doc["digits"].startswith("1.3052998807")
        and int(doc["agreed_places"]) >= 86
        and elapsed < 60
    )
    _report(
        1,
        ok,
        f"powfact:3 digits {doc['digits'][:13]}..., "
        f"agreed_places={doc['agreed_places']}, {elapsed:.1f}s",
    )


def test_criterion_2_factorial_chain_and_digits():
    started = time.monotonic()
    chain = pk.build_chain(pk.parse_exponent_spec("factorial"), 2, 6, "min", pk.RH_CMS)
    p4 = 127**4 + 22
    p5 = p4**5 + 104
    p6 = p5**6 + 700
    result = pk.prc_digits(chain, 1000)
    elapsed = time.monotonic() - started
    ok = (
        chain.primes == (2, 5, 127, p4, p5, p6)
        and chain.conditional is True
        and result.digits.startswith("2.2419914653")
        and result.agreed_places >= 254
        and elapsed < 60
    )
    _report(
        2,
        ok,
        f"factorial chain exact, conditional={chain.conditional}, "
        f"digits {result.digits[:13]}..., agreed_places={result.agreed_places}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_3_powfact2_digits():
    started = time.monotonic()
    chain = pk.build_chain(
        pk.parse_exponent_spec("powfact:2"), 2, 3, "min", pk.CULLY_HUGILL
    )
    result = pk.prc_digits(chain, 1000)
    elapsed = time.monotonic() - started
    ok = result.digits.startswith("1.49534878122") and elapsed < 600
    _report(
        3,
        ok,
        f"powfact:2 digits {result.digits}, agreed_places={result.agreed_places}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_4_seed_sweep_gap_endpoints():
    started = time.monotonic()
    prefixes = {2: "1.30529", 3: "1.45374", 5: "1.71299", 7: "1.91539", 11: "2.22949"}
    exps = pk.parse_exponent_spec("powfact:3")
    seen = {}
    for seed, prefix in prefixes.items():
        forest = pk.explore_tree(exps, (seed, seed), 2)
        gaps = pk.gap_intervals(forest, 1, digits=12)
        digits, places = gaps[0].right.enclosure.agreed_digits()
        seen[seed] = digits[: len(prefix)]
        assert places >= 6, f"seed {seed}: only {places} agreed places"
    elapsed = time.monotonic() - started
    ok = all(seen[s] == p for s, p in prefixes.items()) and elapsed < 300
    _report(4, ok, f"leftmost level-1 gap endpoints {seen}, {elapsed:.1f}s")


def test_criterion_5_mills_oracle_equivalence():
    started = time.monotonic()
    chain = pk.build_chain(pk.parse_exponent_spec("const:3"), 2, 4, "min", pk.EMPIRICAL)

    # independent oracle: sieve-backed scan for the first two levels,
    # complete trial division for the third
    table = set(sieve_list(1727))
    oracle = [2]
    for level in range(3):
        lo = oracle[-1] ** 3
        hi = (oracle[-1] + 1) ** 3 - 1
        if level < 2:
            oracle.append(next(n for n in range(lo, hi) if n in table))
        else:
            oracle.append(next(n for n in range(lo, hi) if trial_is_prime(n)))

    # floor recovery for k=1..4 from the next refinement's enclosure
    deeper = pk.build_chain(pk.parse_exponent_spec("const:3"), 2, 5, "min", pk.EMPIRICAL)
    enclosure = pk.prc_digits(deeper, 80).enclosure
    recovered = [
        pk.verify_floor_recovery(enclosure, 3**k, chain.primes[k - 1])
        for k in range(1, 5)
    ]
    elapsed = time.monotonic() - started
    ok = (
        chain.primes == tuple(oracle)
        and tuple(oracle) == (2, 11, 1361, 2521008887)
        and all(r is True for r in recovered)
        and elapsed < 300
    )
    _report(
        5,
        ok,
        f"const:3 chain == oracle {oracle}, floor recovery k=1..4 {recovered}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_6_window_invariants_against_sieve():
    started = time.monotonic()
    rng = random.Random(0xC6)
    # exhaustive sieving needs base primes to sqrt((p+1)^c), so the draw is
    # capped at p^c <= ~1e16 (full p range for c <= 4, p <= 1583 for c = 5)
    pools = {
        c: [p for p in sieve_list(cap)]
        for c, cap in ((2, 9999), (3, 9999), (4, 9999), (5, 1583))
    }
    checked = 0
    for _ in range(200):
        c = rng.choice((2, 3, 4, 5))
        p = rng.choice(pools[c])
        w = pk.Window.from_parent(p, c)
        assert pk.min_prime_in_window(w) == pk.first_prime_in_range(w.lo, w.hi_exclusive)
        assert pk.max_prime_in_window(w) == pk.last_prime_in_range(w.lo, w.hi_exclusive)
        top = (p + 1) ** c - 1
        assert top % p == 0 and top // p > 1  # explicit factorization witness
        assert not pk.is_prime(top).is_prime
        checked += 1
    elapsed = time.monotonic() - started
    ok = checked == 200 and elapsed < 120
    _report(6, ok, f"{checked} windows match sieve extrema, tops composite, {elapsed:.1f}s")


def test_criterion_7_root_property_suite():
    started = time.monotonic()
    rng = random.Random(0xC7)
    failures = 0
    for _ in range(9000):
        n = rng.randrange(0, 10**6)
        r = rng.randrange(1, 11)
        m = pk.nth_root_floor(n, r)
        if r == 1:
            brute = n
        else:
            brute = 0
            while (brute + 1) ** r <= n:
                brute += 1
        if m != brute or not (m**r <= n < (m + 1) ** r):
            failures += 1
    for _ in range(1000):
        a = rng.randrange(1, 10 ** rng.randrange(1, 41))
        r = rng.randrange(1, 1001)
        if pk.nth_root_floor(a**r, r) != a:
            failures += 1
    elapsed = time.monotonic() - started
    ok = failures == 0 and elapsed < 60
    _report(7, ok, f"10^4 root cases, {failures} failures, {elapsed:.1f}s")


def test_criterion_8_topology_witness():
    started = time.monotonic()
    forest = pk.explore_tree(pk.parse_exponent_spec("const:3"), (100, 150), 2)
    expanded = list(forest.roots)  # depth-2 frontier nodes are not expanded
    min_children = min(node.child_count for node in expanded)
    violations = pk.validate_forest(forest)
    elapsed = time.monotonic() - started
    ok = (
        len(expanded) == 10
        and min_children >= 2
        and violations == []
        and not forest.truncated
        and elapsed < 300
    )
    _report(
        8,
        ok,
        f"{len(expanded)} roots, min child count {min_children}, "
        f"{len(violations)} violations, {elapsed:.1f}s",
    )


def test_criterion_9_theta_window_reports():
    powfact3 = pk.build_chain(pk.parse_exponent_spec("powfact:3"), 2, 3, "min", pk.EMPIRICAL)
    factorial = pk.build_chain(pk.parse_exponent_spec("factorial"), 2, 6, "min", pk.RH_CMS)
    mills = pk.build_chain(pk.parse_exponent_spec("const:3"), 2, 4, "min", pk.EMPIRICAL)
    rep3 = pk.theta_window_report(powfact3)
    repf = pk.theta_window_report(factorial)
    repm = pk.theta_window_report(mills)
    late3 = [r for r in rep3.records if r.k >= 2]
    latef = [r for r in repf.records if r.k >= 2]
    small_k = repm.records[0]
    ok = (
        all(r.satisfied for r in late3)
        and len(late3) == 1
        and all(r.satisfied for r in latef)
        and len(latef) == 4
        and small_k.k == 1
        and not small_k.satisfied
        and small_k.lhs == 3**40
        and small_k.rhs == 8**21
        and small_k.lhs > small_k.rhs
    )
    _report(
        9,
        ok,
        "theta satisfied at every step k>=2 with c>=3; const:3 k=1 reported "
        "unsatisfied (3^40 > 8^21) without error",
    )


def test_criterion_10_determinism():
    started = time.monotonic()
    chain_proc = _cli(
        "chain", "--exps", "const:3", "--seed", "2", "--depth", "4",
        "--mode", "min", "--gap-policy", "empirical",
    )
    commands = [
        DIGITS_POWFACT3,
        DIGITS_FACTORIAL,
        DIGITS_POWFACT2,
        ("chain", "--exps", "const:3", "--seed", "2", "--depth", "4",
         "--mode", "min", "--gap-policy", "empirical"),
        ("explore", "--exps", "powfact:3", "--seeds", "2:11", "--depth", "2",
         "--gap-level", "1"),
        ("approx", "--exps", "powfact:3", "--seed", "2", "--depth", "3",
         "--max-den", "10"),
    ]
    mismatches = []
    for argv in commands:
        first = _cli(*argv)
        second = _cli(*argv)
        if first.stdout != second.stdout or first.returncode != second.returncode:
            mismatches.append(argv[0])
    # verify needs a chain file; write it once, run twice
    import tempfile

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        fh.write(chain_proc.stdout)
        path = fh.name
    try:
        first = _cli("verify", "--chain-file", path)
        second = _cli("verify", "--chain-file", path)
        if first.stdout != second.stdout or first.returncode != 0:
            mismatches.append("verify")
    finally:
        os.unlink(path)
    elapsed = time.monotonic() - started
    ok = mismatches == []
    _report(
        10,
        ok,
        f"7 commands run twice, byte-identical stdout (mismatches: {mismatches}), "
        f"{elapsed:.1f}s",
    )
