"""
Acceptance sweep

Runs every acceptance check of the verifier at its stated order and prints
a banner summary. Exits 1 if any check fails.

Usage:
    python scripts/run_acceptance.py
"""

import sys
import os

# Add parent directory to path so we can import core and integrations
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import time

import sympy as sp

from core.algebra import VerificationError
from core.symmetric_functions import power_sum_on_curve, power_sum_restricted
from integrations.belyi_catalog import (
    CATALOG,
    belyi_catalog,
    compose_maps,
    decomposition_checks,
    expected_profile,
    phi1,
    phi2,
    verify_belyi,
)
from integrations.identity_registry import sample_plan, spot_params, verify
from integrations.schwarz_geometry import (
    classify_low_genus,
    coprime_pairs,
    elliptic_j,
    fibre_total,
    genus,
    genus_table,
    quoted_models,
    rising,
)

STEPS = 10
results = []


def check(name, fn):
    started = time.time()
    try:
        ok = bool(fn())
        detail = ""
    except VerificationError as e:
        ok, detail = False, f" ({type(e).__name__}: {e})"
    elapsed = time.time() - started
    results.append((name, ok))
    print(f"{'✅' if ok else '❌'} {name} [{elapsed:.1f}s]{detail}")


def passes(ident, order, **params):
    return verify(ident, params, order=order).passed


def banner(step, title):
    print(f"\n[Step {step}/{STEPS}] {title}...")
    print("-" * 70)


print("=" * 70)
print("Hypergeometric identity verifier: acceptance sweep")
print("=" * 70)

banner(1, "Sample identity at the even map")
check("eq2-sample p=1 N=12", lambda: passes("eq2-sample", 12, p=1))

banner(2, "Transform identities")
for tag in ("m2", "m1", "0", "1", "2", "3"):
    check(f"sec3-{tag} N=10", lambda tag=tag: passes(f"sec3-{tag}", 10))
for tag in ("0", "1"):
    check(f"sec3-interp-{tag} N=8", lambda tag=tag: passes(f"sec3-interp-{tag}", 8))

banner(3, "Trinomial residue classes")
for p, q in ((1, 2), (2, 1), (1, 3), (3, 1), (2, 3)):
    for ell in (0, 1):
        for kappa in range(q):
            check(f"thm46-i p={p} q={q} l={ell} kappa={kappa} N=8",
                  lambda p=p, q=q, ell=ell, kappa=kappa: passes("thm46-i", 8, p=p, q=q, l=ell, kappa=kappa))
        for kappa in range(p + q):
            check(f"thm46-ii p={p} q={q} l={ell} kappa={kappa} N=6",
                  lambda p=p, q=q, ell=ell, kappa=kappa: passes("thm46-ii", 6, p=p, q=q, l=ell, kappa=kappa))
for part in ("i", "ii"):
    ident = f"thm48-{part}"
    spot = spot_params(ident)
    check(f"{ident} at a={spot['a']} c={spot['c']} N=8",
          lambda ident=ident, spot=spot: verify(ident, spot, order=8).passed)
    check(f"{ident} at c=0 N=8", lambda ident=ident, spot=spot: passes(ident, 8, a=spot["a"], c="0"))

banner(4, "Uniformized identities")
KAPPAS = {"thm71": (0,), "thm72": (0, 1), "thm73": (0, 1), "thm74": (0, 1, 2)}
for family, kappas in KAPPAS.items():
    for variant in ("a", "b"):
        ident = f"{family}-{variant}"
        variant_kappas = (0, 1) if ident == "thm74-b" else kappas
        p_values = (1, 3) if family == "thm73" else (None,)
        for p in p_values:
            for kappa in variant_kappas:
                params = {} if family == "thm71" else {"kappa": kappa}
                if p is not None:
                    params["p"] = p
                check(f"{ident} {params} N=8", lambda ident=ident, params=params: passes(ident, 8, **params))
for variant in ("a", "b"):
    ident = f"thm75-{variant}"
    for kappa in (0, 1, 2):
        count = sample_plan(ident, 12, {"kappa": kappa})
        check(f"{ident} kappa={kappa} sampled N=12 ({count} samples)",
              lambda ident=ident, kappa=kappa: verify(ident, {"kappa": kappa}, mode="sampled", order=12).passed)

banner(5, "Genus table and classification")
check("formula = Hurwitz for p+q <= 9", lambda: len(genus_table(9)) > 0)
check("genus(2,3,3) = 3", lambda: genus(2, 3, 3).genus == 3)
check("genus(1,4,3) = 1", lambda: genus(1, 4, 3).genus == 1)
check("genus(1,4,5) = 4", lambda: genus(1, 4, 5).genus == 4)
check("genus(p,q,2) = 0", lambda: all(genus(p, q, 2).genus == 0 for p, q in coprime_pairs(9)))
check("low-genus classification up to 8", lambda: {g: set(t) for g, t in classify_low_genus(8).items()} == {
    0: {(1, 2, 3), (2, 1, 3), (1, 3, 3), (1, 3, 4), (3, 1, 3), (3, 1, 4)},
    1: {(1, 4, 3), (4, 1, 3)},
})

banner(6, "Fibre identity")
check("sum N_P N_T M = (n-k+1)_k for p+q <= 9", lambda: all(
    fibre_total(p, q, k) == rising(p + q - k + 1, k)
    for p, q in coprime_pairs(9) for k in range(1, p + q + 1)
))

banner(7, "Belyi maps")
for map_id in CATALOG:
    pq = {"phi1": (2, 3), "phi2": (2, 3), "pi2": (2, 3), "zeta_p1": (3, None), "zeta_p2": (3, None)}
    p, q = pq.get(map_id, (None, None))
    if map_id == "phi2":
        # phi2 alone is not Belyi; it is certified as the inner factor of pi2
        check("belyi phi2 via phi1 o phi2", lambda: verify_belyi(
            compose_maps(phi1(2, 3), phi2(2, 3)), expected_profile("pi2", 2, 3)).passed)
        continue
    check(f"belyi {map_id}", lambda map_id=map_id, p=p, q=q: verify_belyi(
        belyi_catalog(map_id, p, q), expected_profile(map_id, p, q)).passed)
check("map decompositions", lambda: all(decomposition_checks(7).values()))

banner(8, "Integer and radical capstones")
for n in range(2, 7):
    check(f"thm88 n={n} N=16", lambda n=n: passes("thm88", 16, n=n))
check("thm88-limit n=4 N=16", lambda: passes("thm88-limit", 16, n=4))
for ident in ("thm810", "thm810-a1", "thm810-a5", "cor811-a", "cor811-b"):
    check(f"{ident} N=24", lambda ident=ident: passes(ident, 24))
check("thm812 N=40", lambda: passes("thm812", 40))
check("thm812-quadratic N=40", lambda: passes("thm812-quadratic", 40))
check("thm813 N=30", lambda: passes("thm813", 30))
check("thm813-f4eqn N=30", lambda: passes("thm813-f4eqn", 30))
check("quoted j-invariants", lambda: sorted(elliptic_j(m) for m in quoted_models())
      == sorted([sp.Rational(-2 ** 12 * 5 ** 2, 3), sp.Rational(-25, 2)]))

banner(9, "Power sums on the curve")
check("closed form = Newton-Girard for gamma <= 20", lambda: all(
    sp.expand(power_sum_on_curve(g, p, q).as_expr() - power_sum_restricted(g, p, q)) == 0
    for p, q in ((1, 2), (2, 1), (2, 3), (1, 4)) for g in range(1, 21)
))

banner(10, "Summary")
failed = [name for name, ok in results if not ok]
print(f"{len(results) - len(failed)}/{len(results)} checks passed")
for name in failed:
    print(f"   ❌ {name}")
print("=" * 70)
sys.exit(1 if failed else 0)
