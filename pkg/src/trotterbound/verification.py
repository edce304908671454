"""Reproduction checks shared by ``trotterbound verify`` and the test-suite."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from trotterbound.bounds import (
    ANTI,
    DOWN,
    RIGHT,
    SELF,
    SimParams,
    a_table,
    bound_brute,
    bound_closed,
    bound_expanded,
    interior_a,
    one_norm_polynomial,
)
from trotterbound.models import LatticeSpec, ModelParams, build_model, table_golden_check
from trotterbound.pauli import Coefficient

# pair counts per monomial (t^2, tU or tJ, J^2) for same-site, neighbour and
# anti-diagonal displacements
EXPECTED_COUNTS = {
    "hubbard": {SELF: (8, 32, 0), RIGHT: (8, 8, 0), DOWN: (8, 8, 0), ANTI: (4, 0, 0)},
    "tj": {SELF: (384, 1024, 192), RIGHT: (256, 512, 192), DOWN: (256, 512, 192), ANTI: (128, 256, 96)},
}
_MONOS = {"hubbard": ((2, 0, 0), (1, 1, 0), (0, 0, 2)), "tj": ((2, 0, 0), (1, 0, 1), (0, 0, 2))}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def check_golden(model: str, golden_text: str | None = None) -> CheckResult:
    report = table_golden_check(model, golden_text)
    detail = f"{report.matched}/{report.n_expected} terms match"
    if not report.ok:
        detail = report.diff()
    return CheckResult(f"golden table ({model})", report.ok, detail)


def check_counts(model: str) -> CheckResult:
    table = a_table(model, 2)
    bad = []
    for disp, want in EXPECTED_COUNTS[model].items():
        got = tuple(table.counts.get(disp, {}).get(m, 0) for m in _MONOS[model])
        if got != want:
            bad.append(f"{disp}: {got} != {want}")
    total = sum(sum(c.values()) for c in table.counts.values())
    return CheckResult(f"commutator pair counts ({model})", not bad,
                       "; ".join(bad) or f"{total} non-commuting pairs over the measured displacements")


def check_a_values(model: str) -> CheckResult:
    table = a_table(model, 2)
    want = interior_a(model, 2)
    bad = [f"{d}: {table[d]} != {a}" for d, a in want.items() if table[d] != a]
    extra = [d for d in table.entries if d not in want]
    if extra:
        bad.append(f"unexpected displacements {extra}")
    return CheckResult(f"A polynomials ({model})", not bad, "; ".join(bad) or "exact")


def check_pair_accounting() -> CheckResult:
    bad = []
    for model in ("hubbard", "tj"):
        table = a_table(model, 2)
        for boundary in ("open", "periodic"):
            for nx in range(1, 7):
                for ny in range(1, 7):
                    lat = LatticeSpec.square(nx, ny, boundary)
                    if bound_expanded(table, lat).pair_count != (nx * ny) ** 2:
                        bad.append(str(lat))
    return CheckResult("expanded pair count equals (Nx Ny)^2", not bad, ", ".join(bad) or "1x1 to 6x6")


def check_worked_example() -> CheckResult:
    lattice = LatticeSpec.square(6, 6)
    params = ModelParams(t=0.1, u=10.0, j_derived=True)
    sim = SimParams(tau=1.0, epsilon=0.0004)
    hub = bound_closed("hubbard", lattice, sim, params).numeric_r
    tj = bound_closed("tj", lattice, sim, params).numeric_r
    ok = abs(hub / 1.3381e6 - 1) <= 1e-3 and abs(tj / 4.1547e4 - 1) <= 1e-3 and hub / tj > 30
    return CheckResult("6x6 worked example", ok, f"Hubbard {hub:.6g}, t-J {tj:.6g}, ratio {hub / tj:.4g}")


def check_periodic_oracles() -> CheckResult:
    """Brute force, expansion and closed form coincide on periodic lattices with sides >= 3."""
    bad = []
    for model in ("hubbard", "tj"):
        table = a_table(model, 2)
        for nx, ny in ((3, 3), (3, 4), (4, 4)):
            lat = LatticeSpec.square(nx, ny, "periodic")
            polys = {bound_brute(build_model(model, lat)).polynomial,
                     bound_expanded(table, lat).polynomial,
                     bound_closed(model, lat).polynomial}
            if len(polys) != 1:
                bad.append(f"{model} {nx}x{ny}")
    return CheckResult("periodic brute == expanded == closed", not bad, ", ".join(bad) or "3x3, 3x4, 4x4")


def check_open_edges() -> CheckResult:
    """Brute force on open lattices equals the closed form minus the edge deficit."""
    bad = []
    for model in ("hubbard", "tj"):
        for nx, ny in ((2, 2), (3, 2), (4, 3)):
            lat = LatticeSpec.square(nx, ny)
            if bound_brute(build_model(model, lat)).polynomial != bound_closed(model, lat, exact_edges=True).polynomial:
                bad.append(f"{model} {nx}x{ny}")
        for n in (2, 5):
            lat = LatticeSpec.chain(n)
            if bound_brute(build_model(model, lat)).polynomial != bound_closed(model, lat, exact_edges=True).polynomial:
                bad.append(f"{model} chain {n}")
    return CheckResult("open brute == edge-corrected closed", not bad, ", ".join(bad) or "exact")


def check_hubbard_one_norm() -> CheckResult:
    lat = LatticeSpec.square(4, 4, "periodic")
    got = one_norm_polynomial(t for g in build_model("hubbard", lat) for t in g.terms)
    per_site = Coefficient.monomial(4, t=1) + Coefficient.monomial(Fraction(3, 4), u=1)
    want = per_site * per_site * lat.n_sites**2
    return CheckResult("Hubbard 1-norm from term list", got == want, f"{got}")


def check_spectrum_overlap() -> CheckResult:
    from trotterbound.spectra import OVERLAP_DEVIATION_J, four_site_overlap

    near, _, _ = four_site_overlap(0.1, 100.0)
    far, _, _ = four_site_overlap(0.1, 10.0)
    ok = near.deviation <= 2 * OVERLAP_DEVIATION_J and far.deviation > near.deviation
    return CheckResult("four-site spectrum overlap", ok,
                       f"deviation {near.deviation:.3e} J at U/t=100, {far.deviation:.3e} J at U/t=10")


def run_checks(quick: bool = False, golden: dict[str, str] | None = None) -> list[CheckResult]:
    golden = golden or {}
    checks: list[Callable[[], CheckResult]] = [
        lambda: check_golden("hubbard", golden.get("hubbard")),
        lambda: check_golden("tj", golden.get("tj")),
        lambda: check_counts("hubbard"),
        lambda: check_counts("tj"),
        lambda: check_a_values("hubbard"),
        lambda: check_a_values("tj"),
        check_pair_accounting,
        check_worked_example,
        check_hubbard_one_norm,
    ]
    if not quick:
        checks += [check_periodic_oracles, check_open_edges, check_spectrum_overlap]
    results = []
    for fn in checks:
        start = time.perf_counter()
        try:
            res = fn()
        except Exception as exc:  # a crashing check is a failing check
            res = CheckResult(getattr(fn, "__name__", "check"), False, f"{type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - start
        results.append(res)
    return results
