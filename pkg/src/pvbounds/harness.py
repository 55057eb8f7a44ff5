"""Sweep orchestration: enumerate primitive characters, compute exact sums,
evaluate bounds, aggregate margins, and emit CSV/JSON reports.

Work is partitioned by modulus; every per-q result is deterministic, and the
merge happens in q order, so the emitted rows are byte-identical regardless
of the worker count. Reports stream to a temporary file and land with one
atomic rename.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import dataclass, field
from multiprocessing import get_context

import numpy as np

from . import bounds, kernel, lemmas
from .characters import enumerate_characters, unit_group
from .charsums import char_sum_result

__all__ = [
    "SweepConfig",
    "SweepRow",
    "SweepReport",
    "SweepViolation",
    "run_sweep",
    "verify_all",
    "VerifyOutcome",
    "SuiteResult",
    "gauss_check_range",
    "twist_check_range",
    "resolve_workers",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
DEFAULT_BOUNDS = ("theorem1", "pomerance")


def resolve_workers(requested: int) -> int:
    """Worker count, with the PV_WORKERS environment variable overriding."""
    env = os.environ.get("PV_WORKERS")
    if env is not None:
        return max(1, int(env))
    return max(1, requested)


@dataclass(frozen=True)
class SweepConfig:
    q_min: int = 3
    q_max: int = 2000
    parities: tuple[str, ...] = ("even", "odd")
    bounds: tuple[str, ...] = DEFAULT_BOUNDS
    workers: int = 1
    output_format: str = "csv"
    output_path: str | None = None
    store_rows: bool = True

    def __post_init__(self):
        if not (3 <= self.q_min <= self.q_max):
            raise ValueError(
                f"need 3 <= q_min <= q_max, got [{self.q_min}, {self.q_max}]"
            )
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        bad = set(self.parities) - {"even", "odd"}
        if bad or not self.parities:
            raise ValueError("parities must be a nonempty subset of even/odd")
        unknown = set(self.bounds) - set(bounds.bound_names())
        if unknown:
            raise ValueError(f"unknown bounds: {sorted(unknown)}")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be csv or json")


@dataclass(frozen=True)
class SweepRow:
    """One primitive character: exact sums plus margins per chosen bound."""

    q: int
    label: tuple[int, ...]
    parity: str
    conductor: int
    s_chi: float
    t_chi: float
    m_witness: int
    n_witness: int
    ratio: float
    bound_values: tuple[float, ...]
    margins: tuple[float, ...]

    def violated(self) -> bool:
        return any(m < 0.0 for m in self.margins)


def _csv_header(bound_names) -> list[str]:
    cols = [
        "q",
        "char_label",
        "parity",
        "conductor",
        "s_chi",
        "t_chi",
        "M",
        "N",
        "ratio_s_over_sqrtq_logq",
    ]
    for name in bound_names:
        cols.append(f"{name}_value")
        cols.append(f"{name}_margin")
    return cols


def _csv_record(row: SweepRow) -> list:
    rec = [
        row.q,
        ".".join(str(e) for e in row.label),
        row.parity,
        row.conductor,
        repr(row.s_chi),
        repr(row.t_chi),
        row.m_witness,
        row.n_witness,
        repr(row.ratio),
    ]
    for v, m in zip(row.bound_values, row.margins):
        rec.append(repr(v))
        rec.append(repr(m))
    return rec


def sweep_modulus(q: int, parities, bound_names) -> list[SweepRow]:
    """All primitive-character rows for one modulus, in label order.

    A conjugate character's prefix walk is the exact bitwise mirror of the
    original's (the root tables are conjugate-symmetric), so S, T and the
    witnesses carry over unchanged; each conjugate pair is computed once.
    """
    rows = []
    denom = math.sqrt(q) * math.log(q)
    orders = unit_group(q).orders
    bound_cache: dict[str, bounds.BoundValue] = {}
    computed: dict[tuple[int, ...], tuple[float, float, tuple[int, int]]] = {}
    for chi in enumerate_characters(q):
        if not chi.is_primitive or chi.parity not in parities:
            continue
        conj_label = tuple((-e) % o for e, o in zip(chi.label, orders))
        cached = computed.get(conj_label)
        if cached is not None:
            s_chi, t_chi, s_witness = cached
        else:
            res = char_sum_result(chi)
            s_chi, t_chi, s_witness = res.s_chi, res.t_chi, res.s_witness
            computed[chi.label] = (s_chi, t_chi, s_witness)
        values = []
        margins = []
        for name in bound_names:
            key = f"{name}:{chi.parity}"
            bv = bound_cache.get(key)
            if bv is None:
                bv = bounds.evaluate_bound(name, q, chi.parity)
                bound_cache[key] = bv
            exact = s_chi if bv.quantity == "S" else t_chi
            values.append(bv.value)
            margins.append(bv.value - exact)
        rows.append(
            SweepRow(
                q=q,
                label=chi.label,
                parity=chi.parity,
                conductor=chi.conductor,
                s_chi=s_chi,
                t_chi=t_chi,
                m_witness=s_witness[0],
                n_witness=s_witness[1],
                ratio=s_chi / denom,
                bound_values=tuple(values),
                margins=tuple(margins),
            )
        )
    return rows


def _sweep_worker(args) -> list[SweepRow]:
    return sweep_modulus(*args)


class SweepViolation(RuntimeError):
    """A theorem1/pomerance margin went negative (verification failure)."""

    def __init__(self, report: "SweepReport"):
        self.report = report
        rows = report.summary["violation_rows"]
        super().__init__(f"{len(rows)} negative-margin rows, first: {rows[0]}")


@dataclass
class SweepReport:
    config: SweepConfig
    summary: dict
    rows: list[SweepRow] = field(default_factory=list)

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_csv_header(self.config.bounds))
        for row in self.rows:
            writer.writerow(_csv_record(row))
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "summary": self.summary,
            "rows": [
                {
                    "q": r.q,
                    "label": list(r.label),
                    "parity": r.parity,
                    "conductor": r.conductor,
                    "s_chi": r.s_chi,
                    "t_chi": r.t_chi,
                    "M": r.m_witness,
                    "N": r.n_witness,
                    "ratio": r.ratio,
                    "bounds": {
                        name: {"value": v, "margin": m}
                        for name, v, m in zip(
                            self.config.bounds, r.bound_values, r.margins
                        )
                    },
                }
                for r in self.rows
            ],
        }


def _iter_row_batches(cfg: SweepConfig, workers: int):
    qs = range(cfg.q_min, cfg.q_max + 1)
    args = ((q, cfg.parities, cfg.bounds) for q in qs)
    if workers == 1:
        for a in args:
            yield _sweep_worker(a)
    else:
        ctx = get_context("fork")
        with ctx.Pool(workers) as pool:
            yield from pool.imap(_sweep_worker, args, chunksize=4)


def run_sweep(cfg: SweepConfig, raise_on_violation: bool = False) -> SweepReport:
    """Sweep every primitive character with q in [q_min, q_max].

    Rows stream to cfg.output_path (CSV or JSON) through a temp file with a
    final atomic rename; summary always aggregates violations (negative
    margins are flagged, never dropped), the max ratio S/(sqrt(q) log q),
    worst margins per bound, and the S = 2T deviation for even characters.
    """
    t0 = time.perf_counter()
    workers = resolve_workers(cfg.workers)
    n_rows = 0
    violation_rows: list[dict] = []
    max_ratio = (-math.inf, None)
    worst_margin = {name: (math.inf, None) for name in cfg.bounds}
    max_s2t = 0.0
    kept_rows: list[SweepRow] = []

    sink = None
    tmp_path = None
    csv_writer = None
    json_rows = None
    if cfg.output_path:
        tmp_path = cfg.output_path + ".tmp"
        sink = open(tmp_path, "w", newline="")
        if cfg.output_format == "csv":
            csv_writer = csv.writer(sink, lineterminator="\n")
            csv_writer.writerow(_csv_header(cfg.bounds))
        else:
            json_rows = []

    try:
        for batch in _iter_row_batches(cfg, workers):
            for row in batch:
                n_rows += 1
                if row.ratio > max_ratio[0]:
                    max_ratio = (row.ratio, (row.q, row.label))
                for name, margin in zip(cfg.bounds, row.margins):
                    if margin < worst_margin[name][0]:
                        worst_margin[name] = (margin, (row.q, row.label))
                if row.parity == "even":
                    max_s2t = max(max_s2t, abs(row.s_chi - 2.0 * row.t_chi))
                if row.violated():
                    violation_rows.append(
                        {
                            "q": row.q,
                            "label": list(row.label),
                            "parity": row.parity,
                            "s_chi": row.s_chi,
                            "t_chi": row.t_chi,
                            "margins": dict(zip(cfg.bounds, row.margins)),
                        }
                    )
                if csv_writer is not None:
                    csv_writer.writerow(_csv_record(row))
                elif json_rows is not None:
                    json_rows.append(row)
                if cfg.store_rows:
                    kept_rows.append(row)
    except BaseException:
        if sink is not None:
            sink.close()
            os.unlink(tmp_path)
        raise

    summary = {
        "schema": SCHEMA_VERSION,
        "q_min": cfg.q_min,
        "q_max": cfg.q_max,
        "parities": list(cfg.parities),
        "bounds": list(cfg.bounds),
        "workers": workers,
        "characters_checked": n_rows,
        "violations": len(violation_rows),
        "violation_rows": violation_rows,
        "max_ratio": None if max_ratio[1] is None else max_ratio[0],
        "max_ratio_at": max_ratio[1],
        "worst_margin": {
            name: {"margin": wm[0], "at": wm[1]}
            for name, wm in worst_margin.items()
            if wm[1] is not None
        },
        "max_s2t_deviation_even": max_s2t,
        "wall_time_s": time.perf_counter() - t0,
    }
    report = SweepReport(config=cfg, summary=summary, rows=kept_rows)

    if sink is not None:
        if json_rows is not None:
            tmp_report = SweepReport(config=cfg, summary=summary, rows=json_rows)
            json.dump(tmp_report.to_json_dict(), sink, indent=1)
            sink.write("\n")
        sink.close()
        os.replace(tmp_path, cfg.output_path)

    if raise_on_violation and violation_rows:
        raise SweepViolation(report)
    return report


# ---------------------------------------------------------------------------
# Gauss-sum and twisted-sum sweeps (parallel helpers for the identities).


def _gauss_worker(q: int) -> tuple[int, float]:
    from .characters import roots_of_unity

    chars = [chi for chi in enumerate_characters(q) if chi.is_primitive]
    if not chars:
        return 0, 0.0
    units = chars[0].unit_residues
    phases = roots_of_unity(q)[units % q]
    vals = roots_of_unity(chars[0].root_order)[
        np.stack([chi.unit_exponents for chi in chars])
    ]
    taus = vals @ phases
    worst = float(np.abs(np.abs(taus) - math.sqrt(q)).max()) / math.sqrt(q)
    return len(chars), worst


def gauss_check_range(q_min: int, q_max: int, workers: int = 1):
    """Worst relative deviation of |tau(chi)| from sqrt(q), all primitive chi.

    tau is computed by the same direct summation as gauss_sum, batched as
    one matrix-vector product per modulus.
    """
    workers = resolve_workers(workers)
    qs = range(q_min, q_max + 1)
    if workers == 1:
        results = [_gauss_worker(q) for q in qs]
    else:
        ctx = get_context("fork")
        with ctx.Pool(workers) as pool:
            results = pool.map(_gauss_worker, qs, chunksize=8)
    return sum(c for c, _ in results), max((w for _, w in results), default=0.0)


def _twist_worker(args) -> tuple[int, float]:
    from .characters import roots_of_unity

    q, m_per_char, seed = args
    worst = 0.0
    checks = 0
    roots_q = roots_of_unity(q)
    for idx, chi in enumerate(enumerate_characters(q)):
        if not chi.is_primitive:
            continue
        rng = np.random.default_rng(np.random.SeedSequence([seed, q, idx]))
        ms = rng.integers(0, 10 * q, size=m_per_char)
        units = chi.unit_residues
        vals_units = roots_of_unity(chi.root_order)[chi.unit_exponents]
        tau = complex(np.dot(vals_units, roots_q[units % q]))
        vals_full = chi.values()
        lhs = np.conj(vals_full[ms % q]) * tau
        phases = roots_q[(units[:, None] * (ms[None, :] % q)) % q]
        if chi.parity == "even":
            rhs = vals_units @ phases.real
        else:
            rhs = 1j * (vals_units @ phases.imag)
        worst = max(worst, float(np.abs(lhs - rhs).max()) / math.sqrt(q))
        checks += m_per_char
    return checks, worst


def twist_check_range(
    q_min: int, q_max: int, m_per_char: int = 50, seed: int = 987654321,
    workers: int = 1,
):
    """Worst sqrt(q)-relative twisted-sum discrepancy over random twists."""
    workers = resolve_workers(workers)
    args = [(q, m_per_char, seed) for q in range(q_min, q_max + 1)]
    if workers == 1:
        results = [_twist_worker(a) for a in args]
    else:
        ctx = get_context("fork")
        with ctx.Pool(workers) as pool:
            results = pool.map(_twist_worker, args, chunksize=8)
    return sum(c for c, _ in results), max((w for _, w in results), default=0.0)


# ---------------------------------------------------------------------------
# Composite verification.


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str
    error: str | None = None


@dataclass(frozen=True)
class VerifyOutcome:
    passed: bool
    suites: tuple[SuiteResult, ...]
    warning: str | None = None


ALL_SUITES = (
    "sweep",
    "lemma1",
    "lemma2",
    "lemma3",
    "lemma4",
    "constant_derivation",
    "crossover",
)


def _run_suite(name: str, fn) -> SuiteResult:
    try:
        passed, detail = fn()
        return SuiteResult(name=name, passed=passed, detail=detail)
    except Exception as exc:  # first failure keeps full context
        return SuiteResult(
            name=name, passed=False, detail="raised", error=f"{type(exc).__name__}: {exc}"
        )


def verify_all(
    sweep_cfg: SweepConfig | None = None,
    suites: tuple[str, ...] | None = None,
) -> VerifyOutcome:
    """Composite run: sweep, both slack lemmas, both kernel facts, the
    constant derivation, and both crossovers. Failures are aggregated, not
    short-circuited; passed is True only if every selected suite passed.
    """
    if suites is None:
        suites = ALL_SUITES
    warning = None
    if not suites:
        return VerifyOutcome(
            passed=True, suites=(), warning="empty suite selection: nothing verified"
        )
    unknown = set(suites) - set(ALL_SUITES)
    if unknown:
        raise ValueError(f"unknown suites: {sorted(unknown)}")
    cfg = sweep_cfg if sweep_cfg is not None else SweepConfig(store_rows=False)

    def sweep_suite():
        report = run_sweep(cfg)
        s = report.summary
        ok = s["violations"] == 0 and s["max_s2t_deviation_even"] < 1e-9
        return ok, (
            f"{s['characters_checked']} characters in [{cfg.q_min}, {cfg.q_max}], "
            f"{s['violations']} violations, max |S-2T| = {s['max_s2t_deviation_even']:.3e}"
        )

    def lemma1_suite():
        r = lemmas.lemma1_check()
        return r.min_slack > 0.0, f"min slack {r.min_slack:.6f} over {r.n_checked} checks"

    def lemma2_suite():
        r = lemmas.lemma2_check()
        return r.min_slack > 0.0, (
            f"min slack {r.min_slack:.6f} over {r.n_checked} checks (seed {r.seed})"
        )

    def lemma3_suite():
        r = kernel.lemma3_check()
        return not r.violations, (
            f"worst ratio {r.worst_ratio:.9f} <= {r.bound:.9f} "
            f"at (u={r.worst_u:.3e}, P={r.worst_P})"
        )

    def lemma4_suite():
        worst = max(
            kernel.lemma4_check(q, P)
            for q in range(1, 101)
            for P in (1.5, 2.0, 7.3, 50.0)
        )
        return worst < 1e-9, f"worst identity discrepancy {worst:.3e}"

    def constant_suite():
        r = kernel.constant_derivation()
        ok = (
            abs(r.a_bisection - r.a_closed_form) <= 1e-12
            and abs(r.f1_at_a - r.c0_over_2pi2) <= 1e-12
        )
        return ok, (
            f"A = {r.a_bisection:.12f}, f1(A) = {r.f1_at_a:.12f}, "
            f"C0/(2 pi^2) = {r.c0_over_2pi2:.12f}"
        )

    def crossover_suite():
        ce = bounds.crossover("even")
        co = bounds.crossover("odd")
        ok = ce <= 18000 and co <= 28000
        return ok, f"even crossover {ce} (<= 18000), odd {co} (<= 28000)"

    table = {
        "sweep": sweep_suite,
        "lemma1": lemma1_suite,
        "lemma2": lemma2_suite,
        "lemma3": lemma3_suite,
        "lemma4": lemma4_suite,
        "constant_derivation": constant_suite,
        "crossover": crossover_suite,
    }
    results = tuple(_run_suite(name, table[name]) for name in suites)
    return VerifyOutcome(
        passed=all(r.passed for r in results), suites=results, warning=warning
    )
