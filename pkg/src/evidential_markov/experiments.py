"""Model-versus-observed tables and the uncertainty-measure comparison."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .calibration import FitResult, fit_rates, fit_shared, target_for_record
from .config import RunConfig, record_key
from .datasets import ExperimentRecord
from .errors import EMError, NoConvergence
from .evidence import ALL_METHODS, EntropyMethod
from .model import EmParams, ModelResult, evaluate, measure_bpa_cd, measure_bpa_d, run_model

GAMMA_RISK = 0.5


@dataclass(frozen=True)
class Table3Row:
    record: ExperimentRecord
    params: Optional[EmParams]
    fit: Optional[FitResult]
    result: Optional[ModelResult]
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.result is not None and self.error is None

    @property
    def no_convergence(self) -> bool:
        return self.fit is not None and not self.fit.converged


@dataclass(frozen=True)
class BakeoffRow:
    experiment: str
    method: EntropyMethod
    gamma: float
    predicted_dis: float
    observed_dis: float
    se: float
    overflow: bool = False

    @property
    def gamma_exceeds_half(self) -> bool:
        return self.gamma >= GAMMA_RISK


@dataclass(frozen=True)
class MethodSummary:
    method: EntropyMethod
    mean_dis: float
    mean_se: float
    experiments: int
    overflow_rows: int


@dataclass(frozen=True)
class Report:
    text: str
    csv: str
    rows: int


# --- parameter resolution ----------------------------------------------------


def _params(record, k_r, k_w, config: RunConfig) -> EmParams:
    return EmParams(
        k_r=k_r,
        k_w=k_w,
        p_good=record.p_g,
        t=config.t,
        entropy_method=config.entropy_method,
        generator_mode=config.generator_mode,
    )


def resolve_rates(records: Sequence[ExperimentRecord], config: RunConfig) -> dict:
    """Rates per record: overrides, then stored fits, then fresh fits.

    Returns ``{record_key: (k_r, k_w, FitResult | None) | EMError}``.
    """
    out: dict = {}
    pending = []
    for record in records:
        key = record_key(record)
        if config.rate_overrides is not None:
            out[key] = (*config.rate_overrides, None)
        elif key in config.fitted_rates:
            out[key] = (*config.fitted_rates[key], None)
        else:
            pending.append(record)
    if not pending:
        return out
    targets = {}
    for record in pending:
        try:
            targets[record_key(record)] = target_for_record(record, config.target, config.t)
        except EMError as exc:
            out[record_key(record)] = exc
    if config.fit_scope == "shared":
        try:
            fit = fit_shared(list(targets.values()), config.generator_mode)
        except NoConvergence as exc:
            fit = exc.best
        for key in targets:
            out[key] = (fit.k_r, fit.k_w, fit)
        return out
    for key, target in targets.items():
        try:
            fit = fit_rates(target, config.generator_mode)
        except NoConvergence as exc:
            fit = exc.best
        out[key] = (fit.k_r, fit.k_w, fit)
    return out


def run_table3(records: Sequence[ExperimentRecord], config: Optional[RunConfig] = None) -> list[Table3Row]:
    """Fit (or reuse) rates and run the model for every record.

    Failures are recorded on the row instead of aborting the batch; a fit
    that did not converge still runs at its best point and is flagged.
    """
    config = config or RunConfig()
    rates = resolve_rates(records, config)
    rows = []
    for record in records:
        entry = rates[record_key(record)]
        if isinstance(entry, EMError):
            rows.append(Table3Row(record, None, None, None, f"{type(entry).__name__}: {entry}"))
            continue
        k_r, k_w, fit = entry
        try:
            params = _params(record, k_r, k_w, config)
            result = run_model(params, gamma_override=0.0 if config.gamma_zero else None, strict=False)
        except EMError as exc:
            rows.append(Table3Row(record, None, fit, None, f"{type(exc).__name__}: {exc}"))
            continue
        error = None
        if fit is not None and not fit.converged:
            error = f"NoConvergence: objective {fit.objective_value:.3g}"
        rows.append(Table3Row(record, params, fit, result, error))
    return rows


def entropy_bakeoff(
    records: Sequence[ExperimentRecord],
    methods: Iterable = ALL_METHODS,
    config: Optional[RunConfig] = None,
    table: Optional[Sequence[Table3Row]] = None,
) -> list[BakeoffRow]:
    """Disjunction effect predicted under each uncertainty measure.

    The rates come from the Deng-entropy fit (``table`` if given); only the
    measure used for the extra uncertainty degree changes.
    """
    methods = [EntropyMethod.parse(m) for m in methods]
    if not methods:
        raise ValueError("at least one entropy method is required")
    config = config or RunConfig()
    table = table if table is not None else run_table3(records, config)
    rows = []
    for row in table:
        if row.params is None:
            continue
        m_cd = measure_bpa_cd(row.params)
        m_d = measure_bpa_d(m_cd)
        observed = row.record.observed_dis
        for method in methods:
            result = evaluate(m_cd, m_d, method, strict=False)
            rows.append(
                BakeoffRow(
                    experiment=row.record.name,
                    method=method,
                    gamma=result.gamma,
                    predicted_dis=result.dis,
                    observed_dis=observed,
                    se=abs(result.dis - observed),
                    overflow=result.overflow,
                )
            )
    return rows


def method_summaries(rows: Sequence[BakeoffRow]) -> list[MethodSummary]:
    """Per-method means, best (smallest mean SE) first."""
    by_method: dict = {}
    for row in rows:
        by_method.setdefault(row.method, []).append(row)
    out = []
    for method, group in by_method.items():
        n = len(group)
        out.append(
            MethodSummary(
                method=method,
                mean_dis=math.fsum(r.predicted_dis for r in group) / n,
                mean_se=math.fsum(r.se for r in group) / n,
                experiments=n,
                overflow_rows=sum(r.overflow for r in group),
            )
        )
    return sorted(out, key=lambda s: (s.mean_se, s.method.value))


# --- rendering -------------------------------------------------------------


def _f(x: Optional[float]) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "-"
    return f"{x:.4f}"


def _table(header: Sequence[str], body: Sequence[Sequence[str]], bold=lambda s: s) -> str:
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h) for i, h in enumerate(header)]
    line = "  ".join(h.rjust(w) if i else h.ljust(w) for i, (h, w) in enumerate(zip(header, widths)))
    out = [bold(line), "-" * len(line)]
    for r in body:
        out.append("  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))))
    return "\n".join(out)


def _csv(header, body) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(body)
    return buf.getvalue()


TABLE3_CSV = (
    "name", "face_type", "k_r", "k_w", "fit_objective", "converged",
    "p_g", "obs_p_a_given_g", "em_p_a_given_g", "obs_p_a_given_b", "em_p_a_given_b",
    "obs_p_t", "em_p_t", "obs_p_a", "em_p_a", "obs_dis", "em_dis", "dis_error",
    "published_dis", "gamma", "e_cd", "e_d", "overflow", "error",
)
BAKEOFF_CSV = ("experiment", "method", "gamma", "predicted_dis", "observed_dis", "se", "gamma_exceeds_half", "overflow")


def _table3_report(rows: Sequence[Table3Row], bold) -> Report:
    header = ("experiment", "", "P(G)", "P(A|G)", "P(B)", "P(A|B)", "P_T", "P(A)", "Dis", "|err|")
    body, csv_rows, notes = [], [], []
    for row in rows:
        r, res = row.record, row.result
        label = f"{r.name} ({r.face_type})"
        body.append([label, "Obs", _f(r.p_g), _f(r.p_a_given_g), _f(r.p_b), _f(r.p_a_given_b),
                     _f(r.p_t), _f(r.p_a), _f(r.observed_dis), ""])
        if res is not None:
            err = abs(res.dis - r.observed_dis)
            body.append(["", "EM", _f(res.p_good), _f(res.p_a_given_g), _f(1 - res.p_good), _f(res.p_a_given_b),
                         _f(res.p_t), _f(res.p_d_attack), _f(res.dis), _f(err)])
        if r.em_row is not None:
            em = r.em_row
            body.append(["", "Pub", _f(r.p_g), _f(em.p_a_given_g), _f(r.p_b), _f(em.p_a_given_b),
                         _f(em.p_t), _f(em.p_a), _f(em.dis), ""])
        if row.error:
            notes.append(f"! {label}: {row.error}")
        fit = row.fit
        csv_rows.append([
            r.name, r.face_type,
            row.params.k_r if row.params else "", row.params.k_w if row.params else "",
            fit.objective_value if fit else "", fit.converged if fit else "",
            r.p_g, r.p_a_given_g, res.p_a_given_g if res else "", r.p_a_given_b, res.p_a_given_b if res else "",
            r.p_t, res.p_t if res else "", r.p_a, res.p_d_attack if res else "",
            r.observed_dis, res.dis if res else "", abs(res.dis - r.observed_dis) if res else "",
            r.em_row.dis if r.em_row else "", res.gamma if res else "",
            res.e_cd if res else "", res.e_d if res else "", res.overflow if res else "", row.error or "",
        ])
    text = "\n".join([_table(header, body, bold), *notes])
    return Report(text, _csv(TABLE3_CSV, csv_rows), len(csv_rows))


def _bakeoff_report(rows: Sequence[BakeoffRow], bold) -> Report:
    header = ("experiment", "method", "gamma", "Dis", "obs Dis", "SE", "flag")
    body, csv_rows = [], []
    for r in rows:
        flag = "overflow" if r.overflow else ("gamma>=0.5" if r.gamma_exceeds_half else "")
        body.append([r.experiment, r.method.value, _f(r.gamma), _f(r.predicted_dis), _f(r.observed_dis), _f(r.se), flag])
        csv_rows.append([r.experiment, r.method.value, r.gamma, r.predicted_dis, r.observed_dis, r.se,
                         r.gamma_exceeds_half, r.overflow])
    summary = method_summaries(rows)
    text = _table(header, body, bold) + "\n\n" + _table(
        ("method", "mean Dis", "mean SE", "n", "overflow rows"),
        [[s.method.value, _f(s.mean_dis), _f(s.mean_se), str(s.experiments), str(s.overflow_rows)] for s in summary],
        bold,
    )
    return Report(text, _csv(BAKEOFF_CSV, csv_rows), len(csv_rows))


def summary_report(rows: Sequence, *, bold=lambda s: s) -> Report:
    """Aligned text (4 decimals) plus full-precision CSV for either kind of row."""
    rows = list(rows)
    if not rows:
        raise ValueError("nothing to report")
    if all(isinstance(r, Table3Row) for r in rows):
        return _table3_report(rows, bold)
    if all(isinstance(r, BakeoffRow) for r in rows):
        return _bakeoff_report(rows, bold)
    raise TypeError("rows must all be Table3Row or all BakeoffRow")


def plot_data(rows: Sequence[BakeoffRow]) -> str:
    """(method, experiment, predicted_dis, se) tuples as CSV."""
    return _csv(
        ("method", "experiment", "predicted_dis", "se"),
        [[r.method.value, r.experiment, r.predicted_dis, r.se] for r in rows],
    )
