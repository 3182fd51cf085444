"""
Side comparison, parameter screens and branch matching.

A verification never raises on a mismatch: it returns a failing
VerifyReport naming the first order where the two sides differ.
"""
import time
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from config.log_policy import emit_metric, truncate_symbolic
from core.algebra import BranchError, ConstraintError, format_value
from core.hypergeom import HypSpec, lower_screen, reducibility_screen
from core.schemas import Mismatch, VerifyReport
from core.series import TruncSeries, first_mismatch


def compare_series(lhs: TruncSeries, rhs: TruncSeries, order: Optional[int] = None) -> Optional[Mismatch]:
    """First coefficient of lhs - rhs that is nonzero, through the shared order."""
    if lhs.var != rhs.var:
        raise ValueError(f"sides use different variables: {lhs.var} vs {rhs.var}")
    top = min(lhs.order, rhs.order) if order is None else min(order, lhs.order, rhs.order)
    k = first_mismatch(lhs, rhs, top)
    if k is None:
        return None
    return Mismatch(order=k, value=format_value(lhs[k] - rhs[k]))


def build_report(ident: str, mode: str, order: int, lhs: TruncSeries, rhs: TruncSeries,
                 ring: str, branch_choices: Sequence[str] = (), params: Optional[Dict[str, str]] = None,
                 started: Optional[float] = None, samples: Optional[List[Dict[str, str]]] = None,
                 certainty: Optional[str] = None) -> VerifyReport:
    """
    Compare the sides and package the result.

    Emits one `verify` METRICS line.
    """
    started = time.time() if started is None else started
    mismatch = compare_series(lhs, rhs, order)
    millis = int((time.time() - started) * 1000)
    report = VerifyReport(
        id=ident,
        mode=mode,
        order=order,
        passed=mismatch is None,
        first_mismatch=mismatch,
        ring=ring,
        branch_choices=list(branch_choices),
        millis=millis,
        samples=samples,
        certainty=certainty,
        params=dict(params or {}),
    )
    emit_verify_metric(report)
    return report


def emit_verify_metric(report: VerifyReport) -> None:
    metric = {
        "event": "verify",
        "id": report.id,
        "mode": report.mode,
        "order": report.order,
        "pass": report.passed,
        "millis": report.millis,
        "samples": len(report.samples) if report.samples else 0,
    }
    if report.first_mismatch is not None:
        metric["diff"] = report.first_mismatch.value
    emit_metric(metric)


def screen_spec(spec: HypSpec) -> List[str]:
    """
    Reasons a numeric parameter list is unusable: a lower parameter at a
    non-positive integer, or an upper-lower pair differing by an integer.

    The contiguous pair of an interpolating spec is only lower-screened.
    """
    problems = []
    for value in lower_screen(spec.lower):
        problems.append(f"lower parameter {format_value(value)} is a non-positive integer")
    uppers, lowers = spec.upper, spec.lower
    if spec.contiguous:
        uppers, lowers = uppers[:-1], lowers[:-1]
    for upper, lower in reducibility_screen(uppers, lowers):
        problems.append(
            f"upper {format_value(upper)} and lower {format_value(lower)} differ by an integer"
        )
    return problems


def require_screened(specs: Iterable[HypSpec], context: str) -> None:
    """Raise ConstraintError if any spec fails screen_spec."""
    for spec in specs:
        problems = screen_spec(spec)
        if problems:
            raise ConstraintError(f"{context}: {problems[0]}")


def match_branch(lhs: TruncSeries, rhs: TruncSeries, candidates: Sequence[Tuple[str, Any]]):
    """
    Pick the factor c among candidates with c * rhs agreeing with lhs at the
    first order where lhs is nonzero.

    Returns (label, factor); BranchError when no candidate fits.
    """
    k = lhs.valuation()
    if k is None:
        return candidates[0]
    for label, factor in candidates:
        if not (rhs[k] * factor - lhs[k]):
            return label, factor
    raise BranchError(f"no branch among {[c[0] for c in candidates]} matches at order {k}")


def format_report(report: VerifyReport) -> str:
    """Human-readable multi-line summary of a report."""
    status = "PASS" if report.passed else "FAIL"
    lines = [f"{report.id}: {status} ({report.mode}, order {report.order}, ring {report.ring})"]
    if report.params:
        lines.append("  params: " + ", ".join(f"{k}={v}" for k, v in sorted(report.params.items())))
    if report.first_mismatch is not None:
        value = truncate_symbolic(report.first_mismatch.value)
        lines.append(f"  first mismatch at order {report.first_mismatch.order}: {value}")
    if report.branch_choices:
        lines.append("  branches: " + "; ".join(report.branch_choices))
    if report.samples:
        lines.append(f"  samples: {len(report.samples)} ({report.certainty})")
    lines.append(f"  {report.millis} ms{' (cached)' if report.cached else ''}")
    return "\n".join(lines)
