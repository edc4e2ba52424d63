"""guessctl: command-line reports, figure data, and exact-vs-asymptotic tables.

Subcommands: analyze (exponent report for all three sources), fig1
(guessing-difficulty gap curves over a p0 grid), fig2 (the three
-x - rate(x) curves), exact-compare (finite-k oracle vs asymptotic targets
with a shrinking-gap verdict), census (typical-set inventories).

Output is deterministic: CSV with '#' metadata comments for curves and
tables, JSON for reports, 9 significant digits everywhere, "inf" as the
out-of-domain sentinel. Exit codes: 0 success, 1 validation failure,
2 resource-guard refusal, 3 exact-compare trend failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .asymptotics import (
    ScgfModel,
    Source,
    SourceKind,
    binary_closed_forms,
    conditioned,
    growth_exponents,
    legendre_transform,
    scgf_model,
    source_breakpoints,
    unconditioned,
    uniform_typical,
)
from .entropy import LetterDistribution, shannon_entropy
from .errors import (
    DistributionError,
    EpsilonInadmissibleError,
    GuessworkError,
    TypeSpaceTooLargeError,
    WordSpaceTooLargeError,
)
from .oracle import (
    convergence_series,
    naive_enumeration_crosscheck,
    smallest_nonempty_k,
    trend_holds,
    typical_set_census,
)
from .tilting import boundary_types, require_admissible_epsilon

_KIND_NAMES = ("unconditioned", "conditioned", "uniform")


def _fmt(x: float) -> str:
    """Fixed 9-significant-digit rendering; the CLI's one number format."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        x = 0.0
    return np.format_float_positional(x, precision=9, unique=False, fractional=False)


def _jnum(x: float):
    # JSON has no inf literal; fall back to the same string sentinel
    x = float(x)
    if math.isinf(x) or math.isnan(x):
        return _fmt(x)
    return float(_fmt(x))


def _jvec(values) -> list:
    return [_jnum(v) for v in values]


def _parse_probs(text: str) -> LetterDistribution:
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise DistributionError(f"could not parse probabilities from {text!r}")
    if len(values) < 2:
        raise DistributionError("need at least two comma-separated probabilities")
    total = math.fsum(values)
    if abs(total - 1.0) > 1e-6:
        raise DistributionError(
            f"probabilities sum to {total!r}; renormalization only within 1e-6 of 1"
        )
    return LetterDistribution(tuple(v / total for v in values))


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError:
        raise DistributionError(f"could not parse numbers from {text!r}")


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip() != "")
    except ValueError:
        raise DistributionError(f"could not parse integers from {text!r}")


def _csv_row(fields) -> str:
    return ",".join("" if f is None else str(f) for f in fields)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _make_source(kind: str, p: LetterDistribution, epsilon: float | None) -> Source:
    if kind == "unconditioned":
        return unconditioned(p)
    if epsilon is None:
        raise DistributionError(f"--epsilon is required for kind={kind}")
    if kind == "conditioned":
        return conditioned(p, epsilon)
    return uniform_typical(p, epsilon)


def _kind_report(source: Source, model: ScgfModel) -> dict:
    exps = growth_exponents(source)
    report = {
        "moment_rate": _jnum(exps.moment_rate),
        "mean_log_rate": _jnum(exps.mean_log_rate),
        "modal_decay": _jnum(model.modal_decay),
        "plateau_width": _jnum(model.plateau_width),
        "max_slope": _jnum(model.max_slope),
        "tail_intercept": _jnum(model.tail_intercept),
    }
    if source.kind is SourceKind.CONDITIONED:
        report["window_excess"] = _jnum(exps.window_excess)
        lo, hi = source_breakpoints(source)
        report["breakpoints"] = {
            "alpha_low": None if lo is None else _jnum(lo),
            "alpha_high": None if hi is None else _jnum(hi),
        }
    return report


def cmd_analyze(args) -> tuple[str, int]:
    p = _parse_probs(args.p)
    epsilon = args.epsilon
    require_admissible_epsilon(p, epsilon)
    bnd = boundary_types(p, epsilon)
    sources = {
        "unconditioned": unconditioned(p),
        "conditioned": conditioned(p, epsilon),
        "uniform": uniform_typical(p, epsilon),
    }
    report = {
        "p": _jvec(p.probs),
        "epsilon": _jnum(epsilon),
        "entropy": _jnum(shannon_entropy(p)),
        "boundary": {
            "l_minus": _jvec(bnd.l_minus.freqs),
            "l_plus": _jvec(bnd.l_plus.freqs),
            "exists_minus": bnd.exists_minus,
            "exists_plus": bnd.exists_plus,
            "clamped_to_log_m": bnd.clamped_to_log_m,
            "entropy_minus": _jnum(shannon_entropy(bnd.l_minus)),
            "entropy_plus": _jnum(shannon_entropy(bnd.l_plus)),
        },
    }
    for name, source in sources.items():
        report[name] = _kind_report(source, scgf_model(source))
    if args.format == "csv":
        lines = ["# analyze report", "key,value"]
        for key, value in _flatten(report):
            lines.append(_csv_row((key, value)))
        return "\n".join(lines) + "\n", 0
    return json.dumps(report, indent=2) + "\n", 0


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for key, value in obj.items():
            yield from _flatten(value, f"{prefix}{key}." if prefix else f"{key}.")
        return
    if isinstance(obj, list):
        for i, value in enumerate(obj):
            yield from _flatten(value, f"{prefix}{i}.")
        return
    yield prefix[:-1], obj


_FIG1_DEFAULT_GRID = tuple((525 + 25 * i) / 1000 for i in range(19))


def cmd_fig1(args) -> tuple[str, int]:
    epsilon = args.epsilon
    grid = _parse_floats(args.p0_grid) if args.p0_grid else _FIG1_DEFAULT_GRID
    rows = []
    for p0 in grid:
        try:
            rep = binary_closed_forms(p0, epsilon)
        except (EpsilonInadmissibleError, DistributionError):
            rows.append({"p0": _jnum(p0), "top": None, "middle": None, "bottom": None,
                         "flag": "epsilon_inadmissible"})
            continue
        rows.append({"p0": _jnum(p0), "top": _jnum(rep.top), "middle": _jnum(rep.middle),
                     "bottom": _jnum(rep.bottom), "flag": ""})
    if args.format == "json":
        return json.dumps({"epsilon": _jnum(epsilon), "rows": rows}, indent=2) + "\n", 0
    lines = [
        f"# fig1: growth-rate gaps (uniform-vs-mean-log, uniform-vs-conditioned-moment,"
        f" uniform-vs-unconditioned-moment) at epsilon={_fmt(epsilon)}",
        "p0,top,middle,bottom,flag",
    ]
    for r in rows:
        lines.append(_csv_row((
            _fmt(r["p0"]),
            None if r["top"] is None else _fmt(r["top"]),
            None if r["middle"] is None else _fmt(r["middle"]),
            None if r["bottom"] is None else _fmt(r["bottom"]),
            r["flag"],
        )))
    return "\n".join(lines) + "\n", 0


def cmd_fig2(args) -> tuple[str, int]:
    p = _parse_probs(args.p)
    epsilon = args.epsilon
    require_admissible_epsilon(p, epsilon)
    models = [
        scgf_model(unconditioned(p)),
        scgf_model(conditioned(p, epsilon)),
        scgf_model(uniform_typical(p, epsilon)),
    ]
    log_m = math.log(p.m)
    xs = np.linspace(0.0, log_m, args.x_points)
    rows = []
    for x in xs:
        vals = []
        for model in models:
            rate = legendre_transform(model, float(x))
            vals.append(None if math.isinf(rate) else -float(x) - rate)
        rows.append((float(x), vals))
    meta = [
        f"# fig2: -x - rate(x) per source at p={args.p} epsilon={_fmt(epsilon)}",
        "# modal_decay: " + " ".join(
            f"{n}={_fmt(m.modal_decay)}" for n, m in zip(_KIND_NAMES, models)
        ),
        "# plateau_width: " + " ".join(
            f"{n}={_fmt(m.plateau_width)}" for n, m in zip(_KIND_NAMES, models)
        ),
    ]
    if args.format == "json":
        jrows = [
            {"x": _jnum(x), **{n: ("inf" if v is None else _jnum(v))
                               for n, v in zip(_KIND_NAMES, vals)}}
            for x, vals in rows
        ]
        payload = {
            "modal_decay": {n: _jnum(m.modal_decay) for n, m in zip(_KIND_NAMES, models)},
            "plateau_width": {n: _jnum(m.plateau_width) for n, m in zip(_KIND_NAMES, models)},
            "rows": jrows,
        }
        return json.dumps(payload, indent=2) + "\n", 0
    lines = meta + ["x," + ",".join(_KIND_NAMES)]
    for x, vals in rows:
        lines.append(_csv_row(
            (_fmt(x),) + tuple("inf" if v is None else _fmt(v) for v in vals)
        ))
    return "\n".join(lines) + "\n", 0


def cmd_exact_compare(args) -> tuple[str, int]:
    p = _parse_probs(args.p)
    source = _make_source(args.kind, p, args.epsilon)
    ks = _parse_ints(args.k)
    if not ks:
        raise DistributionError("--k must list at least one word length")
    alphas = _parse_floats(args.alpha) if args.alpha else (-0.5, 0.5, 1.0, 2.0)
    typical = source.kind is not SourceKind.UNCONDITIONED

    valid_ks = []
    empty_ks = []
    for k in ks:
        if typical and typical_set_census(
            p, source.epsilon, k, max_types=args.max_types
        ).is_empty:
            empty_ks.append(k)
        else:
            valid_ks.append(k)

    series = [("scgf", a) for a in alphas]
    series += [("mean_log", None), ("top_prob", None), ("modal_count", None)]
    if typical:
        series.append(("typical_size", None))

    lines_meta = [f"# exact-compare kind={args.kind} p={args.p}"
                  + (f" epsilon={_fmt(source.epsilon)}" if typical else "")]
    rows = []
    trends: dict[str, bool] = {}
    for qty, a in series:
        label = f"scgf[alpha={_fmt(a)}]" if qty == "scgf" else qty
        points = convergence_series(
            source, qty, tuple(valid_ks),
            alpha=1.0 if a is None else a, max_types=args.max_types,
        )
        by_k = {pt.k: pt for pt in points}
        for k in ks:
            if k in by_k:
                pt = by_k[k]
                rows.append((label, k, a, pt.value, pt.target, pt.gap, ""))
            else:
                rows.append((label, k, a, None, None, None, "empty_typical_set"))
        trends[label] = trend_holds(points)

    checks = []
    if args.max_words:
        for k in valid_ks:
            if p.m**k <= args.max_words:
                ok = naive_enumeration_crosscheck(
                    source, k, alphas=tuple(alphas),
                    max_words=args.max_words, max_types=args.max_types,
                )
                checks.append((k, ok))

    code = 0 if all(trends.values()) else 3
    if args.format == "json":
        payload = {
            "rows": [
                {"series": s, "k": k, "alpha": None if a is None else _jnum(a),
                 "exact": None if v is None else _jnum(v),
                 "target": None if t is None else _jnum(t),
                 "gap": None if g is None else _jnum(g), "flag": flag}
                for s, k, a, v, t, g, flag in rows
            ],
            "trends": trends,
            "crosschecks": [{"k": k, "ok": ok} for k, ok in checks],
        }
        return json.dumps(payload, indent=2) + "\n", code
    lines = lines_meta + ["series,k,alpha,exact,target,gap,flag"]
    for s, k, a, v, t, g, flag in rows:
        lines.append(_csv_row((
            s, k,
            None if a is None else _fmt(a),
            None if v is None else _fmt(v),
            None if t is None else _fmt(t),
            None if g is None else _fmt(g),
            flag,
        )))
    for k, ok in checks:
        lines.append(f"# crosscheck:k={k}:{'ok' if ok else 'MISMATCH'}")
    for label, ok in trends.items():
        lines.append(f"# trend:{label}:{'pass' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n", code


def cmd_census(args) -> tuple[str, int]:
    p = _parse_probs(args.p)
    epsilon = args.epsilon
    ks = _parse_ints(args.k)
    if not ks:
        raise DistributionError("--k must list at least one word length")
    rows = []
    any_empty = False
    for k in ks:
        census = typical_set_census(p, epsilon, k, max_types=args.max_types)
        if census.is_empty:
            any_empty = True
            rows.append((k, 0, 0, None, None, "empty"))
        else:
            rows.append((
                k, len(census.types), census.cardinality,
                census.log_cardinality / k, census.prob_mass, "",
            ))
    meta = [f"# census p={args.p} epsilon={_fmt(epsilon)}"]
    if any_empty:
        first = smallest_nonempty_k(p, epsilon, max_types=args.max_types)
        meta.append(
            "# smallest nonempty k: " + ("none <= 1000" if first is None else str(first))
        )
    if args.format == "json":
        payload = {
            "rows": [
                {"k": k, "num_types": nt, "cardinality": card,
                 "size_rate": None if rate is None else _jnum(rate),
                 "prob_mass": None if mass is None else _jnum(mass), "flag": flag}
                for k, nt, card, rate, mass, flag in rows
            ],
        }
        if any_empty:
            payload["smallest_nonempty_k"] = smallest_nonempty_k(
                p, epsilon, max_types=args.max_types
            )
        return json.dumps(payload, indent=2) + "\n", 0
    lines = meta + ["k,num_types,cardinality,size_rate,prob_mass,flag"]
    for k, nt, card, rate, mass, flag in rows:
        lines.append(_csv_row((
            k, nt, card,
            None if rate is None else _fmt(rate),
            None if mass is None else _fmt(mass),
            flag,
        )))
    return "\n".join(lines) + "\n", 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="guessctl",
        description="Guesswork asymptotics of i.i.d., conditioned, and "
        "uniform-on-typical-set word sources, with exact finite-k oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, p=True, eps_required=True):
        if p:
            sp.add_argument("--p", required=True,
                            help="comma-separated letter probabilities, e.g. 0.8,0.2")
        sp.add_argument("--epsilon", type=float, required=eps_required,
                        help="typical-set half width (nats)")
        sp.add_argument("--format", choices=("csv", "json"), default=None)
        sp.add_argument("--out", default=None, help="write output to this path")
        sp.add_argument("--max-types", type=int, default=10**7, dest="max_types")

    sp = sub.add_parser("analyze", help="exponent report for all three sources")
    common(sp)
    sp.set_defaults(func=cmd_analyze, default_format="json")

    sp = sub.add_parser("fig1", help="growth-rate gap curves over a p0 grid")
    common(sp, p=False)
    sp.add_argument("--p0-grid", default=None, dest="p0_grid",
                    help="comma-separated p0 values (default 0.525..0.975 step 0.025)")
    sp.set_defaults(func=cmd_fig1, default_format="csv")

    sp = sub.add_parser("fig2", help="-x - rate(x) curves for the three sources")
    common(sp)
    sp.add_argument("--x-points", type=int, default=400, dest="x_points",
                    help="number of grid points on [0, log m]")
    sp.set_defaults(func=cmd_fig2, default_format="csv")

    sp = sub.add_parser("exact-compare",
                        help="finite-k oracle values vs asymptotic targets")
    common(sp, eps_required=False)
    sp.add_argument("--kind", choices=_KIND_NAMES, default="conditioned")
    sp.add_argument("--k", required=True, help="comma-separated word lengths")
    sp.add_argument("--alpha", default=None,
                    help='comma-separated moment orders; use --alpha="-0.5,1" '
                    "for negative values (default -0.5,0.5,1,2)")
    sp.add_argument("--max-words", type=int, default=0, dest="max_words",
                    help="if > 0, cross-check ks with m^k <= this against the "
                    "naive word-enumeration oracle")
    sp.set_defaults(func=cmd_exact_compare, default_format="csv")

    sp = sub.add_parser("census", help="typical-set inventory at given lengths")
    common(sp)
    sp.add_argument("--k", required=True, help="comma-separated word lengths")
    sp.set_defaults(func=cmd_census, default_format="csv")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        text, code = args.func(args)
    except (TypeSpaceTooLargeError, WordSpaceTooLargeError) as exc:
        print(f"guessctl: resource guard: {exc}", file=sys.stderr)
        return 2
    except EpsilonInadmissibleError as exc:
        lo, hi = exc.interval
        print(
            f"guessctl: error: epsilon inadmissible; admissible interval "
            f"({_fmt(lo)}, {_fmt(hi)})",
            file=sys.stderr,
        )
        return 1
    except (GuessworkError, ValueError) as exc:
        print(f"guessctl: error: {exc}", file=sys.stderr)
        return 1
    _emit(args, text)
    return code


if __name__ == "__main__":
    sys.exit(main())
