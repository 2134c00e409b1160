"""Command-line interface: ``qregular <command> ...``.

Exit codes: 0 ok, 1 usage or input error, 2 inconclusive analysis,
3 theorem-hypothesis violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .asymptotics import (
    POLICIES,
    AsymptoticExpansion,
    InconclusiveJSRError,
    NonConvergentError,
    TheoremHypothesisError,
    expansion,
    fourier_coefficients,
    sample_fluctuations,
    smoothing_analysis,
)
from .core import (
    LinearRepresentation,
    RepresentationError,
    evaluate,
    evaluate_prefix,
    load_representation,
    representation_to_dict,
)
from .dandc import DandCProblem, _log2_symbolic, build_h_rep, classify, cross_check, d_values
from .rational import format_rational, parse_rational
from .spectral import DEFAULT_PRODUCT_LENGTH, Eigenvalue, NumericalAmbiguityError
from .summation import iterated_summatory_rep, naive_iterated_summatory_rep

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_HYPOTHESIS = 0, 1, 2, 3


@dataclass
class CommandResult:
    status: str  # "ok" or "error"
    payload: Any = None
    diagnostics: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK
    text: str | None = None  # preformatted stdout, when not JSON

    @classmethod
    def error(cls, message: str, code: int = EXIT_USAGE, payload=None) -> "CommandResult":
        return cls("error", payload, [message], code)


# -- JSON rendering ------------------------------------------------------------

def _decimal(x) -> str:
    return f"{float(x):.12g}"


def rational_json(x: Fraction) -> dict:
    return {"exact": format_rational(x), "decimal": _decimal(x)}


def eigenvalue_json(ev: Eigenvalue) -> dict:
    z = complex(ev.value)
    out = {"exact": format_rational(ev.value) if ev.exact else None,
           "re": f"{z.real:.12g}", "im": f"{z.imag:.12g}",
           "modulus": f"{ev.modulus:.12g}"}
    if not ev.exact:
        out["minimal_polynomial"] = [format_rational(c) for c in ev.minpoly]
    return out


def _complex_json(z) -> dict:
    z = complex(z)
    return {"re": f"{z.real:.12g}", "im": f"{z.imag:.12g}"}


def expansion_json(exp: AsymptoticExpansion) -> dict:
    jsr, err = exp.jsr, exp.error
    provenance = ("R = joint spectral radius (simple growth holds)" if not err.epsilon_flag
                  else f"R above the joint spectral radius by policy '{err.policy}'")
    return {
        "q": exp.q,
        "jsr": {
            "lower": f"{jsr.lower:.12g}", "upper": f"{jsr.upper:.12g}", "exact": jsr.exact,
            "value": format_rational(jsr.exact_value) if jsr.exact_value is not None else None,
            "witness": jsr.witness,
        },
        "simple_growth": {"status": exp.growth.simple_growth, "reason": exp.growth.reason},
        "eigenstructure": [
            {"eigenvalue": eigenvalue_json(e.eigenvalue),
             "algebraic_multiplicity": e.algebraic_multiplicity,
             "jordan_index": e.jordan_index}
            for e in exp.spectrum
        ],
        "R": {
            "value": f"{err.R:.12g}",
            "exact": format_rational(err.R_exact) if err.R_exact is not None else None,
            "policy": err.policy, "epsilon_flag": err.epsilon_flag, "provenance": provenance,
        },
        "terms": [
            {"eigenvalue": eigenvalue_json(t.eigenvalue),
             "exponent": {"symbolic": t.exponent_symbolic, **_complex_json(t.exponent)},
             "log_power": t.log_power}
            for t in exp.terms
        ],
        "error": {
            "exponent": f"{err.exponent:.12g}",
            "base_exponent": f"{err.base_exponent:.12g}",
            "rho": format_rational(err.rho_exact) if err.rho_exact is not None
            else f"{err.rho:.12g}",
            "log_power": err.log_power,
            "kappa_convention": "empty maximum taken as 0" if err.kappa_empty else None,
            "epsilon_flag": err.epsilon_flag,
            "omitted": err.omitted,
        },
    }


def classification_json(p: DandCProblem) -> dict:
    c = classify(p)
    d = d_values(p)
    return {
        "problem": {
            "alpha": format_rational(p.alpha), "beta": format_rational(p.beta),
            "toll": [format_rational(x) for x in p.toll], "x1": format_rational(p.x1),
            "k": p.k,
        },
        "case": c.case_tag,
        "d": {"d0": format_rational(d.d0), "d1": format_rational(d.d1)},
        # overrides of g(0), g(1) change the reported values only; the
        # representation and the case analysis use the polynomial's own values
        "d_polynomial": {"d0": format_rational(c.d.d0), "d1": format_rational(c.d.d1)},
        "main_terms": [
            {"base": rational_json(t.base),
             "exponent": {"symbolic": t.exponent_symbolic(), "decimal": _decimal(t.exponent)},
             "log_power": t.log_power}
            for t in c.main_terms
        ],
        "error": None if c.error.omitted else {
            "base": rational_json(c.error.base),
            "exponent": {"symbolic": _log2_symbolic(c.error.base), "decimal": _decimal(c.error.exponent)},
            "log_power": c.error.log_power,
            "epsilon_flag": c.error.epsilon,
        },
        "E": c.E,
    }


# -- commands -------------------------------------------------------------------

def _load(path: str) -> LinearRepresentation:
    return load_representation(path)


def _parse_index(text: str) -> range | int:
    if ":" in text:
        start, stop = text.split(":", 1)
        return range(int(start or 0), int(stop))
    n = int(text)
    if n < 0:
        raise ValueError("index must be non-negative")
    return n


def cmd_eval(path: str, index: str, as_json: bool = False) -> CommandResult:
    rep = _load(path)
    target = _parse_index(index)
    if isinstance(target, int):
        values = [evaluate(rep, target)]
    elif target.start == 0:
        values = evaluate_prefix(rep, target.stop)
    else:
        values = [evaluate(rep, n) for n in target]
    rendered = [format_rational(v) for v in values]
    text = json.dumps(rendered) if as_json else "\n".join(rendered)
    return CommandResult("ok", rendered, text=text)


def cmd_analyze(path: str, product_length: int = DEFAULT_PRODUCT_LENGTH,
                policy: str = "geometric") -> CommandResult:
    rep = _load(path)
    exp = expansion(rep, product_length, policy)
    payload = expansion_json(exp)
    diagnostics = [] if exp.terms else ["no main terms: the expansion is an error term only"]
    return CommandResult("ok", payload, diagnostics)


def cmd_dandc(alpha: str, beta: str, toll: str, x1: str, g0: str | None = None,
              g1: str | None = None, emit_rep: str | None = None,
              verify: int | None = None) -> CommandResult:
    p = DandCProblem(
        parse_rational(alpha), parse_rational(beta),
        tuple(parse_rational(c) for c in toll.split(",")), parse_rational(x1),
        parse_rational(g0) if g0 is not None else None,
        parse_rational(g1) if g1 is not None else None,
    )
    payload = classification_json(p)
    rep = build_h_rep(p)
    if emit_rep:
        with open(emit_rep, "w") as fh:
            json.dump(representation_to_dict(rep), fh, indent=2)
            fh.write("\n")
    diagnostics = []
    if verify is not None:
        report = cross_check(p, verify)
        payload["cross_check"] = {"agree": report.agree, "oracle_checked": verify,
                                  "diffs": report.diffs, "notes": report.notes}
        if not report.agree:
            diagnostics.extend(report.diffs)
    return CommandResult("ok", payload, diagnostics)


def cmd_fluctuation(path: str, grid: int = 64, scales: str = "8,12,16,20,24",
                    fourier: int = 5, product_length: int = DEFAULT_PRODUCT_LENGTH,
                    policy: str = "geometric", term: str | None = None) -> CommandResult:
    """Sample every fluctuation; the CSV holds one term (default: the first listed)."""
    rep = _load(path)
    exp = expansion(rep, product_length, policy)
    if not exp.terms:
        return CommandResult.error("no terms to sample: the expansion is an error term only",
                                   EXIT_HYPOTHESIS, {"analysis": expansion_json(exp)})
    m_list = [int(s) for s in scales.split(",")]
    selected = _select_term(exp, term)
    estimates = sample_fluctuations(rep, exp, grid, m_list)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["u", "m", "value_re", "value_im"])
    for u, m, value in estimates[selected.key].samples:
        writer.writerow([f"{u:.12g}", m, f"{value.real:.12g}", f"{value.imag:.12g}"])
    fourier_out = []
    diagnostics = []
    for t in exp.terms:
        est = estimates[t.key]
        coefficients = fourier_coefficients(est, fourier) if grid >= 4 * fourier + 4 else []
        fourier_out.append({
            "eigenvalue": eigenvalue_json(est.eigenvalue), "log_power": est.log_power,
            "coefficients": [{"index": j, **_complex_json(c), "gap": f"{gap:.3g}"}
                             for j, c, gap in coefficients],
            "max_convergence_gap": f"{max(est.convergence_gaps()):.3g}",
            "warnings": est.warnings,
        })
        diagnostics.extend(est.warnings)
    payload = {"analysis": expansion_json(exp), "grid": grid, "scales": m_list,
               "csv_term": {"eigenvalue": eigenvalue_json(selected.eigenvalue),
                            "log_power": selected.log_power},
               "fourier": fourier_out}
    return CommandResult("ok", payload, diagnostics, text=buf.getvalue())


def _select_term(exp: AsymptoticExpansion, text: str | None):
    if text is None:
        return exp.terms[0]
    lam_text, _, k_text = text.rpartition(",")
    k = int(k_text)
    for t in exp.terms:
        if t.log_power == k and t.eigenvalue.exact and format_rational(t.eigenvalue.value) == \
                format_rational(parse_rational(lam_text)):
            return t
    for t in exp.terms:
        if t.log_power == k and not t.eigenvalue.exact and t.eigenvalue.render() == lam_text:
            return t
    raise ValueError(f"no term ({text}) in the expansion")


def cmd_smooth_order(path: str, product_length: int = DEFAULT_PRODUCT_LENGTH) -> CommandResult:
    rep = _load(path)
    result = smoothing_analysis(rep, product_length=product_length)
    k = result.order
    witness = (f"q^{k - 1}*r = {result.scaled_radius:.12g} > R = {result.expansion.error.R:.12g} "
               f"(joint spectral radius {result.jsr:.12g})")
    payload = {"order": k, "spectral_radius_C": f"{result.spectral_radius_C:.12g}",
               "witness": witness}
    return CommandResult("ok", payload, text=f"{k}\n{witness}")


def cmd_sum_rep(path: str, order: int = 1, naive: bool = False,
                output: str | None = None) -> CommandResult:
    rep = _load(path)
    if naive:
        derived = naive_iterated_summatory_rep(rep, order)
    else:
        derived = iterated_summatory_rep(rep, order).rep
    data = representation_to_dict(derived)
    text = json.dumps(data, indent=2)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    return CommandResult("ok", data, text=text)


# -- argument parsing ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qregular", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate a representation at n or on a range a:b")
    p.add_argument("rep")
    p.add_argument("index")
    p.add_argument("--json", action="store_true", help="print a JSON array")

    p = sub.add_parser("analyze", help="asymptotic expansion of the summatory function")
    p.add_argument("rep")
    p.add_argument("--product-length", type=int, default=DEFAULT_PRODUCT_LENGTH)
    p.add_argument("--epsilon", choices=POLICIES, default="geometric",
                   help="policy for R when simple growth is not established")

    p = sub.add_parser("dandc", help="classify a divide-and-conquer recurrence")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--toll", required=True, help="c0,c1,...,ck")
    p.add_argument("--x1", required=True)
    p.add_argument("--g0")
    p.add_argument("--g1")
    p.add_argument("--emit-rep", metavar="PATH", help="write the h representation here")
    p.add_argument("--verify", type=int, metavar="N",
                   help="cross-check against the generic engine and oracle for n < N")

    p = sub.add_parser("fluctuation", help="empirical periodic fluctuations")
    p.add_argument("rep")
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--scales", default="8,12,16,20,24")
    p.add_argument("--fourier", type=int, default=5)
    p.add_argument("--product-length", type=int, default=DEFAULT_PRODUCT_LENGTH)
    p.add_argument("--epsilon", choices=POLICIES, default="geometric")
    p.add_argument("--term", metavar="LAMBDA,K",
                   help="fluctuation written to CSV (default: the first term)")
    p.add_argument("--csv", metavar="PATH", help="write CSV here instead of stdout")
    p.add_argument("--json", metavar="PATH", help="write Fourier JSON here instead of stderr")

    p = sub.add_parser("smooth-order", help="minimal number of summations for main terms")
    p.add_argument("rep")
    p.add_argument("--product-length", type=int, default=DEFAULT_PRODUCT_LENGTH)

    p = sub.add_parser("sum-rep", help="emit a summatory-function representation")
    p.add_argument("rep")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--naive", action="store_true",
                   help="apply the one-step construction repeatedly (dimension 2^k D)")
    p.add_argument("-o", "--output")
    return parser


_VALUE_FLAGS = {"--alpha", "--beta", "--toll", "--x1", "--g0", "--g1"}


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--toll -1,1`` into ``--toll=-1,1`` so argparse does not read a flag."""
    out, i = [], 0
    while i < len(argv):
        token = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if token in _VALUE_FLAGS and len(nxt) > 1 and nxt[0] in "-\u2212" and \
                (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{token}={nxt}")
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def _parse_args(argv: list[str] | None) -> argparse.Namespace:
    argv = sys.argv[1:] if argv is None else argv
    return build_parser().parse_args(_attach_negative_values(list(argv)))


def run(argv: list[str] | None = None) -> CommandResult:
    args = _parse_args(argv)
    try:
        if args.command == "eval":
            return cmd_eval(args.rep, args.index, args.json)
        if args.command == "analyze":
            return cmd_analyze(args.rep, args.product_length, args.epsilon)
        if args.command == "dandc":
            return cmd_dandc(args.alpha, args.beta, args.toll, args.x1, args.g0, args.g1,
                             args.emit_rep, args.verify)
        if args.command == "fluctuation":
            return cmd_fluctuation(args.rep, args.grid, args.scales, args.fourier,
                                   args.product_length, args.epsilon, args.term)
        if args.command == "smooth-order":
            return cmd_smooth_order(args.rep, args.product_length)
        if args.command == "sum-rep":
            return cmd_sum_rep(args.rep, args.order, args.naive, args.output)
    except (InconclusiveJSRError, NonConvergentError, NumericalAmbiguityError) as exc:
        return CommandResult.error(str(exc), EXIT_INCONCLUSIVE)
    except TheoremHypothesisError as exc:
        return CommandResult.error(str(exc), EXIT_HYPOTHESIS)
    except (OSError, ValueError, RepresentationError, json.JSONDecodeError) as exc:
        return CommandResult.error(str(exc), EXIT_USAGE)
    raise AssertionError(f"unhandled command {args.command}")


def main(argv: list[str] | None = None) -> int:
    args_list = sys.argv[1:] if argv is None else argv
    result = run(args_list)
    if result.status == "error":
        for message in result.diagnostics:
            print(f"error: {message}", file=sys.stderr)
        return result.exit_code
    command = args_list[0] if args_list else ""
    if command == "fluctuation":
        ns = _parse_args(args_list)
        if ns.csv:
            with open(ns.csv, "w") as fh:
                fh.write(result.text)
        else:
            sys.stdout.write(result.text)
        document = json.dumps(result.payload, indent=2)
        if ns.json:
            with open(ns.json, "w") as fh:
                fh.write(document + "\n")
        else:
            print(document, file=sys.stderr)
    elif result.text is not None:
        print(result.text)
    else:
        print(json.dumps(result.payload, indent=2))
    for message in result.diagnostics:
        print(f"warning: {message}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
