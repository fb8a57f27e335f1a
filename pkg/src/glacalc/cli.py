"""Command-line front end.

Exit codes: 0 pass, 1 mathematical violation, 2 input error, 3 internal
cross-check disagreement.  Output is deterministic for fixed inputs and
``--seed``; no timing is written unless ``--timing`` is given (to stderr).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from typing import Any, Dict, List, Optional, Tuple

from .algebroid import FrameAlgebra, bracket, validate_axioms
from .connection import (connection_forms, curvature, torsion, verify_bianchi_identities,
                         verify_cartan_identities, verify_torsion_paths)
from .errors import CrossCheckError, GlacalcError
from .forms import (INTRINSIC, Form, component_matrix, d, format_form, interior, lie_derivative,
                    maurer_cartan_check, parse_form, parse_section, wedge, coframe, coordinate_form)
from .integrability import (FrobeniusCertificate, annihilator, eds_closure_failures, frobenius_certificate,
                            is_involutive)
from .io import AlgebroidDeclaration, algebroid_to_dict, ids_algebroid_path, load_algebroid, load_connection, load_ids
from .linalg import rank
from .report import Report
from .sampling import random_connection, random_form, random_section

EXIT_PASS, EXIT_VIOLATION, EXIT_INPUT, EXIT_CROSSCHECK = 0, 1, 2, 3


class Outcome:
    """Everything a command prints: findings plus named results."""

    def __init__(self, command: str):
        self.command = command
        self.report = Report(command)
        self.results: Dict[str, Any] = {}
        self.exit_code: Optional[int] = None

    def verdict(self) -> str:
        return "pass" if self.report.passed else "fail"

    def code(self) -> int:
        if self.exit_code is not None:
            return self.exit_code
        return EXIT_PASS if self.report.passed else EXIT_VIOLATION

    def to_json(self) -> str:
        out = {"command": self.command, "verdict": self.verdict(),
               "results": self.results, "findings": [f.to_dict() for f in self.report.findings]}
        return json.dumps(out, indent=2)

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.verdict()}"]
        for key, value in self.results.items():
            if isinstance(value, list) and value:
                lines.append(f"{key}:")
                lines.extend(f"  {_plain(v)}" for v in value)
            elif isinstance(value, dict) and value:
                lines.append(f"{key}:")
                lines.extend(f"  {k}: {_plain(v)}" for k, v in value.items())
            elif isinstance(value, (list, dict)):
                lines.append(f"{key}: {json.dumps(value)}")
            else:
                lines.append(f"{key}: {value}")
        lines.extend(str(f) for f in self.report.findings)
        return "\n".join(lines)


def _plain(v) -> str:
    return v if isinstance(v, str) else json.dumps(v)


def _algebra(path: str) -> AlgebroidDeclaration:
    return load_algebroid(path)


def _form(text: str, A: FrameAlgebra) -> Form:
    return parse_form(text, A)


def _oracle(out: Outcome, name: str, fast: Form, slow: Form):
    if fast != slow:
        raise CrossCheckError(f"{name}: component and intrinsic paths disagree: {fast} vs {slow}")
    out.report.add(f"{name}_oracle", (), passed=True, detail="component and intrinsic paths agree")


# -- commands ---------------------------------------------------------------------------------

def cmd_validate(args) -> Outcome:
    out = Outcome("validate")
    decl = _algebra(args.algebroid)
    A = decl.algebra
    out.results["rank"] = A.rank
    out.results["base"] = list(A.coords.names)
    out.report.extend(validate_axioms(A))
    out.report.extend(maurer_cartan_check(A))
    if decl.spec is not None:
        pb = decl.pullback
        for f in validate_axioms(pb).findings:
            f.check = "pullback_" + f.check
            out.report.findings.append(f)
    return out


def cmd_d(args) -> Outcome:
    out = Outcome("d")
    A = _algebra(args.algebroid).algebra
    w = _form(args.form, A)
    res = d(w)
    out.results["degree"] = res.degree
    out.results["result"] = format_form(res)
    if args.oracle:
        _oracle(out, "d", res, d(w, method=INTRINSIC))
    return out


def cmd_wedge(args) -> Outcome:
    out = Outcome("wedge")
    A = _algebra(args.algebroid).algebra
    w, th = _form(args.form1, A), _form(args.form2, A)
    res = wedge(w, th)
    out.results["degree"] = res.degree
    out.results["result"] = format_form(res)
    if args.oracle:
        _oracle(out, "wedge", res, wedge(w, th, method=INTRINSIC))
    return out


def cmd_interior(args) -> Outcome:
    out = Outcome("interior")
    A = _algebra(args.algebroid).algebra
    z, w = parse_section(args.section, A), _form(args.form, A)
    res = interior(z, w)
    out.results["degree"] = res.degree
    out.results["result"] = format_form(res)
    if args.oracle:
        _oracle(out, "interior", res, interior(z, w, method=INTRINSIC))
    return out


def cmd_lie(args) -> Outcome:
    out = Outcome("lie")
    A = _algebra(args.algebroid).algebra
    z, w = parse_section(args.section, A), _form(args.form, A)
    res = lie_derivative(z, w)
    out.results["degree"] = res.degree
    out.results["result"] = format_form(res)
    if args.oracle:
        _oracle(out, "lie", res, lie_derivative(z, w, method=INTRINSIC))
        magic = d(interior(z, w)) + interior(z, d(w))
        out.report.add("cartan_formula", (), res - magic)
    return out


def cmd_pullback(args) -> Outcome:
    out = Outcome("pullback-algebroid")
    decl = _algebra(args.algebroid)
    pb = decl.pullback
    out.results["pullback"] = algebroid_to_dict(pb)
    out.report.extend(validate_axioms(pb))
    return out


def _add_trials(out: Outcome, check: str, indices, residuals: List[Form], trials: int):
    bad = next((r for r in residuals if not r.is_zero()), None)
    nbad = sum(1 for r in residuals if not r.is_zero())
    detail = f"{trials} trials" if nbad == 0 else f"{nbad}/{trials} trials fail"
    out.report.add(check, indices, bad, passed=bad is None, detail=detail)


def _identities(out: Outcome, A: FrameAlgebra, rng: random.Random, trials: int, max_degree: int, oracle: bool):
    p = A.rank
    for a in range(p):
        out.report.add("d_squared_coframe", (a + 1,), d(d(coframe(A, a))))
    for i in range(A.dimension):
        out.report.add("d_squared_coordinate", (i + 1,), d(d(coordinate_form(A, i))))
    for q in range(p + 1):
        forms = [random_form(rng, A, q, max_degree) for _ in range(trials)]
        _add_trials(out, "d_squared", (q,), [d(d(w)) for w in forms], trials)
        if oracle and q < p:
            _add_trials(out, "d_oracle", (q,), [d(w) - d(w, method=INTRINSIC) for w in forms], trials)
    names = ["cartan_formula", "commutator", "lie_leibniz", "interior_leibniz", "d_leibniz", "lie_commutes_d"]
    res: Dict[str, List[Form]] = {n: [] for n in names}
    for _ in range(trials):
        q = rng.randint(0, p)
        r = rng.randint(0, p - q)
        w, th = random_form(rng, A, q, max_degree), random_form(rng, A, r, max_degree)
        z, v = random_section(rng, A, max_degree), random_section(rng, A, max_degree)
        sign = -1 if q % 2 else 1
        Lw = lie_derivative(z, w)
        res["cartan_formula"].append(Lw - d(interior(z, w)) - interior(z, d(w)))
        res["commutator"].append(lie_derivative(v, interior(z, w)) - interior(z, lie_derivative(v, w))
                                 - interior(bracket(v, z), w))
        res["lie_leibniz"].append(lie_derivative(z, wedge(w, th)) - wedge(Lw, th) - wedge(w, lie_derivative(z, th)))
        res["interior_leibniz"].append(interior(z, wedge(w, th)) - wedge(interior(z, w), th)
                                       - wedge(w, interior(z, th)) * sign)
        res["d_leibniz"].append(d(wedge(w, th)) - wedge(d(w), th) - wedge(w, d(th)) * sign)
        res["lie_commutes_d"].append(lie_derivative(z, d(w)) - d(Lw))
    for n in names:
        _add_trials(out, n, (), res[n], trials)


def cmd_identities(args) -> Outcome:
    out = Outcome("identities")
    decl = _algebra(args.algebroid)
    A = decl.algebra
    rng = random.Random(args.seed)
    out.results["seed"] = args.seed
    out.results["trials"] = args.trials
    # validation failure is reported but the identities still run, so that
    # a broken structure table shows where d^2 stops vanishing
    out.report.extend(validate_axioms(A))
    out.report.extend(maurer_cartan_check(A))
    _identities(out, A, rng, args.trials, args.max_degree, args.oracle)
    if args.connection:
        C = load_connection(args.connection, decl.pullback)
        out.report.extend(verify_torsion_paths(C))
        out.report.extend(verify_cartan_identities(C))
        out.report.extend(verify_bianchi_identities(C))
    elif args.random_connections:
        pb = decl.pullback
        for k in range(args.random_connections):
            C = random_connection(rng, pb, args.max_degree)
            for rep in (verify_torsion_paths(C), verify_cartan_identities(C), verify_bianchi_identities(C)):
                bad = rep.failures
                out.report.add(f"random_connection_{rep.name}", (k + 1,), bad[0].residual if bad else None,
                               passed=not bad)
    return out


def cmd_connection(args) -> Outcome:
    out = Outcome("connection")
    decl = _algebra(args.algebroid)
    A = decl.pullback
    C = load_connection(args.connection, A)
    p = A.rank
    Om = connection_forms(C)
    T = torsion(C)
    R = curvature(C)
    out.results["connection_forms"] = {f"Omega^{a + 1}_{b + 1}": format_form(Om[a][b])
                                       for a in range(p) for b in range(p) if not Om[a][b].is_zero()}
    out.results["torsion"] = {f"T^{c + 1}": format_form(T[c]) for c in range(p) if not T[c].is_zero()}
    out.results["curvature"] = {f"R^{a + 1}_{b + 1}": format_form(R[a][b])
                                for a in range(p) for b in range(p) if not R[a][b].is_zero()}
    out.report.extend(verify_torsion_paths(C))
    out.report.extend(verify_cartan_identities(C))
    out.report.extend(verify_bianchi_identities(C))
    return out


def _load_ids(args):
    if args.ids is None:
        ids_path = args.algebroid
        alg_path = ids_algebroid_path(ids_path)
        if alg_path is None:
            raise GlacalcError(f"{ids_path}: no algebroid given and the file has no 'algebroid' reference")
    else:
        alg_path, ids_path = args.algebroid, args.ids
    decl = _algebra(alg_path)
    return load_ids(ids_path, decl.pullback)


def _integrability(out: Outcome, D) -> Tuple[bool, bool, bool]:
    inv = is_involutive(D)
    cert = frobenius_certificate(D)
    failures = eds_closure_failures(D)
    eds = not failures
    out.results["annihilator"] = [format_form(t) for t in annihilator(D)]
    out.results["involutive"] = bool(inv)
    out.results["frobenius"] = "certificate" if cert else "NOT_INVOLUTIVE"
    out.results["eds_closed"] = eds
    if isinstance(cert, FrobeniusCertificate):
        out.results["certificate"] = cert.lines()
    else:
        out.results["obstruction"] = str(cert)
    if inv.counterexample is not None:
        (a, b), vals = inv.counterexample
        out.results["counterexample"] = {"pair": f"(S_{a + 1}, S_{b + 1})",
                                         "Theta([S_a, S_b])": [str(v) for v in vals]}
    if not (bool(inv) == bool(cert) == eds):
        out.exit_code = EXIT_CROSSCHECK
        out.report.add("verdicts_agree", (), passed=False,
                       detail=f"involutive={bool(inv)} frobenius={bool(cert)} eds={eds}")
    else:
        out.report.add("verdicts_agree", (), passed=True)
    for a, v in failures:
        out.report.add("eds_closure", (a + 1,), v)
    return bool(inv), bool(cert), eds


def cmd_frobenius(args) -> Outcome:
    out = Outcome("frobenius")
    D = _load_ids(args)
    inv, _, _ = _integrability(out, D)
    out.report.add("involutive", (), passed=inv)
    return out


def cmd_eds(args) -> Outcome:
    out = Outcome("eds")
    D = _load_ids(args)
    _, _, eds = _integrability(out, D)
    out.report.add("eds_closed", (), passed=eds)
    return out


def cmd_symplectic(args) -> Outcome:
    out = Outcome("symplectic")
    A = _algebra(args.algebroid).algebra
    w = _form(args.form, A)
    if w.degree != 2:
        raise GlacalcError(f"symplectic check needs a 2-form, got degree {w.degree}")
    r = rank(component_matrix(w))
    out.results["rank"] = r
    out.report.add("closed", (), d(w))
    out.report.add("nondegenerate", (), passed=r == A.rank, detail=f"rank {r} of {A.rank}")
    return out


# -- argument parsing -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--oracle", action="store_true", help="cross-check against the intrinsic path")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    common.add_argument("--trials", type=int, default=25, help="randomized trials per check (default 25)")
    common.add_argument("--max-degree", type=int, default=2, help="degree bound for random coefficients")
    common.add_argument("--timing", action="store_true", help="print elapsed time to stderr")

    parser = argparse.ArgumentParser(prog="glacalc", description="Exact exterior calculus on Lie algebroids.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, *positional):
        p = sub.add_parser(name, parents=[common], help=help_)
        for arg, kw in positional:
            p.add_argument(arg, **kw)
        p.set_defaults(fn=fn)
        return p

    alg = ("algebroid", {"help": "algebroid declaration (JSON)"})
    form = ("form", {"help": "form literal, e.g. 'x * e^{1,2}'"})
    sec = ("section", {"help": "section literal, e.g. 'x * e_{1} + e_{2}'"})
    add("validate", cmd_validate, "check the algebroid axioms and Maurer-Cartan equations", alg)
    add("d", cmd_d, "exterior differential of a form", alg, form)
    add("wedge", cmd_wedge, "wedge product of two forms", alg, ("form1", {}), ("form2", {}))
    add("lie", cmd_lie, "Lie derivative along a section", alg, sec, form)
    add("interior", cmd_interior, "interior product with a section", alg, sec, form)
    add("pullback-algebroid", cmd_pullback, "pull-back Lie algebroid of a generalized declaration", alg)
    p = add("identities", cmd_identities, "d^2 = 0, Cartan calculus and connection identities", alg)
    p.add_argument("connection", nargs="?", help="connection declaration (JSON)")
    p.add_argument("--random-connections", type=int, default=0, metavar="N",
                   help="also check N seeded random connections")
    add("connection", cmd_connection, "connection forms, torsion, curvature and their identities",
        alg, ("connection", {"help": "connection declaration (JSON)"}))
    for name, fn, help_ in [("frobenius", cmd_frobenius, "involutivity with a Frobenius certificate"),
                            ("eds", cmd_eds, "differential closure of the annihilator ideal")]:
        p = add(name, fn, help_, ("algebroid", {"help": "algebroid declaration, or an IDS file that references one"}))
        p.add_argument("ids", nargs="?", help="IDS declaration (JSON)")
    add("symplectic", cmd_symplectic, "closed and nondegenerate 2-form check", alg, form)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        out = args.fn(args)
        code = out.code()
        text = out.to_json() if args.json else out.to_text()
    except CrossCheckError as exc:
        code, text = EXIT_CROSSCHECK, _error(args, "crosscheck", str(exc))
    except GlacalcError as exc:
        code, text = EXIT_INPUT, _error(args, "error", str(exc))
    print(text)
    if args.timing:
        print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


def _error(args, verdict: str, message: str) -> str:
    if args.json:
        return json.dumps({"command": args.command, "verdict": verdict, "error": message}, indent=2)
    return f"{args.command}: {verdict}: {message}"


if __name__ == "__main__":
    sys.exit(main())
