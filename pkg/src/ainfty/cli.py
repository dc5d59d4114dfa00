"""Command line driver.

    ainfty validate FILE
    ainfty cohomology FILE
    ainfty model --max-arity N FILE
    ainfty massey X1 .. Xn FILE
    ainfty oracle X1 .. Xn --bound B FILE
    ainfty isotopy --seed-a S1 --seed-b S2 --max-arity N FILE
    ainfty curvature X1 .. Xn FILE
    ainfty theorem-check X1 .. Xn FILE

Classes are named by the labels printed by ``cohomology`` (``h<degree>_<index>``).
Every command accepts ``--json`` for a machine-readable report and
``--field`` to override the document's field.  Exit status: 0 when every
checked identity holds, 1 when one fails, 2 for bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import linalg
from .ainf import check_morphism, check_stasheff, find_isotopy, hochschild_differential, universal_massey_class
from .dga import cohomology, induced_product, transfer_residuals, validate
from .io import InputError, parse_algebra
from .massey import (
    HypothesisError,
    MasseyError,
    OracleBoundError,
    bootstrap_defining_system,
    brute_force_massey,
    c_of_D,
    massey_membership_theorem_check,
    matrix_curvature,
    triple_massey,
    validate_defining_system,
)
from .transfer import canonical_minimal_model, vary_homotopy


class Report:
    def __init__(self, command):
        self.data = {"command": command, "checks": []}
        self.lines = []

    def check(self, identity, passed, residual="0"):
        self.data["checks"].append({"identity": identity, "passed": bool(passed), "residual": "0" if passed else residual})
        self.lines.append(f"[{'pass' if passed else 'FAIL'}] {identity}" + ("" if passed else f": {residual}"))
        return passed

    def say(self, line=""):
        self.lines.append(line)

    def __setitem__(self, key, value):
        self.data[key] = value

    @property
    def ok(self):
        return all(c["passed"] for c in self.data["checks"])


def _classes(T, labels):
    H = T.homology
    out = []
    for lab in labels:
        try:
            out.append({H.index(lab): 1})
        except KeyError:
            known = ", ".join(H.names) or "none"
            raise InputError(f"unknown class name {lab!r} (known: {known})") from None
    return out


def _cmd_validate(A, args, rep):
    issues = validate(A)
    rep["violations"] = [str(v) for v in issues]
    rep.check("dg algebra axioms", not issues, "; ".join(map(str, issues[:10])))
    rep.say(f"dimension {A.dim} over {A.field!r}")


def _cmd_cohomology(A, args, rep):
    T = cohomology(A)
    H = T.homology
    betti = T.betti()
    rep["betti"] = {str(k): v for k, v in betti.items()}
    rep["basis"] = [
        {"label": H.names[i], "degree": H.degrees[i], "representative": A.space.format(T.psi.col(i))} for i in range(H.dim)
    ]
    rep.say("Betti numbers: " + (", ".join(f"H^{k} = {v}" for k, v in betti.items()) or "all zero"))
    for b in rep.data["basis"]:
        rep.say(f"  {b['label']}  (degree {b['degree']})  [{b['representative']}]")
    for name, ok in transfer_residuals(T).items():
        rep.check(name, ok, "nonzero")


def _mm_dump(H, m):
    return {", ".join(H.names[j] for j in w): H.format(v) for w, v in sorted(m.values.items())}


def _cmd_model(A, args, rep):
    N = args.max_arity
    C = canonical_minimal_model(A, N=N)
    H = C.model.space
    rep["operations"] = {str(n): _mm_dump(H, C.model.ops[n]) for n in range(2, N + 1)}
    for n in range(2, N + 1):
        rep.say(f"mu_{n}: {len(C.model.ops[n].values)} nonzero values")
        if args.verbose:
            for w, v in rep.data["operations"][str(n)].items():
                rep.say(f"  mu_{n}({w}) = {v}")
    rep.check(f"d Phi_n = 0 for n <= {N}", True)
    s = check_stasheff(C.model)
    rep.check(f"Stasheff identities through arity {N}", not s, "; ".join(map(str, s[:5])))
    m = check_morphism(C.connecting)
    rep.check(f"connecting morphism identities through arity {N}", not m, "; ".join(map(str, m[:5])))
    rep.check("mu_2 = induced product", C.model.ops[2] == induced_product(C.transfer))


def _cmd_massey(A, args, rep):
    T = cohomology(A)
    H = T.homology
    xs = _classes(T, args.classes)
    n = len(xs)
    if n < 2:
        raise InputError("need at least two classes")
    F = A.field
    if n == 2:
        mu2 = induced_product(T)
        x1 = H.vector_degree(xs[0])
        val = linalg.scale(F, mu2(F, *xs), F.sign(x1))
        rep["set"] = {"representative": H.format(val), "indeterminacy": []}
        rep.say("<x1, x2> = {" + H.format(val) + "}")
        return
    if n == 3:
        s = triple_massey(A, T, *xs)
        rep["set"] = None if s.is_empty else {
            "representative": H.format(s.representative),
            "indeterminacy": [H.format(b) for b in s.indeterminacy],
            "quotient_nonzero": s.quotient_nonzero,
        }
        rep.say("<x, y, z> = " + s.describe())
        if not s.is_empty:
            rep.say(f"class modulo indeterminacy is {'nonzero' if s.quotient_nonzero else 'zero'}")
        return
    C = canonical_minimal_model(A, T, n)
    try:
        D = bootstrap_defining_system(C, xs)
    except HypothesisError as e:
        rep.say(f"shorter canonical operations do not vanish: {e}; set not computed")
        rep["set"] = None
        return
    issues = validate_defining_system(D, T)
    rep.check("bootstrap defining system", not issues, "; ".join(map(str, issues)))
    cls = T.pi.apply(F, c_of_D(D))
    rep["element"] = H.format(cls)
    rep.say(f"one element: {H.format(cls)} (set not enumerated; use 'oracle' over a finite field)")


def _cmd_oracle(A, args, rep):
    T = cohomology(A)
    H = T.homology
    xs = _classes(T, args.classes)
    try:
        res = brute_force_massey(A, T, xs, args.bound)
    except OracleBoundError as e:
        raise InputError(str(e)) from None
    except MasseyError as e:
        raise InputError(str(e)) from None
    classes = sorted(H.format(dict(c)) for c in res.classes)
    rep["classes"] = classes
    rep["coordinates"] = res.coordinates
    rep["assignments"] = res.assignments
    rep["defining_systems"] = res.systems
    rep.say(f"{res.systems} defining systems, {res.assignments} assignments enumerated")
    rep.say("set = {" + ", ".join(classes) + "}" if classes else "set = empty (no defining system)")


def _cmd_isotopy(A, args, rep):
    N = args.max_arity
    F = A.field
    T = cohomology(A)
    C1 = canonical_minimal_model(A, vary_homotopy(T, args.seed_a), N)
    C2 = canonical_minimal_model(A, vary_homotopy(T, args.seed_b), N)
    rep.check("mu_2 agree", C1.model.ops[2] == C2.model.ops[2], "binary products differ")
    res = find_isotopy(C1.model, C2.model, N)
    if not rep.check(f"isotopy found through arity {N}", res is not None, "no solution"):
        return
    tau = res.morphism
    d = check_morphism(tau)
    rep.check("isotopy identities", not d, "; ".join(map(str, d[:5])))
    rep["freedom"] = res.freedom
    if N >= 3 and 2 in tau.comps:
        mu2 = C1.model.ops[2]
        dt = hochschild_differential(F, mu2, tau.comps[2])
        diff = {}
        for w in set(C1.model.ops[3].values) | set(C2.model.ops[3].values):
            v = linalg.sub(F, C1.model.ops[3].on_word(w), C2.model.ops[3].on_word(w))
            if v:
                diff[w] = v
        rep.check("delta tau_2 = mu'_3 - mu''_3", dt.values == diff, "mismatch")
        eq, _ = universal_massey_class(F, mu2, C1.model.ops[3], C2.model.ops[3])
        rep.check("mu_3 classes agree in Hochschild cohomology", eq, "not cohomologous")
        H = C1.model.space
        rep["tau2"] = _mm_dump(H, tau.comps[2])
        rep.say(f"tau_2 has {len(tau.comps[2].values)} nonzero values; mu_3 models {'differ' if diff else 'coincide'}")


def _cmd_curvature(A, args, rep):
    T = cohomology(A)
    xs = _classes(T, args.classes)
    n = len(xs)
    C = canonical_minimal_model(A, T, max(n, 2))
    try:
        D = bootstrap_defining_system(C, xs)
    except HypothesisError as e:
        raise InputError(f"cannot bootstrap a defining system: {e}") from None
    cur = matrix_curvature(D)
    S = A.space
    rep["entries"] = {f"{i},{j}": S.format(v) for (i, j), v in sorted(cur.entries.items())}
    rep.check("interior entries of -dD + D̄D vanish", cur.ok, "; ".join(f"({i},{j}): {S.format(v)}" for (i, j), v in cur.interior.items()))
    rep.check("corner equals c(D)", cur.corner == c_of_D(D), S.format(cur.corner))
    rep.say(f"corner = {S.format(cur.corner)}")


def _cmd_theorem(A, args, rep):
    T = cohomology(A)
    H = T.homology
    xs = _classes(T, args.classes)
    r = massey_membership_theorem_check(A, T, xs, args.max_arity, args.bound)
    rep["epsilon"] = r.epsilon
    rep["mu_n"] = None if r.mu_n is None else H.format(r.mu_n)
    for s in r.steps:
        rep.check(s.name, s.ok, s.detail)
        if s.ok and s.detail:
            rep.say(f"  {s.detail}")
    if r.mu_n is not None:
        rep.say(f"epsilon = {r.epsilon:+d}, mu_n(x) = {H.format(r.mu_n)}")


COMMANDS = {
    "validate": _cmd_validate,
    "cohomology": _cmd_cohomology,
    "model": _cmd_model,
    "massey": _cmd_massey,
    "oracle": _cmd_oracle,
    "isotopy": _cmd_isotopy,
    "curvature": _cmd_curvature,
    "theorem-check": _cmd_theorem,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the full report as JSON")
    common.add_argument("--field", help="override the document field (Q or Fp:<p>)")
    p = argparse.ArgumentParser(prog="ainfty", description="Minimal models and Massey products of small dg algebras.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("validate", "cohomology"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("file")
    s = sub.add_parser("model", parents=[common])
    s.add_argument("--max-arity", type=int, default=4)
    s.add_argument("-v", "--verbose", action="store_true", help="list every nonzero value")
    s.add_argument("file")
    for name in ("massey", "curvature"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("items", nargs="+", metavar="CLASS ... FILE")
    s = sub.add_parser("oracle", parents=[common])
    s.add_argument("items", nargs="+", metavar="CLASS ... FILE")
    s.add_argument("--bound", type=int, default=24, help="maximum number of free cochain coordinates")
    s = sub.add_parser("isotopy", parents=[common])
    s.add_argument("--seed-a", type=int, default=1)
    s.add_argument("--seed-b", type=int, default=2)
    s.add_argument("--max-arity", type=int, default=4)
    s.add_argument("file")
    s = sub.add_parser("theorem-check", parents=[common])
    s.add_argument("items", nargs="+", metavar="CLASS ... FILE")
    s.add_argument("--max-arity", type=int, default=None)
    s.add_argument("--bound", type=int, default=24)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # class labels and the file may be separated by options
        if extra and (not hasattr(args, "items") or any(x.startswith("-") for x in extra)):
            parser.error("unrecognized arguments: " + " ".join(extra))
    except SystemExit as e:
        return 2 if e.code else 0
    if extra:
        args.items = args.items + extra
    if hasattr(args, "items"):
        if len(args.items) < 2:
            print("error: expected class labels followed by a file", file=out)
            return 2
        args.classes, args.file = args.items[:-1], args.items[-1]
    rep = Report(args.command)
    try:
        A = parse_algebra(args.file, args.field, check=args.command != "validate")
        if args.command in ("model", "isotopy") and args.max_arity < 2:
            raise InputError("--max-arity must be at least 2")
        COMMANDS[args.command](A, args, rep)
    except InputError as e:
        if args.json:
            print(json.dumps({"command": args.command, "error": str(e)}), file=out)
        else:
            print(f"error: {e}", file=out)
        return 2
    if args.json:
        rep["passed"] = rep.ok
        print(json.dumps(rep.data, indent=1, ensure_ascii=False), file=out)
    else:
        for line in rep.lines:
            print(line, file=out)
    return 0 if rep.ok else 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
