"""Command-line front end: ``kvcalc <command> [options]``.

Exit status is 0 when every check passes, 1 on a failed verification and 2 on
usage or parse errors.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import dbrackets, kv, necklace, symplectic
from .lie import bch, conjugate
from .randgen import nonzero_vector, random_cyclic, random_grouplike, rng_of
from .series import Alphabet, TensorSeries, exp, is_primitive, log


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    g: int = 1
    n: int = 0
    cutoff: int = 6
    seed: int = 0
    framing: kv.Framing = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cutoff < 2:
            raise UsageError("cutoff must be at least 2")
        if self.g < 0 or self.n < 0:
            raise UsageError("g and n must be non-negative")
        if self.framing is not None and (self.framing.g, self.framing.n) != (self.g, self.n):
            raise UsageError("framing does not match g and n")

    def surface(self):
        try:
            return necklace.SurfaceAlgebra(self.g, self.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def framing_or_default(self):
        return self.framing if self.framing is not None else kv.Framing.zero(self.g, self.n)

    def to_json(self):
        return {
            "g": self.g,
            "n": self.n,
            "cutoff": self.cutoff,
            "seed": self.seed,
            "framing": None if self.framing is None else self.framing.to_json(),
            "params": self.params,
        }


def _load_json(path):
    if path is None:
        raise UsageError("this command needs --in")
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _alphabet(cfg, data):
    if "alphabet" in data:
        a = data["alphabet"]
        return Alphabet(tuple(a["names"]), tuple(int(w) for w in a["weights"]))
    return cfg.surface().alphabet


def _series(data, key, alphabet):
    if key not in data:
        raise UsageError(f"input is missing {key!r}")
    try:
        return TensorSeries.from_json(data[key], alphabet)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot parse {key!r}: {exc}") from exc


# commands ----------------------------------------------------------------------------------


def cmd_bch(cfg, args):
    data = _load_json(args.input)
    A = _alphabet(cfg, data)
    u = _series(data, "u", A)
    v = _series(data, "v", A)
    N = min(u.cutoff, v.cutoff, cfg.cutoff)
    w = bch(u.truncate(N), v.truncate(N))
    ok = is_primitive(w)
    return ok, {"bch": w.to_json(), "primitive": ok}, [f"bch through weight {N}: {len(w)} terms", f"primitive: {ok}"]


def cmd_normalize(cfg, args):
    data = _load_json(args.input)
    A = _alphabet(cfg, data)
    a = _series(data, "a", A)
    try:
        if "z" in data:
            z = _series(data, "z", A)
            g = symplectic.normalize_conjugacy_linear(z, a)
        else:
            if cfg.n:
                raise UsageError("normalizing onto ω₀ needs n = 0")
            S = symplectic.SymplecticSpace(cfg.g)
            z = S.omega0(a.cutoff)
            g = symplectic.normalize_conjugacy_symplectic(S, a)
    except (symplectic.TracesDiffer, symplectic.SolveFailure) as exc:
        return False, {"conjugate": False, "reason": str(exc)}, [f"not conjugate: {exc}"]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = conjugate(g, z) == a
    report = {"conjugate": True, "conjugator": g.to_json(), "log": log(g).to_json(), "verified": ok}
    return ok, report, [f"conjugator found with {len(g)} terms", f"g z g^-1 == a: {ok}"]


def _load_F(cfg, args):
    data = _load_json(args.input)
    if isinstance(data, dict) and "F" in data.get("report", {}):
        # the report written by ``kv solve --out``
        data = data["report"]["F"]
    try:
        F = kv.TangentialAutomorphism.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot parse automorphism: {exc}") from exc
    cfg.g, cfg.n, cfg.cutoff = F.S.g, F.S.n, F.N
    return F


def cmd_kv(cfg, args):
    action = args.action
    if action == "solve":
        S = cfg.surface()
        try:
            sol = kv.solve_kv1(S, cfg.cutoff, framing=cfg.framing if args.kv2 else None)
        except kv.NoSolutionAtWeight as exc:
            return False, {"solved": False, "weight": exc.weight}, [str(exc)]
        ok = kv.check_kv1(sol.F)
        report = {"solved": True, "kv1": ok, "nullities": {str(k): v for k, v in sol.nullities.items()}, "F": sol.F.to_json()}
        if sol.h is not None:
            report["h_j"] = [[str(c) for c in h] for h in sol.h_j]
            report["h"] = [str(c) for c in sol.h]
        return ok, report, [f"solved KV I through weight {cfg.cutoff}", f"check_kv1: {ok}", f"nullities: {sol.nullities}"]
    F = _load_F(cfg, args)
    if action == "check-kv1":
        ok = kv.check_kv1(F)
        return ok, {"kv1": ok}, [f"check_kv1: {ok}"]
    if action == "check-kv1-prime":
        try:
            _, ell0 = kv.check_kv1_prime(F)
        except kv.NotConjugate as exc:
            return False, {"kv1_prime": False, "reason": str(exc)}, [f"check_kv1_prime: False ({exc})"]
        return True, {"kv1_prime": True, "ell0": ell0.to_json()}, ["check_kv1_prime: True"]
    if action == "check-kv2-prime":
        if cfg.framing is None:
            raise UsageError("check-kv2-prime needs --framing")
        if cfg.framing.g != F.S.g or cfg.framing.n != F.S.n:
            raise UsageError("framing does not match the automorphism")
        try:
            _, ell0 = kv.check_kv1_prime(F)
        except kv.NotConjugate as exc:
            return False, {"kv2_prime": False, "reason": f"KV I' fails: {exc}"}, [f"KV I' fails: {exc}"]
        res = kv.check_kv2_prime(F, cfg.framing, ell0)
        report = {
            "kv2_prime": res.ok,
            "failed_weight": res.failed_weight,
            "tested_through": res.tested_through,
            "h_j": [[str(c) for c in h] for h in res.h_j],
            "h": [str(c) for c in res.h],
        }
        line = f"check_kv2_prime: {res.ok}" + ("" if res.ok else f" (fails at weight {res.failed_weight})")
        return res.ok, report, [line]
    raise UsageError(f"unknown kv action {action!r}")


def cmd_center(cfg, args):
    S = cfg.surface()
    k = args.k
    tests = args.test_weights or list(range(1, k + 1))
    basis = necklace.center_component(S, k, tests)
    predicted = necklace.predicted_center(S, k)
    ok = necklace.same_span(basis, predicted)
    report = {"k": k, "test_weights": tests, "basis": [c.to_json() for c in basis], "matches_prediction": ok}
    lines = [f"center at weight {k}: dim {len(basis)}"] + [f"  {c!r}" for c in basis]
    lines.append(f"equals span of |ω^m|, |z_j^m|: {ok}")
    return ok, report, lines


def cmd_cohomology(cfg, args):
    S = cfg.surface()
    rows = []
    lines = []
    for w in args.weights:
        rep = dbrackets.cohomology(S, args.degree, w)
        rows.append(dbrackets.cohomology_json(rep))
        lines.append(f"H^{args.degree} weight {w}: ker {rep['dim_ker']}, im {rep['dim_im']}, H {rep['dim_H']}")
    return True, {"degree": args.degree, "table": rows}, lines


# verification suites -------------------------------------------------------------------------


def _suite_lemma(cfg, which):
    S = symplectic.SymplecticSpace(max(cfg.g, 1))
    m = int(cfg.params.get("m", 5 if which == 51 else 4))
    l = int(cfg.params.get("l", 3 if which == 51 else 2))
    trials = int(cfg.params.get("trials", 10))
    rng = rng_of(cfg.seed)
    fn = symplectic.verify_lemma_51 if which == 51 else symplectic.verify_lemma_52
    results = []
    for _ in range(trials):
        u = [nonzero_vector(S, rng) for _ in range(m)]
        try:
            results.append(fn(S, u, l))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return all(results), {"trials": trials, "passed": sum(results)}


def _suite_closed_forms(cfg):
    rows = []
    ok = True
    for g in range(1, max(cfg.g, 1) + 1):
        for l in range(1, int(cfg.params.get("l", 4)) + 1):
            val, closed = symplectic.trace_contraction_m0(g, l)
            ok &= val == closed
            rows.append({"g": g, "l": l, "value": str(val), "closed": str(closed)})
    return ok, {"rows": rows}


def _suite_center(cfg):
    S = cfg.surface()
    tw = int(cfg.params.get("test_weight", cfg.cutoff))
    res = {}
    for k in range(cfg.cutoff + 1):
        basis = necklace.center_component(S, k, list(range(1, tw + 1)))
        res[k] = necklace.same_span(basis, necklace.predicted_center(S, k))
    return all(res.values()), {str(k): v for k, v in res.items()}


def _suite_poisson(cfg):
    S = cfg.surface()
    P = dbrackets.poisson_bivector(S)
    ok = not dbrackets.schouten(P, P)
    return ok, {"pi_pi_vanishes": ok}


def _suite_theta_exp(cfg):
    S = cfg.surface()
    N = cfg.cutoff
    ok = kv.theta_exp(S, kv.gamma0_word(S), N) == exp(kv.xi(S, N))
    return ok, {"theta_exp_gamma0_is_exp_xi": ok}


def _suite_kv(cfg):
    S = cfg.surface()
    sol = kv.solve_kv1(S, cfg.cutoff)
    kv1 = kv.check_kv1(sol.F)
    special = kv.is_special_expansion(S, kv.theta_F_images(sol.F))
    return kv1 and special, {"kv1": kv1, "special": special}


def _suite_conjugacy(cfg):
    S = symplectic.SymplecticSpace(max(cfg.g, 1))
    N = cfg.cutoff
    rng = rng_of(cfg.seed)
    trials = int(cfg.params.get("trials", 5))
    passed = 0
    for _ in range(trials):
        h = random_grouplike(S.alphabet, N, rng)
        a = conjugate(h, S.omega0(N))
        g = symplectic.normalize_conjugacy_symplectic(S, a)
        passed += conjugate(g, S.omega0(N)) == a
    return passed == trials, {"trials": trials, "passed": passed}


def _suite_goldman(cfg):
    S = cfg.surface()
    rng = rng_of(cfg.seed)
    trials = int(cfg.params.get("trials", 20))
    Pi = dbrackets.poisson_bivector(S)
    passed = 0
    for _ in range(trials):
        a = random_cyclic(S.alphabet, rng.randint(1, 4), rng)
        b = random_cyclic(S.alphabet, rng.randint(1, 4), rng)
        passed += necklace.goldman_bracket(S, a, b).terms == dbrackets.partial_map(Pi, [a, b]).terms
    return passed == trials, {"trials": trials, "passed": passed}


SUITES = {
    "lemma51": lambda cfg: _suite_lemma(cfg, 51),
    "lemma52": lambda cfg: _suite_lemma(cfg, 52),
    "closed-forms": _suite_closed_forms,
    "center": _suite_center,
    "poisson": _suite_poisson,
    "theta-exp": _suite_theta_exp,
    "kv": _suite_kv,
    "conjugacy": _suite_conjugacy,
    "goldman": _suite_goldman,
}


def cmd_verify(cfg, args):
    suite = SUITES.get(args.suite)
    if suite is None:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}")
    ok, detail = suite(cfg)
    return ok, {"suite": args.suite, "pass": ok, "detail": detail}, [f"{args.suite}: {'pass' if ok else 'FAIL'}"]


# argument parsing --------------------------------------------------------------------------


def _parse_param(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key, value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=int, default=None)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--cutoff", type=int, default=None)
    common.add_argument("--framing", default=None, help="framing JSON file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--in", dest="input", default=None, help="input JSON file")
    common.add_argument("--out", default=None, help="write the JSON report here")
    common.add_argument("--format", choices=("json", "text"), default="text")

    p = argparse.ArgumentParser(prog="kvcalc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("bch", parents=[common], help="BCH of two Lie series from --in {u, v}")
    sub.add_parser("normalize", parents=[common], help="conjugator onto z (or ω₀) from --in {a, z?}")
    k = sub.add_parser("kv", parents=[common], help="solve or check the KV equations")
    k.add_argument("action", choices=("solve", "check-kv1", "check-kv1-prime", "check-kv2-prime"))
    k.add_argument("--kv2", action="store_true", help="with solve: also impose KV II for --framing")
    c = sub.add_parser("center", parents=[common], help="center component of the necklace bracket")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--test-weights", type=int, nargs="*", default=None)
    h = sub.add_parser("cohomology", parents=[common], help="Poisson cohomology table")
    h.add_argument("--degree", type=int, choices=(0, 1), required=True)
    h.add_argument("--weights", type=int, nargs="+", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    v.add_argument("suite")
    v.epilog = "extra parameters are given as key=value, e.g. m=5 l=3"
    return p


COMMANDS = {
    "bch": cmd_bch,
    "normalize": cmd_normalize,
    "kv": cmd_kv,
    "center": cmd_center,
    "cohomology": cmd_cohomology,
    "verify": cmd_verify,
}

_DEFAULTS = {"g": 1, "n": 0, "cutoff": 6}


def _config(args):
    params = dict(getattr(args, "params", None) or [])
    values = {}
    for key in ("g", "n", "cutoff"):
        given = getattr(args, key)
        if given is None and key in params:
            given = int(params.pop(key))
        values[key] = _DEFAULTS[key] if given is None else given
    seed = int(params.pop("seed", args.seed))
    framing = None
    if args.framing:
        try:
            framing = kv.Framing.from_json(_load_json(args.framing))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad framing: {exc}") from exc
        if args.g is None and args.n is None:
            values["g"], values["n"] = framing.g, framing.n
    return RunConfig(values["g"], values["n"], values["cutoff"], seed, framing, params)


def main(argv=None):
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        args.params = [_parse_param(t) for t in extra] if args.command == "verify" else None
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    if extra and args.command != "verify":
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        cfg = _config(args)
        ok, report, lines = COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    full = {"command": args.command, "config": cfg.to_json(), "ok": ok, "report": report}
    text = json.dumps(full, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.format == "json":
        print(text)
    else:
        for line in lines:
            print(line)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
