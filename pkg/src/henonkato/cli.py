"""``henonkato`` command line: JSON documents in, JSON documents out.

Exit codes: 0 success, 1 internal contradiction, 2 invalid input (JSON error
object on stderr), 64 unknown command.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from typing import Callable

from .decide import Decision, conjugate_near_infinity, conjugate_via_normal_forms, kato_biholomorphic
from .errors import HenonKatoError, ValidationError
from .gaussian import ONE, GaussianRational, I
from .germ import NormalForm, _minimal_order, normal_form, psi_chain, psi_via_phi
from .henon import HenonFactor, HenonMap, degrees, rotate, theta_conjugate, validate
from .kato import (
    TowerDescription,
    TowerStep,
    b2,
    build_henon_tower,
    dloussky_closed,
    invariants_closed,
    simulate_tower,
    type_from_support,
    KatoInvariants,
)
from .reconstruct import (
    TargetParameters,
    convert_parametrization,
    henon_from_normal_form,
    hhat_from_normal_form,
    solve_surjectivity,
)

__all__ = ["main", "run", "COMMANDS", "parse_coeff", "dump_coeff", "parse_map", "dump_map",
           "parse_normal_form", "dump_normal_form"]

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 64

# -- coefficients --------------------------------------------------------------

_RAT = r"[+-]?\d+(?:/\d+)?"
_GAUSS = re.compile(rf"^\s*(?:(?P<re>{_RAT})(?=[+-]|\s*$))?\s*(?:(?P<im>[+-]?(?:\d+(?:/\d+)?)?)\*?i)?\s*$")


def parse_coeff(value, path: str = "") -> GaussianRational:
    """{"re": "p/q", "im": "p/q"}; plain integers and strings like "3/2" or "1/2-3*i" also accepted."""
    try:
        if isinstance(value, bool):
            raise TypeError
        if isinstance(value, int):
            return GaussianRational(value)
        if isinstance(value, dict):
            extra = set(value) - {"re", "im"}
            if extra:
                raise ValidationError(f"unexpected keys {sorted(extra)}", path=path)
            return GaussianRational(str(value.get("re", "0")), str(value.get("im", "0")))
        if isinstance(value, str):
            m = _GAUSS.match(value)
            if m is None or (m.group("re") is None and m.group("im") is None):
                raise ValueError
            im = m.group("im")
            if im in ("", "+"):
                im = "1"
            elif im == "-":
                im = "-1"
            return GaussianRational(m.group("re") or "0", im or "0")
        raise TypeError
    except ValidationError:
        raise
    except (TypeError, ValueError):
        raise ValidationError(f"not an exact Gaussian rational: {value!r}", path=path) from None


def dump_coeff(c: GaussianRational) -> dict:
    return c.to_parts()


# -- documents -----------------------------------------------------------------


def _require(doc, key, kind, path):
    if not isinstance(doc, dict) or key not in doc:
        raise ValidationError(f"missing field {key!r}", path=path)
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ValidationError(f"field {key!r} must be an integer", path=f"{path}.{key}".lstrip("."))
    if kind is list and not isinstance(value, list):
        raise ValidationError(f"field {key!r} must be a list", path=f"{path}.{key}".lstrip("."))
    if kind is dict and not isinstance(value, dict):
        raise ValidationError(f"field {key!r} must be an object", path=f"{path}.{key}".lstrip("."))
    return value


def parse_map(doc) -> HenonMap:
    factors_doc = _require(doc, "factors", list, "")
    if not factors_doc:
        raise ValidationError("map has no factors", path="factors")
    factors = []
    for k, fdoc in enumerate(factors_doc):
        path = f"factors[{k}]"
        poly = _require(fdoc, "poly", list, path)
        coeffs = tuple(parse_coeff(c, f"{path}.poly[{j}]") for j, c in enumerate(poly))
        if len(coeffs) < 3:
            raise ValidationError(f"degree < 2, factor {k + 1}", path=f"{path}.poly")
        a = parse_coeff(_require(fdoc, "a", None, path), f"{path}.a")
        factors.append(HenonFactor(coeffs, a))
    m = HenonMap(tuple(factors))
    problems = validate(m)
    if problems:
        first = int(problems[0].rsplit(" ", 1)[-1]) - 1
        raise ValidationError("invalid Hénon map: " + "; ".join(problems), problems,
                              path=f"factors[{first}]")
    return m


def dump_map(m: HenonMap) -> dict:
    return {"factors": [{"poly": [dump_coeff(c) for c in f.p_coeffs], "a": dump_coeff(f.a)}
                        for f in m.factors]}


def dump_normal_form(nf: NormalForm) -> dict:
    return {
        "p": nf.p,
        "lambda": dump_coeff(nf.lam),
        "g": {str(n): dump_coeff(c) for n, c in sorted(nf.sparse_g().items())},
        "c_undetermined": nf.c_undetermined,
    }


def parse_normal_form(doc) -> NormalForm:
    p = _require(doc, "p", int, "")
    if p < 2:
        raise ValidationError("p must be at least 2", path="p")
    lam = parse_coeff(_require(doc, "lambda", None, ""), "lambda")
    if not lam:
        raise ValidationError("lambda must be nonzero", path="lambda")
    gdoc = _require(doc, "g", dict, "")
    g = [GaussianRational(0)] * (2 * p - 1)
    for key, value in gdoc.items():
        try:
            n = int(key)
        except ValueError:
            raise ValidationError(f"exponent {key!r} is not an integer", path=f"g.{key}") from None
        if not 1 <= n <= 2 * p - 2:
            raise ValidationError(f"exponent {n} outside 1..{2 * p - 2}", path=f"g.{key}")
        g[n] = parse_coeff(value, f"g.{key}")
    return NormalForm(p, lam, tuple(g), lam == ONE)


def _parse_degrees(doc) -> tuple:
    if isinstance(doc, dict) and "factors" in doc:
        return parse_map(doc).degree_list
    ds = _require(doc, "degrees", list, "")
    for k, d in enumerate(ds):
        if isinstance(d, bool) or not isinstance(d, int) or d < 2:
            raise ValidationError(f"degree {d!r} is not an integer >= 2", path=f"degrees[{k}]")
    if not ds:
        raise ValidationError("degree list is empty", path="degrees")
    return tuple(ds)


def _parse_index_list(entries, path):
    if not isinstance(entries, list):
        raise ValidationError(f"{path} must be a list of {{i, l, value}} objects", path=path)
    out = {}
    for k, e in enumerate(entries):
        p = f"{path}[{k}]"
        i = _require(e, "i", int, p)
        l = _require(e, "l", int, p)
        out[(i, l)] = parse_coeff(_require(e, "value", None, p), f"{p}.value")
    return out


def parse_target(doc) -> TargetParameters:
    lam = parse_coeff(_require(doc, "lambda", None, ""), "lambda")
    ds = _parse_degrees(doc)
    if "alpha_tilde" in doc:
        return TargetParameters(lam, ds, _parse_index_list(doc["alpha_tilde"], "alpha_tilde"))
    if "alpha" in doc:
        p = 1
        for d in ds:
            p *= d
        return convert_parametrization(p, lam, _parse_index_list(doc["alpha"], "alpha"), ds)
    raise ValidationError("target needs 'alpha_tilde' or 'alpha'", path="")


def _parse_tower(doc) -> TowerDescription:
    steps = []
    for k, s in enumerate(_require(doc, "steps", list, "")):
        on = _require(s, "on", list, f"steps[{k}]")
        if any(isinstance(j, bool) or not isinstance(j, int) for j in on):
            raise ValidationError("divisor indices must be integers", path=f"steps[{k}].on")
        steps.append(TowerStep(frozenset(on), bool(s.get("glued", False))))
    return TowerDescription(tuple(steps))


def _dump_tower(t: TowerDescription) -> list:
    return [{"on": sorted(s.on), "glued": s.glued} for s in t.steps]


# -- commands -------------------------------------------------------------------


def _read_json(path: str | None, stdin):
    try:
        if path is None or path == "-":
            text = stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}", path=path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc.msg} at line {exc.lineno}") from None


def cmd_normal_form(doc, args, _second):
    m = parse_map(doc)
    order = args.order
    if order is not None:
        _, Ds, _ = degrees(m)
        if order < _minimal_order(Ds):
            raise ValidationError(f"--order must be at least {_minimal_order(Ds)} for this map")
    return dump_normal_form(normal_form(m, order))


def cmd_reconstruct(doc, args, _second):
    return dump_map(henon_from_normal_form(parse_normal_form(doc)))


def cmd_solve(doc, args, _second):
    return dump_map(solve_surjectivity(parse_target(doc)))


def cmd_dloussky(doc, args, _second):
    return {"profile": list(dloussky_closed(_parse_degrees(doc)))}


def cmd_tower_sim(doc, args, _second):
    if isinstance(doc, dict) and "steps" in doc:
        return {"profile": list(simulate_tower(_parse_tower(doc)))}
    ds = _parse_degrees(doc)
    t = build_henon_tower(ds)
    return {"steps": _dump_tower(t), "profile": list(simulate_tower(t))}


def _invariants_from_normal_form(nf: NormalForm) -> KatoInvariants:
    support = nf.support()
    if not support:
        raise ValidationError("g = 0 has no invariants", path="g")
    return KatoInvariants(nf.p, 2 * nf.p - 2, support[0], type_from_support(nf.p, support))


def cmd_invariants(doc, args, _second):
    if isinstance(doc, dict) and "p" in doc and "g" in doc:
        return _invariants_from_normal_form(parse_normal_form(doc)).to_dict()
    return invariants_closed(_parse_degrees(doc)).to_dict()


def cmd_type(doc, args, _second):
    if isinstance(doc, dict) and "support" in doc:
        p = _require(doc, "p", int, "")
        support = _require(doc, "support", list, "")
        if not support or any(isinstance(n, bool) or not isinstance(n, int) for n in support):
            raise ValidationError("support must be a nonempty list of integers", path="support")
        return {"type": list(type_from_support(p, support))}
    if isinstance(doc, dict) and "factors" in doc:
        nf = normal_form(parse_map(doc))
    else:
        nf = parse_normal_form(doc)
    return {"type": list(_invariants_from_normal_form(nf).type)}


def cmd_b2(doc, args, _second):
    return {"b2": b2(_parse_degrees(doc))}


def _dump_decision(d: Decision) -> dict:
    return d.to_dict()


def cmd_conjugate(doc, args, second):
    F, G = parse_map(doc), parse_map(second)
    return _dump_decision(conjugate_near_infinity(F, G))


def cmd_biholomorphic(doc, args, second):
    F, G = parse_map(doc), parse_map(second)
    return _dump_decision(kato_biholomorphic(F, G))


def selftest(seed: int = 0, count: int = 12) -> dict:
    """Cross-path and roundtrip checks on a small random suite."""
    from .sampling import random_map, random_pair, random_target, valid_roots

    rng = random.Random(seed)
    tally = {}

    def record(name, ok):
        passed, failed = tally.get(name, (0, 0))
        tally[name] = (passed + bool(ok), failed + (not ok))

    for _ in range(count):
        m = random_map(rng, 3, 3)
        nf = normal_form(m)
        record("injectivity roundtrip", henon_from_normal_form(nf, check=False) == m)
        chain = psi_chain(m)
        record("psi cross-path", all(psi_via_phi(m, i).agrees_with(chain[i]) for i in range(1, m.n + 1)))
        b = hhat_from_normal_form(nf)
        record("b_p vanishes", not b[nf.p])
        inv = invariants_closed(m.degree_list)
        record("type from support", type_from_support(nf.p, nf.support()) == inv.type
               and b.valuation() == inv.j)
        record("tower vs closed profile",
               simulate_tower(build_henon_tower(m.degree_list)) == dloussky_closed(m.degree_list))
        k = rng.randint(1, m.n)
        z = rng.choice(valid_roots(m))
        record("rotation biholomorphic", kato_biholomorphic(m, theta_conjugate(rotate(m, k), z)).verdict)
        F, G = random_pair(rng, 3, 3)
        record("decision paths agree",
               conjugate_near_infinity(F, G).solutions == conjugate_via_normal_forms(F, G).solutions)
        t = random_target(rng, 2, 3)
        bt = hhat_from_normal_form(normal_form(solve_surjectivity(t)))
        record("surjectivity roundtrip",
               all(bt[t.exponent(i, l)] == v for (i, l), v in t.alpha_tilde.items()))
    passed = sum(p for p, _ in tally.values())
    failed = sum(f for _, f in tally.values())
    return {"passed": passed, "failed": failed,
            "checks": {name: {"passed": p, "failed": f} for name, (p, f) in tally.items()}}


def cmd_selftest(doc, args, _second):
    return selftest(args.seed, args.count)


COMMANDS: dict[str, Callable] = {
    "normal-form": cmd_normal_form,
    "reconstruct": cmd_reconstruct,
    "solve": cmd_solve,
    "dloussky": cmd_dloussky,
    "tower-sim": cmd_tower_sim,
    "invariants": cmd_invariants,
    "type": cmd_type,
    "b2": cmd_b2,
    "conjugate": cmd_conjugate,
    "biholomorphic": cmd_biholomorphic,
    "selftest": cmd_selftest,
}

_BINARY = {"conjugate", "biholomorphic"}

USAGE = """usage: henonkato COMMAND [--input FILE] [--second FILE] [--order N] [--pretty]

commands:
  normal-form    map -> normal form (p, lambda, g, c_undetermined)
  reconstruct    normal form -> map
  solve          target parameters -> map
  dloussky       degrees or map -> self-intersection profile
  tower-sim      degrees, map or explicit steps -> simulated profile
  invariants     degrees, map or normal form -> p, q, j, type
  type           {p, support}, map or normal form -> type
  b2             degrees or map -> second Betti number
  conjugate      map (--input) vs map (--second) -> conjugacy near infinity
  biholomorphic  map (--input) vs map (--second) -> Kato surface biholomorphism
  selftest       run the built-in cross checks
"""


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="henonkato", usage=USAGE, add_help=True)
    ap.add_argument("command")
    ap.add_argument("--input", default=None)
    ap.add_argument("--second", default=None)
    ap.add_argument("--order", type=int, default=None)
    ap.add_argument("--pretty", action="store_true")
    ap.add_argument("--seed", type=int, default=0, help="selftest seed")
    ap.add_argument("--count", type=int, default=12, help="selftest suite size")
    return ap


def _emit(stream, payload, pretty):
    if pretty:
        stream.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        stream.write(json.dumps(payload, separators=(",", ":"), ensure_ascii=False) + "\n")


def run(argv, stdin=None, stdout=None, stderr=None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(argv)
    if not argv or argv[0] not in COMMANDS:
        if argv and argv[0] in ("-h", "--help"):
            stdout.write(USAGE)
            return EXIT_OK
        stderr.write(USAGE)
        return EXIT_USAGE
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "selftest":
            doc = second = None
        else:
            doc = _read_json(args.input, stdin)
            second = None
            if args.command in _BINARY:
                if args.second is None:
                    raise ValidationError(f"{args.command} needs --second FILE")
                second = _read_json(args.second, stdin)
        result = COMMANDS[args.command](doc, args, second)
    except ValidationError as exc:
        err = {"error": {"kind": type(exc).__name__, "message": str(exc), "violations": exc.violations}}
        if exc.path:
            err["error"]["path"] = exc.path
        _emit(stderr, err, False)
        return EXIT_INVALID
    except (HenonKatoError, ArithmeticError) as exc:
        _emit(stderr, {"error": {"kind": type(exc).__name__, "message": str(exc)}}, False)
        return EXIT_INTERNAL
    _emit(stdout, result, args.pretty)
    if args.command == "selftest" and result["failed"]:
        return EXIT_INTERNAL
    return EXIT_OK


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
