"""Command-line front end.

Every subcommand writes deterministic output: JSON is key-sorted, sets are
emitted in a fixed order and nothing is random.  Exit status is 0 on success,
2 when a certificate is refused and 1 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import action, balls, closure, eqcompact, ergodicity, expansion, finitary, gamma5, subshift, trees
from .trees import Code, FamilyError

EXIT_OK, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2


class Refused(Exception):
    def __init__(self, payload):
        super().__init__("refused")
        self.payload = payload


def _load(text: str, field: str):
    """Inline JSON, a path to a JSON file, or a bare string."""
    if text is None:
        raise FamilyError("missing value", field)
    p = Path(text)
    if not text.lstrip().startswith(("{", "[", '"')) and p.suffix == ".json":
        try:
            text = p.read_text()
        except OSError as exc:
            raise FamilyError(f"cannot read {p}: {exc.strerror}", field) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        if text.lstrip().startswith(("{", "[")):
            raise FamilyError(f"malformed JSON ({exc.msg} at column {exc.colno})", field) from None
        return text


def _family(text, field="family"):
    return trees.family_from_json(_load(text, field))


def _code(text, field):
    return Code.from_json(_load(text, field), field)


def _vertex(fam, text):
    return fam.root() if text is None else fam.parse_vertex(text)


def _positive(name, value, minimum=0):
    if value < minimum:
        raise FamilyError(f"must be >= {minimum}, got {value}", name)
    return value


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bytes):
        return x.hex()
    if isinstance(x, (set, frozenset)):
        return sorted(map(str, x))
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_jsonable) + "\n"


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, text renderings by format)


def cmd_tree_dump(a):
    fam = _family(a.family)
    v = _vertex(fam, a.vertex)
    r = _positive("radius", a.radius)
    ball = balls.extract_ball(fam, v, r, a.undecorated)
    fmt = fam.format_vertex
    payload = {
        "family": fam.to_json(),
        "center": fmt(v),
        "radius": r,
        "vertices": [fmt(x) for x in ball.labels],
        "edges": [[fmt(ball.labels[p]), fmt(ball.labels[i]), c] for p, i, c in ball.edges],
    }
    tsv = "from\tto\tlabel\n" + "".join(f"{u}\t{w}\t{c}\n" for u, w, c in payload["edges"])
    return payload, {"tsv": tsv, "dot": balls.ball_to_dot(ball, fmt=fmt), "text": tsv}


def cmd_stab_enum(a):
    fam = _family(a.family)
    v = _vertex(fam, a.vertex)
    words = action.stabilizer_words(fam, v, _positive("n", a.n))
    payload = {"vertex": fam.format_vertex(v), "n": a.n, "words": words, "count": len(words)}
    text = "".join((w or "e") + "\n" for w in words)
    return payload, {"text": text, "tsv": text}


def cmd_ball_code(a):
    fam = _family(a.family)
    v = _vertex(fam, a.vertex)
    r = _positive("r", a.r)
    code = balls.ball_code(fam, v, r, a.undecorated)
    payload = {"vertex": fam.format_vertex(v), "r": r, "undecorated": a.undecorated, "code": code.hex()}
    ball = balls.extract_ball(fam, v, r, a.undecorated)
    return payload, {"text": code.hex() + "\n", "dot": balls.ball_to_dot(ball, fmt=fam.format_vertex)}


def cmd_dist_tau(a):
    fa = _family(a.family)
    fb = _family(a.family2, "family2") if a.family2 else fa
    va, vb = _vertex(fa, a.vertex), _vertex(fb, a.vertex2)
    d = balls.dist_tau(fa, va, fb, vb, _positive("max_r", a.max_r), a.undecorated)
    value = str(d)
    return {"dist": value, "resolved": not isinstance(d, balls.Unresolved), "max_r": a.max_r}, {"text": value + "\n"}


def cmd_census(a):
    fam = _family(a.family)
    r = _positive("r", a.r)
    R = _positive("R", a.R, r)
    c = closure.census(fam, r, R, prune=not a.no_prune)
    payload = {
        "r": r,
        "R": R,
        "total": c.total(),
        "types": [
            {"code": k.hex(), "count": s.count, "max_dist": s.max_dist} for k, s in sorted(c.stats.items())
        ],
    }
    return payload, {"tsv": c.to_tsv(), "text": c.to_tsv()}


def cmd_eqc_certify(a):
    fam = _family(a.family)
    if a.R < 2 * a.r:
        raise FamilyError(f"must be >= 2r = {2 * a.r}, got {a.R}", "R")
    cert = eqcompact.certify_eqc(fam, _positive("r", a.r), a.R, _positive("n", a.n))
    payload = cert.to_json()
    if not cert.ok:
        raise Refused((payload, {"text": cert.audit_table()}))
    return payload, {"text": cert.audit_table()}


def cmd_cb_rank(a):
    if a.presentation is not None:
        p = closure.AccumulationPresentation.from_json(_load(a.presentation, "presentation"))
    else:
        p = closure.AccumulationPresentation.standard(closure.standard_expr(_positive("alpha", a.alpha, 1)))
    res = closure.cb_rank_presentation(p)
    return res.to_json(), {"text": f"{res.rank}\n"}


def _sequence(text, field):
    return subshift.sequence_from_json(_load(text, field), field)


def cmd_subshift_stats(a):
    sigma = _sequence(a.sequence, "sequence")
    W = _positive("W", a.W, 1)
    words = [a.word] if a.word else []
    if not words:
        for k in range(1, _positive("max_len", a.max_len, 1) + 1):
            words.extend(subshift.factors(sigma, k, W))
    stats = [subshift.recurrence_stats(sigma, w, W) for w in words]
    payload = {
        "W": W,
        "good": sigma.is_good_on(-W, W),
        "factors": [
            {"word": s.word, "occurrences": len(s.occurrences), "max_gap": s.max_gap} for s in stats
        ],
    }
    tsv = "word\tW\toccurrences\tmax_gap\n" + "".join(s.to_row() + "\n" for s in stats)
    return payload, {"tsv": tsv, "text": tsv}


def cmd_subshift_discriminate(a):
    sigma = _sequence(a.sigma, "sigma")
    tau = _sequence(a.tau, "tau") if a.tau else sigma
    d = subshift.discriminator(sigma, tau, a.n, _positive("search_depth", a.search_depth, 1))
    payload = d.to_json()
    if d.word is not None:
        payload["verified"] = subshift.verify_discriminator(sigma, tau, a.n, d.word)
    return payload, {"text": f"{d.verdict}\t{d.word or '-'}\n"}


def _H(a):
    return gamma5.build_H(_code(a.C, "C"), _code(a.C2, "C2"), _positive("search_depth", a.search_depth, 1))


def cmd_g5_build_h(a):
    H = _H(a)
    payload = H.to_json()
    payload["fixed_point_witness"] = gamma5.fixed_point_witness(H)
    text = "".join(w + "\n" for w in H.generators)
    return payload, {"text": text}


def cmd_g5_escape(a):
    H = _H(a)
    sweep = gamma5.escape_sweep(H, _positive("radius", a.radius), _positive("max_size", a.max_size, 1))
    payload = sweep.to_json()
    if not sweep.ok:
        raise Refused((payload, {"text": payload["status"] + "\n"}))
    return payload, {"text": payload["status"] + "\n"}


def cmd_expansion_search(a):
    H = _H(a)
    fam = trees.MasterCodeFamily(H.C_prime)
    seeds = [gamma5.P] + [trees.Vertex(k, trees.NEAR) for k in fam.d_keys(3)]
    rep = expansion.min_ratio_search(
        fam, H.generators, _positive("max_size", a.max_size, 1), _positive("window", a.window), a.strategy, seeds
    )
    payload = rep.to_json()
    return payload, {"text": f"{rep.min_ratio}\n"}


def cmd_t4_certificate(a):
    params = ergodicity.CertificateParams(
        search_depth=a.search_depth,
        sweep_size=a.max_size,
        expansion_size=a.max_size,
        expansion_window=a.window,
    )
    try:
        cert = ergodicity.certificate(_code(a.C, "C"), _code(a.C2, "C2"), params)
    except ergodicity.CertificateError as exc:
        payload = {"refused": exc.item, "detail": exc.detail}
        raise Refused((payload, {"text": f"refused: {exc.item}\n"})) from None
    return cert.to_json(), {"text": cert.verdict + "\n"}


def _oracle(text):
    try:
        return finitary.oracle_from_json(_load(text, "H"))
    except finitary.PermError as exc:
        raise FamilyError(str(exc), "H") from None


def cmd_finitary_dichotomy(a):
    H = _oracle(a.H)
    if a.W <= a.l:
        raise FamilyError(f"must exceed l = {a.l}, got {a.W}", "W")
    v = finitary.dichotomy_check(H, a.l, a.W)
    return v.to_json(), {"text": v.verdict + "\n"}


def cmd_finitary_witness(a):
    H = _oracle(a.H)
    kappas = finitary.enumerate_conjugators(_positive("steps", a.steps, 1))
    try:
        steps = finitary.witness_sequence(H, kappas, a.W)
    except finitary.WindowTooSmall as exc:
        raise FamilyError(f"{exc}; enlarge W", "W") from None
    payload = {
        "W": a.W,
        "conjugators": [str(k) for k in kappas],
        "steps": [s.to_json() for s in steps],
    }
    tsv = "l\trho\tdelta\tgamma\n" + "".join(f"{s.l}\t{s.rho}\t{s.delta}\t{s.gamma}\n" for s in steps)
    return payload, {"tsv": tsv, "text": tsv}


# ---------------------------------------------------------------------------
# parser


def _add(sub, name, func, help_, formats=("json", "text")):
    p = sub.add_parser(name, help=help_)
    p.set_defaults(func=func, formats=formats)
    p.add_argument("--format", choices=formats, default="json")
    return p


def _family_args(p, vertex=True):
    p.add_argument("--family", required=True, help="family spec: inline JSON or a .json file")
    if vertex:
        p.add_argument("--vertex", default=None, help="vertex name (default: the base vertex)")


def _code_args(p):
    p.add_argument("--C", required=True, help="code fixing the base, e.g. b or {\"prefix\": \"c\", \"period\": \"b\"}")
    p.add_argument("--C2", required=True, help="the other code")
    p.add_argument("--search-depth", type=int, default=64)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="schreiertrees", description=__doc__.splitlines()[0])
    top = ap.add_subparsers(dest="group", required=True)

    def group(name, help_):
        return top.add_parser(name, help=help_).add_subparsers(dest="command", required=True)

    g = group("tree", "tree families")
    p = _add(g, "dump", cmd_tree_dump, "edges of the ball around a vertex", ("json", "tsv", "dot", "text"))
    _family_args(p)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--undecorated", action="store_true")

    g = group("stab", "stabilizers")
    p = _add(g, "enum", cmd_stab_enum, "stabilizer words up to length n", ("json", "text", "tsv"))
    _family_args(p)
    p.add_argument("--n", type=int, default=6)

    g = group("ball", "rooted balls")
    p = _add(g, "code", cmd_ball_code, "canonical code of a rooted ball", ("json", "text", "dot"))
    _family_args(p)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--undecorated", action="store_true")

    g = group("dist", "rooted-tree distance")
    p = _add(g, "tau", cmd_dist_tau, "distance between two rooted trees")
    _family_args(p)
    p.add_argument("--family2", default=None)
    p.add_argument("--vertex2", default=None)
    p.add_argument("--max-r", type=int, default=8)
    p.add_argument("--undecorated", action="store_true")

    p = top.add_parser("census", help="ball types in a window")
    p.set_defaults(func=cmd_census, formats=("json", "tsv", "text"))
    p.add_argument("--format", choices=("json", "tsv", "text"), default="json")
    _family_args(p, vertex=False)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--R", type=int, default=32)
    p.add_argument("--no-prune", action="store_true")

    g = group("eqc", "equational compactness")
    p = _add(g, "certify", cmd_eqc_certify, "certificate to finite depth")
    _family_args(p, vertex=False)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--R", type=int, default=32)
    p.add_argument("--n", type=int, default=6)

    g = group("cb", "Cantor-Bendixson rank")
    p = _add(g, "rank", cmd_cb_rank, "rank of an accumulation presentation")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--presentation", default=None)
    src.add_argument("--alpha", type=int, default=None, help="use the standard presentation of this rank")

    g = group("subshift", "line trees of two-sided sequences")
    p = _add(g, "stats", cmd_subshift_stats, "recurrence gaps of factors", ("json", "tsv", "text"))
    p.add_argument("--sequence", default='{"substitution": {}}')
    p.add_argument("--word", default=None)
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--W", type=int, default=2000)
    p = _add(g, "discriminate", cmd_subshift_discriminate, "separating word for two line trees")
    p.add_argument("--sigma", default='{"substitution": {}}')
    p.add_argument("--tau", default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--search-depth", type=int, default=256)

    g = group("g5", "subgroups of the five-letter group")
    p = _add(g, "build-h", cmd_g5_build_h, "generators fixing the base of S_C", ("json", "text"))
    _code_args(p)
    p = _add(g, "escape", cmd_g5_escape, "no finite invariant connected sets near the base of S_C'")
    _code_args(p)
    p.add_argument("--radius", type=int, default=10)
    p.add_argument("--max-size", type=int, default=8)

    g = group("expansion", "expansion ratios")
    p = _add(g, "search", cmd_expansion_search, "least ratio over connected sets")
    _code_args(p)
    p.add_argument("--max-size", type=int, default=8)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--strategy", choices=("exhaustive", "greedy"), default="exhaustive")

    g = group("t4", "weak incomparability")
    p = _add(g, "certificate", cmd_t4_certificate, "combinatorial certificate for two codes")
    _code_args(p)
    p.add_argument("--max-size", type=int, default=8)
    p.add_argument("--window", type=int, default=10)

    g = group("finitary", "finitary permutation groups")
    p = _add(g, "dichotomy", cmd_finitary_dichotomy, "trivial or alternating tail in a window")
    p.add_argument("--H", required=True, help='oracle tag or JSON, e.g. fixing-evens or {"tag": "generated", ...}')
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--W", type=int, default=16)
    p = _add(g, "witness", cmd_finitary_witness, "steps of the non-compactness construction", ("json", "tsv", "text"))
    p.add_argument("--H", required=True)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--W", type=int, default=20)
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    status = EXIT_OK
    try:
        payload, renders = args.func(args)
    except Refused as exc:
        payload, renders = exc.payload
        status = EXIT_REFUSED
    except FamilyError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (ValueError, KeyError, TypeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    if args.format == "json":
        out.write(dump_json(payload))
    else:
        out.write(renders[args.format])
    return status


def main() -> None:
    sys.exit(run())
