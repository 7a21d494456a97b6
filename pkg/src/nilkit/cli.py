"""``nilkit`` command line.

Results go to stdout as ``key: value`` lines. Exit status: 0 computed, 1 a
negative decision (not a member, not conjugate, empty intersection), 2 bad
usage or malformed input, 3 an internal check failed.
"""
from __future__ import annotations

import argparse
import csv
import os
import random
import re
import statistics
import sys
import time
from pathlib import Path
from typing import Sequence

from . import oracle
from .builder import (ClassBoundError, build_nilpotent_presentation, parse_finite_presentation)
from .conjugacy import (conjugate_commuting_tuples, conjugate_tuples, normalizer,
                        subgroup_conjugacy)
from .cosets import coset_intersection, subgroup_intersection
from .homs import Homomorphism, centralizer, conjugacy_with_centralizer
from .presentation import NilpotentPresentation, format_presentation, parse_presentation
from .subgroups import (SubgroupPresentation, expression_program, full_form, membership,
                        subgroup_order)
from .torsion import isolator, torsion_subgroup
from .words import ParseError, StraightLineProgram, Word, parse_binexp, parse_slp, parse_word

NEGATIVE = 1
USAGE = 2
INTERNAL = 3


class UsageError(Exception):
    pass


# ----------------------------------------------------------------------
# formatting


def fmt_vec(v: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def fmt_rows(rows) -> str:
    return "[" + ", ".join(fmt_vec(r) for r in rows) + "]"


def fmt_word(v: Sequence[int]) -> str:
    parts = [f"a{i + 1}" if e == 1 else f"a{i + 1}^{e}" for i, e in enumerate(v) if e]
    return " ".join(parts) or "1"


def emit(key: str, value) -> None:
    print(f"{key}: {value}")


def emit_block(key: str, text: str) -> None:
    print(f"{key}:")
    for line in text.rstrip("\n").splitlines():
        print("  " + line)


# ----------------------------------------------------------------------
# input


def _read_arg(arg: str) -> str:
    """Contents of ``arg`` when it names a file, else ``arg`` itself."""
    if arg and "\n" not in arg and len(arg) < 4096 and os.path.isfile(arg):
        return Path(arg).read_text()
    return arg


def load_presentation(arg: str | None) -> NilpotentPresentation:
    if arg is None:
        raise UsageError("a presentation is required (-p)")
    text = _read_arg(arg)
    if text.lstrip().startswith("group"):
        return build_nilpotent_presentation(parse_finite_presentation(text)).target
    return parse_presentation(text)


_COORDS = re.compile(r"^\s*\(?\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*,?\s*\)?\s*$")


def parse_element(P: NilpotentPresentation, text: str, fmt: str) -> tuple[int, ...]:
    if fmt == "coords":
        m = _COORDS.match(text)
        if m is None:
            raise ParseError("expected a coordinate tuple like (1,0,-2)", 0, text)
        vals = [int(x) for x in m.group(1).split(",")] if m.group(1) else []
        if len(vals) != P.m:
            raise ParseError(f"expected {P.m} coordinates, got {len(vals)}", 0, text)
        return P.canonical(vals)
    if fmt == "slp":
        return P.evaluate(parse_slp(_read_arg(text), P.m))
    if fmt == "binexp":
        return P.evaluate(parse_binexp(text, P.m))
    return P.evaluate(parse_word(text, P.m))


def parse_list(P: NilpotentPresentation, arg: str | None, fmt: str) -> list[tuple[int, ...]]:
    """Elements separated by newlines or ``;``; a file name is read first."""
    if arg is None:
        return []
    text = _read_arg(arg)
    items = []
    for piece in re.split(r"[\n;]", text):
        piece = piece.split("#", 1)[0].strip()
        if piece:
            items.append(parse_element(P, piece, fmt))
    return items


def parse_subgroup(P, arg, fmt, name):
    if arg is None:
        raise UsageError(f"subgroup {name} is required")
    return full_form(P, parse_list(P, arg, fmt))


_HOM_HEAD = re.compile(r"^\s*hom:\s*(\S+)\s*->\s*(\S+)\s*$")


def load_hom(path: str, fmt: str, check: bool) -> Homomorphism:
    """``hom: <domain> -> <codomain>`` followed by ``k |-> image`` lines."""
    text = Path(path).read_text()
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise ParseError("empty homomorphism file", 0, text)
    m = _HOM_HEAD.match(lines[0])
    if m is None:
        raise ParseError("expected 'hom: <domain-file> -> <codomain-file>'", 0, text)
    base = Path(path).parent
    D = load_presentation(str(base / m.group(1)))
    C = load_presentation(str(base / m.group(2)))
    gens, imgs = [], []
    for ln in lines[1:]:
        if "|->" not in ln:
            raise ParseError("expected 'k |-> image'", text.find(ln), text)
        lhs, rhs = ln.split("|->", 1)
        gens.append(parse_element(D, lhs.strip(), fmt))
        imgs.append(parse_element(C, rhs.strip(), fmt))
    return Homomorphism(D, gens, C, imgs, check=check)


# ----------------------------------------------------------------------
# oracle cross-checks


def _table(P):
    try:
        return oracle.enumerate_group(P)
    except oracle.CapExceededError as exc:
        print(f"check skipped: {exc}", file=sys.stderr)
        return None


def _agree(ok: bool) -> None:
    if not ok:
        raise AssertionError("result disagrees with brute force")
    emit("check", "agrees with brute force")


def _elements(T, H):
    return oracle.brute_closure(T, H.rows)


# ----------------------------------------------------------------------
# subcommands


def cmd_normal_form(a, P):
    v = parse_element(P, a.word, a.format)
    emit("coords", fmt_vec(v))
    emit("word", fmt_word(v))


def cmd_multiply(a, P):
    emit("coords", fmt_vec(P.multiply(parse_element(P, a.u, a.format), parse_element(P, a.v, a.format))))


def cmd_power(a, P):
    emit("coords", fmt_vec(P.power(parse_element(P, a.u, a.format), a.n)))


def cmd_full_form(a, P):
    H = parse_subgroup(P, a.H, a.format, "-H")
    emit("rows", fmt_rows(H.rows))
    emit("pivots", fmt_vec(p + 1 for p in H.pivots))
    n = subgroup_order(P, H)
    emit("order", "inf" if n is None else n)
    lines, roots = expression_program(H.exprs or ())
    if lines:
        emit_block("program", "\n".join(lines))
    for k, root in enumerate(roots):
        emit(f"expression[{k + 1}]", root)
    if a.check and (T := _table(P)):
        gens = parse_list(P, a.H, a.format)
        _agree(_elements(T, H) == oracle.brute_closure(T, gens))


def cmd_membership(a, P):
    H = parse_subgroup(P, a.H, a.format, "-H")
    g = parse_element(P, a.word, a.format)
    b = membership(P, H, g)
    emit("member", "true" if b is not None else "false")
    if b is not None:
        emit("exponents", fmt_vec(b))
    if a.check and (T := _table(P)):
        _agree((b is not None) == (g in _elements(T, H)))
    return 0 if b is not None else NEGATIVE


def cmd_subgroup_presentation(a, P):
    H = parse_subgroup(P, a.H, a.format, "-H")
    SP = SubgroupPresentation(P, H)
    emit("basis", fmt_rows(H.rows))
    emit_block("presentation", format_presentation(SP.target))


def cmd_conj_elements(a, P):
    g = parse_element(P, a.g, a.format)
    h = parse_element(P, a.h, a.format)
    x, C = conjugacy_with_centralizer(P, g, h)
    emit("conjugate", "true" if x is not None else "false")
    if x is not None:
        if a.verify and P.conjugate(g, x) != h:
            raise AssertionError("witness failed verification")
        emit("witness", fmt_vec(x))
        emit("centralizer", fmt_rows(C.rows))
    if a.check and (T := _table(P)):
        _agree(bool(oracle.brute_conjugacy(T, [g], [h])) == (x is not None))
    return 0 if x is not None else NEGATIVE


def cmd_centralizer(a, P):
    gens = parse_list(P, a.H, a.format) + [parse_element(P, w, a.format) for w in a.words]
    if not gens:
        raise UsageError("give elements with -H or as arguments")
    C = centralizer(P, gens)
    emit("centralizer", fmt_rows(C.rows))
    if a.check and (T := _table(P)):
        _agree(_elements(T, C) == oracle.brute_centralizer(T, gens))


def cmd_kernel(a, P):
    phi = load_hom(a.hom, a.format, a.verify)
    emit("kernel", fmt_rows(phi.kernel().rows))


def cmd_preimage(a, P):
    phi = load_hom(a.hom, a.format, a.verify)
    h = parse_element(phi.codomain, a.word, a.format)
    k = phi.preimage(h)
    if k is None:
        emit("in_image", "false")
        return NEGATIVE
    emit("in_image", "true")
    emit("preimage", fmt_vec(k))


def _tuple_report(a, P, res, A, B, brute_key):
    emit("conjugate", "true" if res else "false")
    if res:
        emit("witness", fmt_vec(res.witness))
        emit(brute_key, fmt_rows(res.stabilizer.rows))
    if a.check and (T := _table(P)):
        xs = oracle.brute_conjugacy(T, A, B)
        ok = bool(xs) == bool(res)
        if res:
            ok = ok and _elements(T, res.stabilizer) == oracle.brute_centralizer(T, B)
        _agree(ok)
    return 0 if res else NEGATIVE


def cmd_conj_commuting_tuples(a, P):
    A, B = parse_list(P, a.A, a.format), parse_list(P, a.B, a.format)
    amb = full_form(P, parse_list(P, a.H, a.format)) if a.H else None
    try:
        res = conjugate_commuting_tuples(P, A, B, ambient=amb, verify=a.verify)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if amb is not None:
        a.check = False
    return _tuple_report(a, P, res, A, B, "centralizer")


def cmd_conj_tuples(a, P):
    A, B = parse_list(P, a.A, a.format), parse_list(P, a.B, a.format)
    if len(A) != len(B):
        raise UsageError("tuples must have equal length")
    return _tuple_report(a, P, conjugate_tuples(P, A, B, verify=a.verify), A, B, "centralizer")


def cmd_conj_subgroups(a, P):
    H = parse_subgroup(P, a.H, a.format, "-H")
    K = parse_subgroup(P, a.K, a.format, "-K")
    res = subgroup_conjugacy(P, H, K, verify=a.verify)
    emit("conjugate", "true" if res else "false")
    if res:
        emit("witness", fmt_vec(res.witness))
        emit("normalizer", fmt_rows(res.stabilizer.rows))
    if a.check and (T := _table(P)):
        He, Ke = _elements(T, H), _elements(T, K)
        ok = bool(oracle.brute_subgroup_conjugacy(T, He, Ke)) == bool(res)
        if res:
            ok = ok and _elements(T, res.stabilizer) == oracle.brute_normalizer(T, Ke)
        _agree(ok)
    return 0 if res else NEGATIVE


def cmd_normalizer(a, P):
    K = parse_subgroup(P, a.H, a.format, "-H")
    N = normalizer(P, K)
    emit("normalizer", fmt_rows(N.rows))
    if a.check and (T := _table(P)):
        _agree(_elements(T, N) == oracle.brute_normalizer(T, _elements(T, K)))


def cmd_coset_intersect(a, P):
    H = parse_subgroup(P, a.H, a.format, "-H")
    K = parse_subgroup(P, a.K, a.format, "-K")
    g1 = parse_element(P, a.g1, a.format)
    g2 = parse_element(P, a.g2, a.format)
    r = coset_intersection(P, g1, H, g2, K, verify=a.verify)
    if r.empty:
        emit("empty", "true")
    else:
        emit("representative", fmt_vec(r.representative))
        emit("intersection", fmt_rows(r.intersection.rows))
    if a.check and (T := _table(P)):
        brute = oracle.brute_coset_intersection(T, g1, _elements(T, H), g2, _elements(T, K))
        if r.empty:
            _agree(not brute)
        else:
            I = _elements(T, r.intersection)
            _agree(brute == frozenset(T.mul(r.representative, x) for x in I))
    return NEGATIVE if r.empty else 0


def cmd_intersect(a, P):
    H = parse_subgroup(P, a.H, a.format, "-H")
    K = parse_subgroup(P, a.K, a.format, "-K")
    I = subgroup_intersection(P, H, K)
    emit("intersection", fmt_rows(I.rows))
    if a.check and (T := _table(P)):
        _agree(_elements(T, I) == _elements(T, H) & _elements(T, K))


def cmd_torsion(a, P):
    t = torsion_subgroup(P)
    emit("order", t.order)
    emit("subgroup", fmt_rows(t.subgroup.rows))
    emit("iterations", t.iterations)
    emit_block("presentation", format_presentation(t.presentation.target))
    if a.check and (T := _table(P)):
        _agree(_elements(T, t.subgroup) == oracle.brute_torsion(T) and t.order == T.order)


def cmd_isolator(a, P):
    H = parse_subgroup(P, a.H, a.format, "-H")
    I = isolator(P, H)
    emit("isolator", fmt_rows(I.rows))
    if a.check and (T := _table(P)):
        _agree(_elements(T, I) == oracle.brute_isolator(T, _elements(T, H)))


def cmd_build_presentation(a, P_unused):
    if a.p is None:
        raise UsageError("a finite presentation is required (-p)")
    F = parse_finite_presentation(_read_arg(a.p))
    conv = build_nilpotent_presentation(F, a.c, verify=a.verify)
    emit_block("presentation", format_presentation(conv.target))
    for name, v in zip(F.names, conv.embed):
        emit(f"embed[{name}]", fmt_vec(v))
    for k, w in enumerate(conv.phi):
        emit(f"phi[a{k + 1}]", w.to_text(list(F.names)))


def cmd_check(a, P):
    ok = P.check_consistency()
    emit("consistent", "true" if ok else "false")
    return 0 if ok else NEGATIVE


# ----------------------------------------------------------------------
# benchmarks


HEISENBERG = NilpotentPresentation([None] * 3, {(0, 1): {2: -1}})


def doubling_slp(M: int) -> StraightLineProgram:
    """``A1 = a1, A2 = a2, A3 = A1 A2, A_(k+1) = A_k A_(k-1) ...``: size ``M``, length about ``3^(M/2)``."""
    rules: list = [("gen", 1, 1), ("gen", 2, 1)]
    rules.append((0, 1))
    while len(rules) < M:
        k = len(rules)
        rules.append((k - 1, k - 2) if k % 2 else (k - 1, k - 1))
    return StraightLineProgram(tuple(rules[:max(M, 1)]))


def random_word(m: int, L: int, rng: random.Random) -> Word:
    return Word((rng.randrange(1, m + 1), rng.choice((-1, 1))) for _ in range(L))


def time_normal_form(P, family: str, size: int, rng: random.Random, repeat: int = 3) -> float:
    if family == "slp":
        w = doubling_slp(size)
    else:
        w = random_word(P.m, size, rng)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        P.evaluate(w)
        best = min(best, time.perf_counter() - t0)
    return best


def cmd_bench(a, P):
    P = P or HEISENBERG
    sizes = [int(s) for s in a.sizes.split(",") if s.strip()] if a.sizes else []
    rng = random.Random(a.seed)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["size", "seconds"])
    pts = []
    for s in sizes:
        t = time_normal_form(P, a.family, s, rng)
        pts.append((s, t))
        out.writerow([s, f"{t:.6g}"])
    if len(pts) >= 2 and a.slope:
        import math
        xs = [math.log(s) for s, _ in pts]
        ys = [math.log(max(t, 1e-9)) for _, t in pts]
        print(f"# log-log slope {statistics.linear_regression(xs, ys).slope:.3f}", file=sys.stderr)


# ----------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilkit", description="Algorithms for finitely generated nilpotent groups.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", metavar="PRESENTATION", help="presentation file or inline text")
    common.add_argument("--format", choices=("plain", "binexp", "coords", "slp"), default="plain",
                        help="encoding of word arguments")
    common.add_argument("--check", action="store_true", help="cross-check against brute force (finite groups)")
    common.add_argument("--no-verify", dest="verify", action="store_false",
                        help="skip postcondition verification")
    sub = ap.add_subparsers(dest="cmd", required=True, metavar="COMMAND")

    def add(name, fn, help_, *args):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for arg in args:
            sp.add_argument(*arg[0], **arg[1])
        sp.set_defaults(fn=fn)
        return sp

    H = (("-H",), dict(metavar="SUBGROUP", help="file or ';'-separated generators"))
    K = (("-K",), dict(metavar="SUBGROUP"))
    add("normal-form", cmd_normal_form, "collect a word", (("word",), {}))
    add("multiply", cmd_multiply, "product of two elements", (("u",), {}), (("v",), {}))
    add("power", cmd_power, "integer power", (("u",), {}), (("n",), dict(type=int)))
    add("full-form", cmd_full_form, "full-form sequence of a subgroup", H)
    add("membership", cmd_membership, "constructive membership", H, (("word",), {}))
    add("subgroup-presentation", cmd_subgroup_presentation, "presentation of a subgroup", H)
    add("conj-elements", cmd_conj_elements, "conjugacy of two elements", (("g",), {}), (("h",), {}))
    add("centralizer", cmd_centralizer, "centralizer of elements", H, (("words",), dict(nargs="*")))
    add("kernel", cmd_kernel, "kernel of a homomorphism", (("--hom",), dict(required=True)))
    add("preimage", cmd_preimage, "preimage under a homomorphism",
        (("--hom",), dict(required=True)), (("word",), {}))
    tup = ((("-A",), dict(required=True)), (("-B",), dict(required=True)))
    add("conj-commuting-tuples", cmd_conj_commuting_tuples, "conjugacy of commuting tuples", *tup,
        (("-H",), dict(metavar="AMBIENT", help="ambient subgroup")))
    add("conj-tuples", cmd_conj_tuples, "simultaneous conjugacy of tuples", *tup)
    add("conj-subgroups", cmd_conj_subgroups, "subgroup conjugacy and normalizer", H, K)
    add("normalizer", cmd_normalizer, "normalizer of a subgroup", H)
    add("coset-intersect", cmd_coset_intersect, "intersection of g1 H and g2 K", H, K,
        (("-g1",), dict(default="")), (("-g2",), dict(default="")))
    add("intersect", cmd_intersect, "intersection of subgroups", H, K)
    add("torsion", cmd_torsion, "torsion subgroup and its order")
    add("isolator", cmd_isolator, "isolator of a subgroup", H)
    add("build-presentation", cmd_build_presentation, "nilpotent presentation from 'group x y | ...'",
        (("-c",), dict(type=int, default=None, help="class bound (detected when omitted)")))
    add("bench", cmd_bench, "time normal forms over a size sweep (CSV)",
        (("--family",), dict(choices=("slp", "plain"), default="slp")),
        (("--sizes",), dict(default="", help="comma-separated sizes")),
        (("--seed",), dict(type=int, default=0)),
        (("--slope",), dict(action="store_true", help="report the log-log slope on stderr")))
    add("check", cmd_check, "consistency of a presentation")
    return ap


_NO_PRESENTATION = {"build-presentation", "kernel", "preimage", "bench"}


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and USAGE
    try:
        P = None
        if a.cmd not in _NO_PRESENTATION or (a.cmd == "bench" and a.p):
            P = load_presentation(a.p)
        rc = a.fn(a, P)
        return rc or 0
    except (UsageError, ParseError, ClassBoundError, ValueError, OSError) as exc:
        print(f"nilkit: error: {exc}", file=sys.stderr)
        return USAGE
    except AssertionError as exc:
        print(f"nilkit: internal check failed: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
