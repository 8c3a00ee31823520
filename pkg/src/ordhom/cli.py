"""``ordhom`` command line.

Exit codes: 0 everything passed, 1 an axiom or comparison failed,
2 bad input or a refused computation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from typing import Any

from . import axioms, exactness
from .algebra import ZZ, FgModule, RingSpec
from .complexes import homology, homology_with_coefficients
from .corpus import Corpus, CorpusError, golden_path, parse_corpus
from .errors import OrdhomError, RefusedComputation
from .spaces import chain_complex, cw_chain_complex, relative_chain_complex, skeletal_filtration

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
THREADS_ENV = "ORDHOM_THREADS"


def dump_json(obj: Any) -> str:
    """Canonical rendering: sorted keys, fixed indentation, integers only."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise CorpusError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _complex_for(corpus: Corpus, name: str, ring: RingSpec):
    item = corpus.get(name, "delta_complex", "poset", "cw_complex", "pair")
    if item.kind == "cw_complex":
        return cw_chain_complex(item.value, ring)
    if item.kind == "pair":
        return relative_chain_complex(item.value, ring)
    return chain_complex(corpus.space(name), ring)


def cmd_homology(args, corpus: Corpus) -> tuple[int, dict, str]:
    ring = RingSpec.parse(args.ring)
    if args.coefficients:
        if ring != ZZ:
            raise CorpusError("--coefficients needs --ring Z")
        coeff = FgModule.parse(args.coefficients)
        h = homology_with_coefficients(_complex_for(corpus, args.item, ZZ), coeff)
        over = f"Z, coefficients {coeff}"
    else:
        h = homology(_complex_for(corpus, args.item, ring))
        over = str(ring)
    payload = {"item": args.item, "ring": over, "homology": [str(m) for m in h.modules]}
    text = "\n".join([f"{args.item} over {over}"] + [f"  H_{n} = {m}" for n, m in enumerate(h.modules)])
    return EXIT_OK, payload, text


def _les_payload(les, name: str) -> tuple[int, dict, str]:
    data = les.to_json()
    data["item"] = name
    lines = [f"{name}: {'exact' if data['exact'] else 'NOT exact'}"]
    for term, m in zip(data["terms"], data["maps"] + [None]):
        lines.append(f"  {term['label']:>12} = {term['module']}")
        if m is not None and m["matrix"] and m["matrix"][0]:
            lines.append(f"  {'':>12}   | {m['matrix']}")
    return (EXIT_OK if data["exact"] else EXIT_FAIL), data, "\n".join(lines)


def cmd_pair_les(args, corpus: Corpus):
    return _les_payload(exactness.pair_les(corpus.get(args.item, "pair").value, RingSpec.parse(args.ring)), args.item)


def cmd_mayer_vietoris(args, corpus: Corpus):
    s = corpus.get(args.item, "cover").value
    return _les_payload(exactness.mayer_vietoris(s, RingSpec.parse(args.ring)), args.item)


def cmd_excision(args, corpus: Corpus):
    rep = exactness.excision_compare(corpus.get(args.item, "cover").value, RingSpec.parse(args.ring))
    data = rep.to_json()
    data["item"] = args.item
    lines = [f"{args.item}: {'all isomorphisms' if rep.passed else 'FAILED'}"]
    lines += [f"  H_{d['degree']}(U, U∩V) = {d['source']} -> H_{d['degree']}(X, V) = {d['target']}: "
              f"{'iso' if d['isomorphism'] else 'not iso'}" for d in data["degrees"]]
    return (EXIT_OK if rep.passed else EXIT_FAIL), data, "\n".join(lines)


def cmd_cellular(args, corpus: Corpus):
    ring = RingSpec.parse(args.ring)
    item = corpus.get(args.item, "filtration", "delta_complex", "poset")
    filt = item.value if item.kind == "filtration" else skeletal_filtration(corpus.space(args.item))
    cell = axioms.cellular_complex(filt, ring)
    c = cell.complex
    data = {"item": args.item, "ring": str(ring), "ranks": list(c.ranks),
            "differentials": [[list(r) for r in m.data] for m in c.boundaries]}
    lines = [f"{args.item}: cellular ranks {list(c.ranks)}"]
    lines += [f"  d_{n} = {[list(r) for r in m.data]}" for n, m in enumerate(c.boundaries, start=1)]
    code = EXIT_OK
    if args.compare:
        res = axioms.compare_cellular_vs_direct(filt, ring, args.item)
        data["compare"] = {"passed": res.passed, "homology": res.witness["homology"], "failures": res.witness["failures"]}
        lines.append(f"  cellular vs direct: {'agree' if res.passed else 'DISAGREE'} ({', '.join(res.witness['homology'])})")
        code = EXIT_OK if res.passed else EXIT_FAIL
    return code, data, "\n".join(lines)


def cmd_degree(args, corpus: Corpus):
    d = axioms.degree(corpus.get(args.item, "map").value)
    return EXIT_OK, {"item": args.item, "degree": d}, f"{args.item}: degree {d}"


def cmd_verify(args, corpus: Corpus):
    ring = RingSpec.parse(args.ring)
    rep = axioms.full_report(corpus, ring, _threads())
    data = rep.to_json()
    if not args.timings:
        for r in data["results"]:
            r.pop("elapsed_us")
    lines = [f"{r.axiom:<20} {r.subject:<24} {'pass' if r.passed else 'FAIL'}" for r in rep.results]
    lines += [f"warning: {w}" for w in rep.warnings]
    lines.append(f"{len(rep.results) - len(rep.failures())}/{len(rep.results)} checks passed over {ring}")
    return (EXIT_OK if rep.passed else EXIT_FAIL), data, "\n".join(lines)


def _corpus_path(name: str):
    """``golden`` / ``golden.json`` name the packaged corpus unless such a file exists locally."""
    if name in ("golden", "golden.json") and not os.path.exists(name):
        return golden_path()
    return name


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordhom", description="Exact homology and axiom verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, item_help="corpus item name"):
        p = sub.add_parser(name, help=help_)
        p.add_argument("item", help=item_help)
        p.add_argument("--ring", default="Z", help="Z, Q, Fp:p or Zm:m (default Z)")
        p.add_argument("--corpus", default=None, help="corpus JSON file (default: the packaged golden corpus)")
        p.add_argument("--emit", choices=("text", "json"), default="text")
        p.set_defaults(func=fn)
        return p

    add("homology", cmd_homology, "homology of a space, poset, CW complex or pair").add_argument(
        "--coefficients", default=None, help="coefficient group such as Z/6 or Z^2+Z/2")
    add("pair-les", cmd_pair_les, "certified long exact sequence of a pair")
    add("mayer-vietoris", cmd_mayer_vietoris, "certified Mayer-Vietoris sequence of a cover")
    add("excision", cmd_excision, "excision comparison for a cover")
    add("cellular", cmd_cellular, "cellular complex of a filtration (or skeletal filtration of a space)").add_argument(
        "--compare", action="store_true", help="also certify cellular = direct homology")
    add("degree", cmd_degree, "degree of a map between homology spheres")
    v = add("verify-axioms", cmd_verify, "run every check over a corpus", item_help="corpus JSON file")
    v.add_argument("--timings", action="store_true", help="include per-check runtimes (microseconds)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if args.command == "verify-axioms":
                corpus = parse_corpus(_corpus_path(args.item))
            else:
                corpus = parse_corpus(args.corpus or golden_path())
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        code, payload, text = args.func(args, corpus)
    except RefusedComputation as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OrdhomError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(dump_json(payload) if args.emit == "json" else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
