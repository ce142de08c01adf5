"""Command line: JSON documents in, JSON verdicts (or SVG) out.

Exit codes: 0 success, 1 semantic failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from .core import Gamble, Space
from .engine import (
    BACKGROUNDS,
    Assessment,
    background,
    classify,
    is_coherent,
    is_deductively_closable,
    maximal_completion,
    natural_extension,
)
from .engine import NINE_CLASS_NAMES
from .errors import Confused, NoRespect, NotClosable, SemanticFailure
from .frameworks import FiAssessment, fi_natural_extension, favourability_extension
from .plot import PlotError, render_svg
from .previsions import LowerPrevision, avoids_sure_loss, is_coherent_lpr, natural_extension_value
from .ratlp import LpInputError, as_rational
from .relations import relate
from .symmetry import (
    PermutationGroup,
    Transformation,
    indifference_span,
    invariant_atoms,
    monoid_closure,
    symmetry_background,
)

__all__ = ["Document", "DocumentError", "main", "run"]

OK, SEMANTIC, INPUT = 0, 1, 2
POLICIES = {"accept-first": "accept_first", "reject-first": "reject_first"}


class DocumentError(ValueError):
    """Malformed document: bad JSON, unknown id, float value, wrong length."""


def q(x: Fraction) -> str:
    return str(x)


def gamble_json(g: Gamble, normalise: bool = False) -> list:
    if normalise and not g.is_zero():
        g = g.normalized()
    return [q(v) for v in g.values]


class Document:
    """A parsed input document.

    Keys: ``space`` (atom names), ``gambles`` (id -> list of rationals),
    ``accepted``/``rejected`` or ``favourable``/``indifferent`` (lists of ids
    or inline gambles), ``background``, ``previsions`` (entries with
    ``gamble`` and ``lower``), ``transformations`` (atom-name lists, the image
    of each atom), ``queries`` and ``pairs``.
    """

    KEYS = {"space", "gambles", "accepted", "rejected", "favourable", "indifferent", "background",
            "previsions", "transformations", "queries", "pairs", "model"}

    def __init__(self, raw: dict):
        if not isinstance(raw, dict):
            raise DocumentError("document must be a JSON object")
        unknown = set(raw) - self.KEYS
        if unknown:
            raise DocumentError(f"unknown keys {sorted(unknown)}")
        atoms = raw.get("space")
        if not isinstance(atoms, list) or not atoms or not all(isinstance(a, str) for a in atoms):
            raise DocumentError("'space' must be a nonempty list of atom names")
        try:
            self.space = Space(atoms)
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
        self.named = {}
        gambles = raw.get("gambles", {})
        if not isinstance(gambles, dict):
            raise DocumentError("'gambles' must map ids to value lists")
        for k, v in gambles.items():
            self.named[k] = self._values(v, k)
        self.accepted = self._refs(raw, "accepted")
        self.rejected = self._refs(raw, "rejected")
        self.favourable = self._refs(raw, "favourable")
        self.indifferent = self._refs(raw, "indifferent")
        if (self.favourable or self.indifferent or "favourable" in raw or "indifferent" in raw) and (
                "accepted" in raw or "rejected" in raw):
            raise DocumentError("use accepted/rejected or favourable/indifferent, not both")
        self.fi = "favourable" in raw or "indifferent" in raw
        self.background = raw.get("background", "trivial")
        if self.background not in BACKGROUNDS:
            raise DocumentError(f"unknown background {self.background!r}")
        self.queries = self._refs(raw, "queries")
        self.query_labels = [self._label(x) for x in raw.get("queries", [])]
        pairs = raw.get("pairs", [])
        if not isinstance(pairs, list) or any(not isinstance(p, list) or len(p) != 2 for p in pairs):
            raise DocumentError("'pairs' must be a list of two-element lists")
        self.pairs = [(self._ref(a), self._ref(b)) for a, b in pairs]
        self.pair_labels = [(self._label(a), self._label(b)) for a, b in pairs]
        self.previsions = []
        for e in raw.get("previsions", []):
            if not isinstance(e, dict) or set(e) != {"gamble", "lower"}:
                raise DocumentError("prevision entries need exactly 'gamble' and 'lower'")
            self.previsions.append((self._ref(e["gamble"]), self._rational(e["lower"])))
        self.transformations = []
        for t in raw.get("transformations", []):
            if not isinstance(t, list) or len(t) != self.space.dim:
                raise DocumentError("each transformation lists the image of every atom")
            try:
                self.transformations.append(Transformation([self.space.atoms.index(a) for a in t]))
            except (KeyError, ValueError) as exc:
                raise DocumentError(f"unknown atom in transformation {t}") from exc

    def _rational(self, x) -> Fraction:
        if isinstance(x, (float, bool)):
            raise DocumentError(f"rationals must be written as \"p/q\" strings, not {x!r}")
        try:
            return as_rational(x)
        except LpInputError as exc:
            raise DocumentError(str(exc)) from exc

    def _values(self, v, name) -> Gamble:
        if not isinstance(v, list) or len(v) != self.space.dim:
            raise DocumentError(f"gamble {name!r} needs {self.space.dim} values")
        return Gamble(self.space, [self._rational(x) for x in v])

    def _ref(self, x) -> Gamble:
        if isinstance(x, str):
            if x not in self.named:
                raise DocumentError(f"unknown gamble id {x!r}")
            return self.named[x]
        return self._values(x, "inline")

    def _label(self, x) -> str:
        return x if isinstance(x, str) else ",".join(str(self._rational(v)) for v in x)

    def _refs(self, raw, key) -> list:
        items = raw.get(key, [])
        if not isinstance(items, list):
            raise DocumentError(f"{key!r} must be a list")
        return [self._ref(x) for x in items]

    def assessment(self) -> Assessment:
        if self.fi:
            return FiAssessment(self.space, self.favourable, self.indifferent).assessment()
        return Assessment(self.space, self.accepted, self.rejected)

    def bg(self):
        return background(self.space, self.background)

    def model(self):
        """The natural extension of the document's assessment (FI documents: M≃/M≻ form)."""
        if self.fi:
            return fi_natural_extension(FiAssessment(self.space, self.favourable, self.indifferent))
        return natural_extension(self.assessment(), self.bg())


# --------------------------------------------------------------------------
# verbs


def cmd_check(doc: Document):
    a = doc.assessment()
    s = doc.bg()
    w = a.confusion_witness()
    out = {"confusion_free": w is None}
    witnesses = {}
    if w is not None:
        witnesses["confusion"] = gamble_json(w, True)
    cl = is_deductively_closable(a)
    out["closable"] = cl.closable
    if not cl.closable:
        witnesses["closable"] = gamble_json(cl.witness, True)
    code = OK
    try:
        doc.model()
        out["respects_background"] = True
    except (NoRespect, NotClosable) as exc:
        out["respects_background"] = False
        witnesses["respects_background"] = gamble_json(exc.witness, True)
        code = SEMANTIC
    if not cl.closable:
        code = SEMANTIC
    if code == OK:
        subject = a if (a.accepted or a.rejected) else s
        coh = is_coherent(subject, s)
        out["coherent"] = coh.coherent
        if not coh.coherent:
            witnesses["coherent"] = gamble_json(coh.witness, True) if coh.witness is not None else coh.reason
    else:
        out["coherent"] = False
    out["witnesses"] = witnesses
    return out, code


def model_dump(doc: Document, m) -> dict:
    out = {"space": list(doc.space.atoms)}
    if doc.fi:
        fav = list(m.favourable)
        ind = list(m.indifferent)
        names = {}
        for prefix, gs in (("f", fav), ("i", ind)):
            for k, g in enumerate(gs, 1):
                names[f"{prefix}{k}"] = g
        out["gambles"] = {k: gamble_json(g) for k, g in names.items()}
        out["favourable"] = [f"f{k}" for k in range(1, len(fav) + 1)]
        out["indifferent"] = [f"i{k}" for k in range(1, len(ind) + 1)]
    else:
        acc, rej = list(m.accepted_gens), list(m.rejected_gens)
        gs = {}
        for k, g in enumerate(acc, 1):
            gs[f"a{k}"] = gamble_json(g)
        for k, g in enumerate(rej, 1):
            gs[f"r{k}"] = gamble_json(g)
        out["gambles"] = gs
        out["accepted"] = [f"a{k}" for k in range(1, len(acc) + 1)]
        out["rejected"] = [f"r{k}" for k in range(1, len(rej) + 1)]
    out["background"] = doc.background
    out["model"] = {
        "origin": m.origin,
        "accepted_pieces": [piece_json(p) for p in m.accepted_region.pieces],
        "rejected_pieces": [piece_json(p) for p in m.rejected_region.pieces],
    }
    return out


def piece_json(p) -> dict:
    """Exact lifted form: offset + combination of columns (free, nonnegative, strict groups)."""
    d = {"kind": p.kind}
    if p.gens:
        d["generators"] = [[q(x) for x in g] for g in p.gens]
    if any(p.offset):
        d["offset"] = [q(x) for x in p.offset]
    d["columns"] = [[q(x) for x in c] for c in p.cols]
    if any(p.free):
        d["free"] = [i for i, f in enumerate(p.free) if f]
    if p.strict:
        d["strict"] = [list(g) for g in p.strict]
    if p.links:
        d["links"] = [{"row": [q(x) for x in a], "rhs": q(b)} for a, b in p.links]
    return d


def cmd_extend(doc: Document):
    try:
        m = doc.model()
    except (NoRespect, NotClosable) as exc:
        return {"error": type(exc).__name__, "witness": gamble_json(exc.witness, True)}, SEMANTIC
    return model_dump(doc, m), OK


def _record(rec) -> dict:
    return {
        "status": rec.status,
        "nine_class": rec.nine_class,
        "nine_class_name": NINE_CLASS_NAMES[rec.nine_class] if rec.nine_class is not None else None,
        "accepted": rec.accepted,
        "rejected": rec.rejected,
        "indifferent": rec.indifferent,
        "favourable": rec.favourable,
        "indeterminate": rec.indeterminate,
    }


def cmd_query(doc: Document, policy: Optional[str] = None):
    try:
        m = doc.model()
        if policy is not None:
            m = maximal_completion(doc.assessment(), doc.queries, POLICIES[policy], doc.bg())
    except (NoRespect, NotClosable) as exc:
        return {"error": type(exc).__name__, "witness": gamble_json(exc.witness, True)}, SEMANTIC
    gambles = []
    for label, g in zip(doc.query_labels, doc.queries):
        gambles.append({"gamble": label, "values": gamble_json(g), **_record(classify(m, g))})
    pairs = []
    for (la, lb), (f, g) in zip(doc.pair_labels, doc.pairs):
        v = relate(m, f, g)
        pairs.append({"pair": [la, lb], "accept_exchange": v.accept_exchange, "unpreferred": v.unpreferred,
                      "indifferent": v.indifferent, "preferred": v.preferred, "uncomparable": v.uncomparable})
    out = {"gambles": gambles}
    if pairs:
        out["pairs"] = pairs
    if policy is not None:
        out["policy"] = policy
    return out, OK


def cmd_prevision(doc: Document):
    if not doc.previsions:
        raise DocumentError("no prevision entries")
    try:
        lp = LowerPrevision(doc.space, doc.previsions)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    v = avoids_sure_loss(lp)
    if not v.avoids:
        return {"asl": False, "certificate": [q(x) for x in v.certificate],
                "witness": gamble_json(v.witness)}, SEMANTIC
    ext = [{"gamble": label, "value": q(natural_extension_value(lp, g))}
           for label, g in zip(doc.query_labels, doc.queries)]
    return {"asl": True, "coherent": is_coherent_lpr(lp), "extensions": ext}, OK


def cmd_sym(doc: Document):
    if not doc.transformations:
        raise DocumentError("no transformations")
    mon = monoid_closure(doc.transformations, size=doc.space.dim)
    out = {"monoid_size": len(mon), "group": isinstance(mon, PermutationGroup),
           "indifference_span": [gamble_json(g, True) for g in indifference_span(mon, doc.space)]}
    if isinstance(mon, PermutationGroup):
        out["invariant_atoms"] = [list(o) for o in invariant_atoms(mon, doc.space)]
    try:
        s = symmetry_background(mon, doc.space)
    except Confused as exc:
        out["valid"] = False
        out["certificate"] = gamble_json(exc.witness, True)
        return out, SEMANTIC
    out["valid"] = True
    if doc.favourable:
        try:
            m = favourability_extension(doc.favourable, s)
        except NoRespect as exc:
            out["respects_background"] = False
            out["witness"] = gamble_json(exc.witness, True)
            return out, SEMANTIC
        out["respects_background"] = True
        out["queries"] = [{"gamble": label, "values": gamble_json(g), **_record(classify(m, g))}
                          for label, g in zip(doc.query_labels, doc.queries)]
    return out, OK


def cmd_plot(doc: Document) -> tuple:
    if doc.space.dim != 2:
        raise DocumentError(f"plots need exactly two atoms, not {doc.space.dim}")
    try:
        m = doc.model()
    except (NoRespect, NotClosable) as exc:
        return None, SEMANTIC, exc
    try:
        return render_svg(m), OK, None
    except PlotError as exc:
        raise DocumentError(str(exc)) from exc


# --------------------------------------------------------------------------
# driver


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acceptreject", description="Exact accept-reject models from JSON documents.")
    p.add_argument("verb", choices=["check", "extend", "query", "prevision", "sym", "plot"])
    p.add_argument("document", help="JSON document path, or - for stdin")
    p.add_argument("--background", choices=list(BACKGROUNDS), help="override the document's background")
    p.add_argument("--policy", choices=list(POLICIES), help="complete the model over the queries first")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    return p


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT if exc.code else OK
    try:
        if args.document == "-":
            raw = json.load(sys.stdin)
        else:
            with open(args.document, encoding="utf-8") as fh:
                raw = json.load(fh)
        if args.background is not None and isinstance(raw, dict):
            raw = dict(raw, background=args.background)
        doc = Document(raw)
        if args.verb == "plot":
            text, code, exc = cmd_plot(doc)
            if text is None:
                text = dumps({"error": type(exc).__name__, "witness": gamble_json(exc.witness, True)})
        else:
            if args.verb == "check":
                obj, code = cmd_check(doc)
            elif args.verb == "extend":
                obj, code = cmd_extend(doc)
            elif args.verb == "query":
                obj, code = cmd_query(doc, args.policy)
            elif args.verb == "prevision":
                obj, code = cmd_prevision(doc)
            else:
                obj, code = cmd_sym(doc)
            text = dumps(obj)
    except (OSError, json.JSONDecodeError, DocumentError) as exc:
        print(f"acceptreject: input error: {exc}", file=stderr)
        return INPUT
    except SemanticFailure as exc:  # pragma: no cover - verbs report their own failures
        print(f"acceptreject: {exc}", file=stderr)
        return SEMANTIC
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
