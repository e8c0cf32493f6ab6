"""Command line front end.

Every subcommand prints exactly one canonical JSON document on standard
output.  Results echo the inputs they were computed from and embed the
witnesses they produced (isomorphism matrices, move sequences), so a
result document fed back through ``validate`` is re-checked from
scratch, without trusting anything stored in it.

Exit codes: 0 success, 2 validation or schema failure, 3 search budget
exhausted, 4 hypothesis violation.  Failures name the offending
condition in the "error" field of the report.
"""

from __future__ import annotations

import argparse
import sys

from . import oracle
from .abelian import GroupHom, Z2
from .construct import metabolic_basis, ru_wall_witness, ru_word_eval, stable_lagrangian_iso
from .errors import (
    DimensionMismatch,
    HypothesisError,
    NoSolution,
    NodeLimitExceeded,
    NotASummand,
    NotWellDefined,
    SchemaError,
)
from .forms import form_validate, orthogonal_complement, subgroup_classify
from .intmat import IntMatrix
from .lmonoid import (
    bar_reduce,
    is_elementary,
    jacobi_witness,
    l_group_trivialize,
    replay,
    zero_formation,
)
from .serialize import (
    _as_dict,
    _as_int,
    _as_int_list,
    _get,
    canonical_dumps,
    form_from_doc,
    form_to_doc,
    formation_from_doc,
    formation_to_doc,
    group_from_doc,
    group_to_doc,
    iso_from_doc,
    iso_to_doc,
    loads_document,
    sequence_from_doc,
    sequence_to_doc,
    subgroup_from_doc,
    subgroup_to_doc,
    word_from_doc,
    word_to_doc,
)
from .stableclass import e_ab, kappa, kappa_ab, si_enumerate, stable_class_report

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_HYPOTHESIS = 4


# -- plumbing ----------------------------------------------------------


def _read_doc(args):
    if not args.input:
        raise SchemaError("", "this subcommand needs --input FILE")
    try:
        with open(args.input) as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError("", "cannot read input: %s" % exc) from None
    doc = loads_document(text)
    if args.strict and canonical_dumps(doc) != text:
        raise SchemaError("", "input is not in canonical form")
    return doc


def _budget(args) -> oracle.SearchBudget:
    base = oracle.default_budget()
    return oracle.SearchBudget(
        base.entry_bound if args.entry_bound is None else args.entry_bound,
        base.max_stab if args.max_stab is None else args.max_stab,
        base.node_limit if args.node_limit is None else args.node_limit,
    )


def _budget_doc(budget: oracle.SearchBudget) -> dict:
    return {
        "entry_bound": budget.entry_bound,
        "max_stab": budget.max_stab,
        "node_limit": budget.node_limit,
    }


def _budget_from_doc(doc, path: str) -> oracle.SearchBudget:
    d = _as_dict(doc, path)
    return oracle.SearchBudget(
        _as_int(_get(d, "entry_bound", path), path + ".entry_bound"),
        _as_int(_get(d, "max_stab", path), path + ".max_stab"),
        _as_int(_get(d, "node_limit", path), path + ".node_limit"),
    )


def _emit(payload: dict, args=None) -> None:
    text = canonical_dumps(payload)
    sys.stdout.write(text)
    if args is not None and args.output:
        with open(args.output, "w") as fh:
            fh.write(text)


# -- result builders ---------------------------------------------------
#
# Each builder takes the parsed input document (result documents echo
# their inputs under the same keys, so ``validate`` can recompute with
# the same code) and returns the full payload.


def _invariants_result(fdoc) -> dict:
    e = form_from_doc(fdoc, "input")
    rep = form_validate(e)
    return {
        "command": "invariants",
        "form": form_to_doc(e),
        "rank": rep.rank,
        "torsion": list(rep.torsion),
        "free": rep.free,
        "nonsingular": rep.nonsingular,
        "even": rep.even,
        "full": rep.full,
        "geometric": rep.geometric,
    }


def _perp_result(doc) -> dict:
    d = _as_dict(doc, "input")
    e = form_from_doc(_get(d, "form", "input"), "input.form")
    s = subgroup_from_doc(_get(d, "subgroup", "input"), e.group, "input.subgroup")
    return {
        "command": "perp",
        "form": form_to_doc(e),
        "subgroup": subgroup_to_doc(s),
        "perp": subgroup_to_doc(orthogonal_complement(e, s)),
    }


def _classify_result(doc) -> dict:
    d = _as_dict(doc, "input")
    e = form_from_doc(_get(d, "form", "input"), "input.form")
    s = subgroup_from_doc(_get(d, "subgroup", "input"), e.group, "input.subgroup")
    flags = subgroup_classify(e, s)
    return {
        "command": "classify",
        "form": form_to_doc(e),
        "subgroup": subgroup_to_doc(s),
        "isotropic": flags.isotropic,
        "mu_vanishes": flags.mu_vanishes,
        "half_rank_summand": flags.half_rank_summand,
        "free_lagrangian": flags.free_lagrangian,
        "t_lagrangian": flags.t_lagrangian,
    }


def _metabolic_basis_result(doc) -> dict:
    d = _as_dict(doc, "input")
    e = form_from_doc(_get(d, "form", "input"), "input.form")
    l = subgroup_from_doc(_get(d, "lagrangian", "input"), e.group, "input.lagrangian")
    mb = metabolic_basis(e, l)
    return {
        "command": "metabolic-basis",
        "form": form_to_doc(e),
        "lagrangian": subgroup_to_doc(l),
        "basis": mb.basis.tolist(),
        "diag": list(mb.diag),
    }


def _stable_iso_result(doc) -> dict:
    d = _as_dict(doc, "input")
    sd = _as_dict(_get(d, "source", "input"), "input.source")
    td = _as_dict(_get(d, "target", "input"), "input.target")
    e = form_from_doc(_get(sd, "form", "input.source"), "input.source.form")
    l = subgroup_from_doc(_get(sd, "lagrangian", "input.source"), e.group, "input.source.lagrangian")
    e2 = form_from_doc(_get(td, "form", "input.target"), "input.target.form")
    l2 = subgroup_from_doc(_get(td, "lagrangian", "input.target"), e2.group, "input.target.lagrangian")
    w = stable_lagrangian_iso(e, l, e2, l2)
    return {
        "command": "stable-iso",
        "source": {"form": form_to_doc(e), "lagrangian": subgroup_to_doc(l)},
        "target": {"form": form_to_doc(e2), "lagrangian": subgroup_to_doc(l2)},
        "k": w.k,
        "l": w.l,
        "iso": iso_to_doc(w.iso),
        "source_lagrangian": subgroup_to_doc(w.source_lagrangian),
        "target_lagrangian": subgroup_to_doc(w.target_lagrangian),
    }


def _ru_wall_result(doc) -> dict:
    d = _as_dict(doc, "input")
    e = form_from_doc(_get(d, "form", "input"), "input.form")
    l = subgroup_from_doc(_get(d, "lagrangian", "input"), e.group, "input.lagrangian")
    phi = iso_from_doc(_get(d, "iso", "input"), "input.iso")
    w = ru_wall_witness(e, l, phi)
    return {
        "command": "ru-wall",
        "form": form_to_doc(e),
        "lagrangian": subgroup_to_doc(l),
        "iso": iso_to_doc(phi),
        "ambient": form_to_doc(w.ambient),
        "ambient_lagrangian": subgroup_to_doc(w.lagrangian),
        "word": word_to_doc(w.word),
        "expected": iso_to_doc(w.expected),
    }


def _zero_form_result(doc) -> dict:
    d = _as_dict(doc, "input")
    g = group_from_doc(_get(d, "group", "input"), "input.group")
    row = _as_int_list(_get(d, "v", "input"), "input.v")
    if len(row) != g.num_gens:
        raise SchemaError("input.v", "expected %d entries" % g.num_gens)
    v = GroupHom(g, Z2, IntMatrix.from_rows([row], g.num_gens))
    q = zero_formation(g, v)
    return {
        "command": "zero-form",
        "group": group_to_doc(g),
        "v": list(row),
        "formation": formation_to_doc(q),
    }


def _bar_result(qdoc) -> dict:
    q = formation_from_doc(qdoc, "input")
    return {
        "command": "bar",
        "formation": formation_to_doc(q),
        "reduced": formation_to_doc(bar_reduce(q)),
    }


def _elementary_result(qdoc) -> dict:
    q = formation_from_doc(qdoc, "input")
    return {
        "command": "elementary",
        "formation": formation_to_doc(q),
        "elementary": is_elementary(q),
    }


def _ltriv_result(qdoc) -> dict:
    q = formation_from_doc(qdoc, "input")
    t = l_group_trivialize(q)
    return {
        "command": "ltriv",
        "formation": formation_to_doc(q),
        "common": subgroup_to_doc(t.common),
        "complement": subgroup_to_doc(t.complement),
        "zero_part": formation_to_doc(t.zero_part),
        "hyperbolic_part": formation_to_doc(t.hyperbolic_part),
        "hyperbolic_witness": iso_to_doc(t.hyperbolic_witness),
        "sequence": sequence_to_doc(t.sequence),
    }


def _jacobi_result(doc) -> dict:
    d = _as_dict(doc, "input")
    e = form_from_doc(_get(d, "form", "input"), "input.form")
    ks = subgroup_from_doc(_get(d, "K", "input"), e.group, "input.K")
    ls = subgroup_from_doc(_get(d, "L", "input"), e.group, "input.L")
    vs = subgroup_from_doc(_get(d, "V", "input"), e.group, "input.V")
    w = jacobi_witness(e, ks, ls, vs)
    return {
        "command": "jacobi",
        "form": form_to_doc(e),
        "K": subgroup_to_doc(ks),
        "L": subgroup_to_doc(ls),
        "V": subgroup_to_doc(vs),
        "pairs": w.pairs,
        "phi": iso_to_doc(w.phi),
        "sequence": sequence_to_doc(w.sequence),
        "start_padding": formation_to_doc(w.start_padding),
        "end_paddings": [formation_to_doc(p) for p in w.end_paddings],
    }


def _kappa_result(doc) -> dict:
    d = _as_dict(doc, "input")
    if "form" in d or "lambda" in d:
        # either a bare form document or an echo wrapping one under "form"
        fdoc = _get(d, "form", "input") if "form" in d else d
        e = form_from_doc(fdoc, "input.form" if "form" in d else "input")
        return {"command": "kappa", "form": form_to_doc(e), "kappa": form_to_doc(kappa(e))}
    a = _as_int(_get(d, "a", "input"), "input.a")
    b = _as_int(_get(d, "b", "input"), "input.b")
    shortcut = kappa_ab(a, b)
    direct = kappa(e_ab(a, b))
    return {
        "command": "kappa",
        "a": a,
        "b": b,
        "kappa": form_to_doc(shortcut),
        "direct": form_to_doc(direct),
        "agree": shortcut == direct,
    }


def _si_result(doc) -> dict:
    d = _as_dict(doc, "input")
    a = _as_int(_get(d, "a", "input"), "input.a")
    b = _as_int(_get(d, "b", "input"), "input.b")
    rep = si_enumerate(a, b)
    return {
        "command": "si",
        "a": a,
        "b": b,
        "size": rep.size,
        "reps": [list(p) for p in rep.representatives],
        "trace": list(rep.trace),
    }


def _stable_class_result(doc) -> dict:
    d = _as_dict(doc, "input")
    rkq = _as_int(_get(d, "rkq", "input"), "input.rkq")
    a = _as_int(d.get("a", 0), "input.a")
    b = _as_int(d.get("b", 0), "input.b")
    counts = stable_class_report(rkq, a, b)
    return {
        "command": "stable-class",
        "rkq": rkq,
        "a": a,
        "b": b,
        "Sst": counts.smoothings,
        "classes": counts.classes,
    }


def _oracle_lagrangians_result(fdoc, budget: oracle.SearchBudget) -> dict:
    e = form_from_doc(fdoc, "input")
    subs = oracle.enumerate_lagrangians(e, budget)
    return {
        "command": "oracle-lagrangians",
        "form": form_to_doc(e),
        "budget": _budget_doc(budget),
        "count": len(subs),
        "lagrangians": [subgroup_to_doc(s) for s in subs],
    }


def _oracle_iso_result(doc, budget: oracle.SearchBudget) -> dict:
    d = _as_dict(doc, "input")
    e = form_from_doc(_get(d, "source", "input"), "input.source")
    f = form_from_doc(_get(d, "target", "input"), "input.target")
    found = oracle.search_isomorphism(e, f, budget)
    return {
        "command": "oracle-iso",
        "source": form_to_doc(e),
        "target": form_to_doc(f),
        "budget": _budget_doc(budget),
        "found": found.iso is not None,
        "exhaustive": found.exhaustive,
        "nodes": found.nodes,
        "iso": iso_to_doc(found.iso) if found.iso is not None else None,
    }


def _oracle_si_result(doc) -> dict:
    d = _as_dict(doc, "input")
    a = _as_int(_get(d, "a", "input"), "input.a")
    b = _as_int(_get(d, "b", "input"), "input.b")
    rep = oracle.brute_si(a, b)
    return {
        "command": "oracle-si",
        "a": a,
        "b": b,
        "size": rep.size,
        "reps": [list(p) for p in rep.representatives],
    }


# -- validate ----------------------------------------------------------

_RECHECK = {
    "invariants": lambda d: _invariants_result(_get(d, "form", "input")),
    "perp": _perp_result,
    "classify": _classify_result,
    "metabolic-basis": _metabolic_basis_result,
    "stable-iso": _stable_iso_result,
    "ru-wall": _ru_wall_result,
    "zero-form": _zero_form_result,
    "bar": lambda d: _bar_result(_get(d, "formation", "input")),
    "elementary": lambda d: _elementary_result(_get(d, "formation", "input")),
    "ltriv": lambda d: _ltriv_result(_get(d, "formation", "input")),
    "jacobi": _jacobi_result,
    "kappa": _kappa_result,
    "si": _si_result,
    "stable-class": _stable_class_result,
    "oracle-lagrangians": lambda d: _oracle_lagrangians_result(
        _get(d, "form", "input"), _budget_from_doc(_get(d, "budget", "input"), "input.budget")
    ),
    "oracle-iso": lambda d: _oracle_iso_result(
        d, _budget_from_doc(_get(d, "budget", "input"), "input.budget")
    ),
    "oracle-si": _oracle_si_result,
}


def _validate_doc(doc):
    """Classify a document by shape and re-check it; returns (kind, ok, extra)."""
    d = _as_dict(doc, "input")
    if "command" in d:
        name = d["command"]
        if name == "validate":
            raise SchemaError("input.command", "validation reports are not re-checkable")
        recheck = _RECHECK.get(name)
        if recheck is None:
            raise SchemaError("input.command", "unknown command %r" % name)
        fresh = recheck(d)
        ok = canonical_dumps(fresh) == canonical_dumps(d)
        extra = {} if ok else {"reason": "stored results differ from recomputation"}
        return "%s result" % name, ok, extra
    if "lambda" in d:
        rep = form_validate(form_from_doc(d, "input"))
        return "form", True, {
            "rank": rep.rank,
            "torsion": list(rep.torsion),
            "free": rep.free,
            "nonsingular": rep.nonsingular,
            "even": rep.even,
            "full": rep.full,
            "geometric": rep.geometric,
        }
    if "form" in d and "L" in d and "V" in d:
        q = formation_from_doc(d, "input")
        return "formation", True, {"elementary": is_elementary(q)}
    if "source" in d and "matrix" in d:
        iso_from_doc(d, "input")
        return "iso", True, {}
    if "moves" in d:
        res = replay(sequence_from_doc(d, "input"))
        extra = {"steps": res.steps}
        if not res.ok:
            extra["failed_index"] = res.failed_index
            extra["reason"] = res.reason
        return "sequence", res.ok, extra
    if "letters" in d:
        word = word_from_doc(d, "input")
        ru_word_eval(word)
        return "word", True, {"letters": len(word.letters)}
    if "free_rank" in d:
        group_from_doc(d, "input")
        return "group", True, {}
    if "generators" in d:
        raise SchemaError("input", "a bare subgroup has no ambient group; embed it in a larger document")
    raise SchemaError("input", "unrecognized document shape")


# -- subcommand handlers -----------------------------------------------


def _cmd_validate(args):
    kind, ok, extra = _validate_doc(_read_doc(args))
    payload = {"command": "validate", "kind": kind, "ok": ok}
    payload.update(extra)
    return payload, (EXIT_OK if ok else EXIT_INVALID)


def _cmd_invariants(args):
    return _invariants_result(_read_doc(args))


def _cmd_perp(args):
    return _perp_result(_read_doc(args))


def _cmd_classify(args):
    return _classify_result(_read_doc(args))


def _cmd_metabolic_basis(args):
    return _metabolic_basis_result(_read_doc(args))


def _cmd_stable_iso(args):
    return _stable_iso_result(_read_doc(args))


def _cmd_ru_wall(args):
    return _ru_wall_result(_read_doc(args))


def _cmd_zero_form(args):
    return _zero_form_result(_read_doc(args))


def _cmd_bar(args):
    return _bar_result(_read_doc(args))


def _cmd_elementary(args):
    return _elementary_result(_read_doc(args))


def _cmd_ltriv(args):
    return _ltriv_result(_read_doc(args))


def _cmd_jacobi(args):
    return _jacobi_result(_read_doc(args))


def _cmd_kappa(args):
    if args.input:
        return _kappa_result(_read_doc(args))
    if args.a is None or args.b is None:
        raise SchemaError("", "kappa needs either --input FILE or both --a and --b")
    return _kappa_result({"a": args.a, "b": args.b})


def _cmd_si(args):
    return _si_result({"a": args.a, "b": args.b})


def _cmd_stable_class(args):
    return _stable_class_result({"rkq": args.rkq, "a": args.a, "b": args.b})


def _cmd_oracle_lagrangians(args):
    return _oracle_lagrangians_result(_read_doc(args), _budget(args))


def _cmd_oracle_iso(args):
    return _oracle_iso_result(_read_doc(args), _budget(args))


def _cmd_oracle_si(args):
    return _oracle_si_result({"a": args.a, "b": args.b})


# -- parser ------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qform",
        description="Exact computations with extended quadratic forms and quasi-formations.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="FILE", help="JSON input document")
    common.add_argument("--output", metavar="FILE", help="also write the result here")
    common.add_argument("--entry-bound", type=int, default=None, metavar="N",
                        help="largest matrix entry tried by oracle searches")
    common.add_argument("--max-stab", type=int, default=None, metavar="N",
                        help="largest number of stabilizing planes tried")
    common.add_argument("--node-limit", type=int, default=None, metavar="N",
                        help="search node budget (default from QFORM_NODE_LIMIT)")
    common.add_argument("--strict", action="store_true",
                        help="reject input files that are not canonical JSON")

    sub = parser.add_subparsers(dest="cmd", required=True, metavar="command")

    def add(name, handler, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    add("validate", _cmd_validate, "re-check any document produced by this tool")
    add("invariants", _cmd_invariants, "evaluate all predicates of a form")
    add("perp", _cmd_perp, "orthogonal complement of a subgroup")
    add("classify", _cmd_classify, "isotropy/lagrangian flags of a subgroup")
    add("metabolic-basis", _cmd_metabolic_basis, "normal basis [[0,I],[I,D]] for a metabolic form")
    add("stable-iso", _cmd_stable_iso, "stable isomorphism matching two lagrangians")
    add("ru-wall", _cmd_ru_wall, "word in Keep/Flip letters evaluating to phi + phi^-1 + id")
    add("zero-form", _cmd_zero_form, "the zero-class quasi-formation of a coefficient group")
    add("bar", _cmd_bar, "reduce a quasi-formation modulo carrier torsion")
    add("elementary", _cmd_elementary, "test whether a quasi-formation splits as L + V")
    add("ltriv", _cmd_ltriv, "split an invertible class into zero and hyperbolic parts")

    p = add("jacobi", _cmd_jacobi, "move certificate for the triple composition identity")

    p = add("kappa", _cmd_kappa, "form induced on the perp of ker mu")
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--b", type=int, default=None)

    p = add("si", _cmd_si, "stable classes of the twisted plane E_{a,b}")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)

    p = add("stable-class", _cmd_stable_class, "stable smoothing counts by coefficient rank")
    p.add_argument("--rkq", type=int, required=True, choices=(0, 1, 2))
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=0)

    add("oracle-lagrangians", _cmd_oracle_lagrangians, "bounded search for free lagrangians")
    add("oracle-iso", _cmd_oracle_iso, "bounded search for an isomorphism of forms")

    p = add("oracle-si", _cmd_oracle_si, "divisor-scan cross-check of the si enumeration")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)

    return parser


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        result = args.handler(args)
    except SchemaError as exc:
        _emit({"error": str(exc), "path": exc.path})
        return EXIT_INVALID
    except NodeLimitExceeded as exc:
        _emit({"error": str(exc)})
        return EXIT_BUDGET
    except HypothesisError as exc:
        _emit({"error": exc.condition, "detail": str(exc)})
        return EXIT_HYPOTHESIS
    except NoSolution as exc:
        _emit({"error": str(exc)})
        return EXIT_HYPOTHESIS
    except (DimensionMismatch, NotASummand, NotWellDefined) as exc:
        _emit({"error": str(exc)})
        return EXIT_INVALID
    payload, code = result if isinstance(result, tuple) else (result, EXIT_OK)
    _emit(payload, args)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
