"""Batch front end: load one workspace file, run one command, print one
deterministic report.

Exit codes: 0 the verdict holds (or the command succeeded), 1 it fails
(or the input is invalid), 2 the engine could not decide within the
horizon.  Reports are plain text by default and a stable JSON document
under --json: iteration orders are fixed by the workspace, keys are
sorted, so identical inputs give byte-identical bytes.  --replay takes
a previously saved JSON report, recomputes it, verifies the stored
verdict and witness against the fresh run, and re-derives constructive
certificates where the command emits one."""

import argparse
import json
import os
import sys

from .cat import CatError, Morphism, MorphismFamily
from .eventual import PeriodicSeq
from .invsys import InvSysError, rudimentary
from .jmor import (JmorError, JMorphism, check_jmorphism, classify_jmorphism,
                   collapse_to_pro, compose_jmorphisms, equivalent_jmorphisms,
                   identity_jmorphism, simplify, transfer)
from .order import IndexFunction, PosetError
from .procat import (ProcatError, hom_classes, level_pair, morita_check,
                     morita_inverse, morita_witness, reindex, tower_iso_check)
from .shape import (Expansion, NotUniformlyFactorizable, POINT, ShapeError,
                    check_expansion, lift_system_morphism, same_shape_on_d,
                    shape_morphism)
from .workspace import WorkspaceError, load_workspace

SCHEMA = "proshape-report/1"
DEFAULT_HORIZON = 64
DEFAULT_BUDGET = 10**6
HORIZON_ENV = "PROSHAPE_HORIZON"

_ERRORS = (WorkspaceError, CatError, PosetError, InvSysError, JmorError,
           ProcatError, ShapeError, NotUniformlyFactorizable)


def _plain(x):
  """JSON-ready copy: stringified keys, tuples to lists, describe() for
  engine values."""
  if isinstance(x, dict):
    return {str(k): _plain(v) for k, v in x.items()}
  if isinstance(x, (list, tuple)):
    return [_plain(v) for v in x]
  if hasattr(x, "describe"):
    return _plain(x.describe())
  return x


def _verdict_dict(v):
  return {"outcome": v.outcome, "witness": _plain(v.witness),
          "counterexample": _plain(v.counterexample), "horizon": v.horizon}


def _verdict_exit(v):
  return {"holds": 0, "fails": 1, "inconclusive": 2}[v.outcome]


def _label(ws_objects, token):
  """Command-line labels arrive as text; workspace labels may be ints."""
  if token in ws_objects:
    return token
  try:
    n = int(token)
  except ValueError:
    return token
  return n if n in ws_objects else token


# ---------------------------------------------------------------------------
# commands: each returns (exit_code, payload) where payload carries a
# "verdict" and/or a "result" entry
# ---------------------------------------------------------------------------


def cmd_validate(ws, args):
  return 0, {"result": ws.describe()}


def cmd_check_jmorphism(ws, args):
  jm = ws.jmorphism(args.morphism)
  v = check_jmorphism(jm, args.horizon)
  out = {"verdict": _verdict_dict(v)}
  if v:
    shape = classify_jmorphism(jm, args.horizon)
    out["result"] = {"classification": {k: u.outcome
                                        for k, u in shape.items()}}
  return _verdict_exit(v), out


def cmd_compose(ws, args):
  g, f = ws.jmorphism(args.g), ws.jmorphism(args.f)
  h = compose_jmorphisms(g, f)
  v = check_jmorphism(h, args.horizon)
  return _verdict_exit(v), {"verdict": _verdict_dict(v),
                            "result": {"composite": h.describe()}}


def cmd_equivalent(ws, args):
  v = equivalent_jmorphisms(ws.jmorphism(args.a), ws.jmorphism(args.b),
                            args.horizon)
  return _verdict_exit(v), {"verdict": _verdict_dict(v)}


def cmd_simplify(ws, args):
  jm = ws.jmorphism(args.morphism)
  s = simplify(jm, horizon=args.horizon)
  v = equivalent_jmorphisms(jm, s, args.horizon)
  return _verdict_exit(v), {"verdict": _verdict_dict(v),
                            "result": {"simplified": s.describe()}}


def cmd_reindex(ws, args):
  r = reindex(ws.jmorphism(args.morphism), horizon=args.horizon)
  out = {"level": r.pair.morphism.describe(),
         "into_source": r.into_source.describe(),
         "into_target": r.into_target.describe(),
         "from_source": r.from_source.describe(),
         "from_target": r.from_target.describe()}
  return _verdict_exit(r.square), {"verdict": _verdict_dict(r.square),
                                   "result": out}


def cmd_is_iso(ws, args):
  pair = level_pair(ws.jmorphism(args.morphism), args.horizon)
  v = morita_check(pair, args.horizon)
  return _verdict_exit(v), {"verdict": _verdict_dict(v)}


def cmd_hom_classes(ws, args):
  X, Y = ws.system(args.source), ws.system(args.target)
  classes = hom_classes(X, Y, ws.poset(args.j), horizon=args.horizon,
                        budget=args.budget)
  return 0, {"result": {"count": len(classes),
                        "classes": [c.representative.describe()
                                    for c in classes]}}


def cmd_transfer(ws, args):
  moved = transfer(ws.jmorphism(args.morphism), ws.indexmap(args.phi))
  return 0, {"result": {"transferred": moved.describe()}}


def cmd_collapse(ws, args):
  return 0, {"result": {
      "collapsed": collapse_to_pro(ws.jmorphism(args.morphism)).describe()}}


def _the_pair(ws, args):
  return ws.pair(args.pair) if args.pair else ws.only_pair()


def cmd_shape_eq(ws, args):
  pair = _the_pair(ws, args)
  P = _label(pair.d_objects, args.p)
  Q = _label(pair.d_objects, args.q)
  J = ws.poset(args.j) if args.j else None
  v = same_shape_on_d(pair, P, Q, J, horizon=args.horizon,
                      budget=args.budget)
  return _verdict_exit(v), {"verdict": _verdict_dict(v)}


def cmd_expand_check(ws, args):
  pair = _the_pair(ws, args)
  X = _label(pair.cat.objects(), args.object)
  if args.alt:
    pname = args.pair or next(iter(ws.pairs))
    records = ws.alternates.get(pname, {}).get(X, [])
    if not 1 <= args.alt <= len(records):
      raise WorkspaceError(f"{X!r} has {len(records)} alternate "
                           f"expansion(s); --alt {args.alt} is out of range")
    record = records[args.alt - 1]
  else:
    record = pair.expansion(X)
  v = check_expansion(pair, X, record)
  return _verdict_exit(v), {"verdict": _verdict_dict(v)}


def cmd_lift(ws, args):
  bundle = ws.bundle(args.bundle)
  pair = ws.pair(bundle.pair_name)
  X = _label(pair.cat.objects(), str(bundle.source))
  Y = _label(pair.cat.objects(), str(bundle.target))
  px = pair.expansion(X)
  q = pair.expansion(Y)
  H = {}
  for stage, jname in bundle.entries.items():
    jm = ws.jmorphism(jname)
    st = jm.target.index.elements()
    if st is None or len(st) != 1:
      raise WorkspaceError(f"stage morphism {jname!r} must land in a "
                           "one-stage system")
    y = jm.target.object_at(st[0])
    te = Expansion(y, jm.target, {st[0]: pair.cat.identity(y)})
    H[stage] = shape_morphism(pair, X, y, jm, source_expansion=px,
                              target_expansion=te)
  lifted = lift_system_morphism(pair, X, q, H, horizon=args.horizon)
  return 0, {"result": {"glued": lifted.morphism.describe()}}


def _gamma(ws, spec):
  if spec.startswith("affine"):
    inner = spec[len("affine"):].strip("()")
    try:
      a, b = (int(p) for p in inner.split(","))
    except ValueError:
      raise WorkspaceError(f"cannot read affine radius {spec!r}") from None
    return IndexFunction.from_affine(ws.poset("omega"), ((a, b),))
  return ws.indexmap(spec)


def cmd_tower_iso(ws, args):
  v = tower_iso_check(ws.jmorphism(args.morphism), _gamma(ws, args.gamma),
                      horizon=args.horizon)
  return _verdict_exit(v), {"verdict": _verdict_dict(v)}


_COMMANDS = {
    "validate": cmd_validate,
    "check-jmorphism": cmd_check_jmorphism,
    "compose": cmd_compose,
    "equivalent": cmd_equivalent,
    "simplify": cmd_simplify,
    "reindex": cmd_reindex,
    "is-iso": cmd_is_iso,
    "hom-classes": cmd_hom_classes,
    "transfer": cmd_transfer,
    "collapse": cmd_collapse,
    "shape-eq": cmd_shape_eq,
    "expand-check": cmd_expand_check,
    "lift": cmd_lift,
    "tower-iso": cmd_tower_iso,
}


# ---------------------------------------------------------------------------
# replay: a stored report must survive recomputation, and constructive
# witnesses must re-derive
# ---------------------------------------------------------------------------


def _rebuild_witness_morphism(pair, desc, src_obj, tgt_obj, j_poset):
  """A one-stage morphism back from its report description."""
  cat = pair.cat
  src = rudimentary(cat, src_obj, f"<{src_obj}>")
  tgt = rudimentary(cat, tgt_obj, f"<{tgt_obj}>")
  famd = desc["families"]["*"]
  if famd["form"] == "table":
    fam = MorphismFamily.from_table(
        j_poset, {j: Morphism(src_obj, tgt_obj, famd["entries"][str(j)]["value"])
                  for j in j_poset.elements()})
  else:
    cells = [Morphism(src_obj, tgt_obj, m["value"])
             for m in famd["transient"]]
    cycle = [Morphism(src_obj, tgt_obj, m["value"]) for m in famd["cycle"]]
    fam = MorphismFamily.from_seq(j_poset, PeriodicSeq(tuple(cells),
                                                       tuple(cycle)))
  index = IndexFunction.from_table(tgt.index, src.index, {"*": "*"})
  return JMorphism(desc["name"], src, tgt, j_poset, index, {"*": fam}), \
      src, tgt


def _replay_extra(ws, args, stored):
  """Constructive re-verification for commands whose witness is a
  certificate; returns notes for the replay report."""
  verdict = stored.get("verdict") or {}
  if args.command == "is-iso" and verdict.get("outcome") == "holds":
    pair = level_pair(ws.jmorphism(args.morphism), args.horizon)
    w = morita_witness(pair, args.horizon)
    morita_inverse(pair, w, horizon=args.horizon)  # raises when stale
    return {"inverse": "rebuilt and verified"}
  if args.command == "shape-eq" and verdict.get("outcome") == "holds":
    pair = _the_pair(ws, args)
    P = _label(pair.d_objects, args.p)
    Q = _label(pair.d_objects, args.q)
    J = ws.poset(args.j) if args.j else POINT
    fwd, srcP, tgtQ = _rebuild_witness_morphism(
        pair, verdict["witness"]["forward"], P, Q, J)
    bwd, _, _ = _rebuild_witness_morphism(
        pair, verdict["witness"]["backward"], Q, P, J)
    # glue the rebuilt systems together so the composites type-check
    bwd = JMorphism(bwd.name, tgtQ, srcP, J, bwd.index_fn, bwd.families)
    gf = compose_jmorphisms(bwd, fwd)
    fg = compose_jmorphisms(fwd, bwd)
    ok = (equivalent_jmorphisms(gf, identity_jmorphism(srcP, J))
          and equivalent_jmorphisms(fg, identity_jmorphism(tgtQ, J)))
    if not ok:
      raise WorkspaceError("stored witness morphisms are not mutually "
                           "inverse")
    return {"witness_pair": "rebuilt and verified"}
  return {}


def _run_replay(ws, args, payload):
  try:
    with open(args.replay, encoding="utf-8") as fh:
      stored = json.load(fh)
  except (OSError, ValueError) as exc:
    raise WorkspaceError(f"cannot read replay report: {exc}") from exc
  fresh = json.loads(json.dumps(payload, sort_keys=True))
  notes = {}
  for field in ("verdict", "result"):
    if stored.get(field) != fresh.get(field):
      return 1, {"replay": {"status": "mismatch", "field": field}}
    if field in fresh:
      notes[field] = "recomputed identically"
  notes.update(_replay_extra(ws, args, stored))
  return 0, {"replay": {"status": "verified", "checks": notes}}


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------


def _human(report):
  lines = [f"command: {report['command']}"]
  if "error" in report:
    lines.append(f"error ({report['error']['kind']}): "
                 f"{report['error']['message']}")
  if "verdict" in report:
    v = report["verdict"]
    lines.append(f"verdict: {v['outcome']}")
    if v.get("witness") is not None:
      lines.append("witness: " + json.dumps(v["witness"], sort_keys=True))
    if v.get("counterexample") is not None:
      lines.append("counterexample: "
                   + json.dumps(v["counterexample"], sort_keys=True))
  if "result" in report:
    lines.append("result: " + json.dumps(report["result"], sort_keys=True))
  if "replay" in report:
    lines.append("replay: " + json.dumps(report["replay"], sort_keys=True))
  return "\n".join(lines)


def _emit(report, as_json):
  if as_json:
    print(json.dumps(report, sort_keys=True, indent=2))
  else:
    print(_human(report))


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _build_parser():
  common = argparse.ArgumentParser(add_help=False)
  env_horizon = os.environ.get(HORIZON_ENV)
  common.add_argument("--horizon", type=int,
                      default=int(env_horizon) if env_horizon else
                      DEFAULT_HORIZON)
  common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
  common.add_argument("--json", action="store_true")
  common.add_argument("--replay", metavar="REPORT")

  top = argparse.ArgumentParser(prog="proshape", description=__doc__)
  sub = top.add_subparsers(dest="command", required=True)

  def add(name, *positionals, **named):
    p = sub.add_parser(name, parents=[common])
    p.add_argument("workspace")
    for pos in positionals:
      p.add_argument(pos)
    for flag, kw in named.items():
      p.add_argument("--" + flag, **kw)
    return p

  add("validate")
  add("check-jmorphism", "morphism")
  add("compose", "g", "f")
  add("equivalent", "a", "b")
  add("simplify", "morphism")
  add("reindex", "morphism")
  add("is-iso", "morphism")
  add("hom-classes", "source", "target", "j")
  add("transfer", "morphism", "phi")
  add("collapse", "morphism")
  add("shape-eq", "p", "q", pair={"default": None}, j={"default": None})
  add("expand-check", "object", pair={"default": None},
      alt={"type": int, "default": 0})
  add("lift", "bundle")
  p = add("tower-iso", "morphism")
  p.add_argument("--gamma", required=True)
  return top


_COMMON = {"command", "workspace", "horizon", "budget", "json", "replay"}


def main(argv=None):
  args = _build_parser().parse_args(argv)
  report = {"schema": SCHEMA, "command": args.command,
            "workspace": args.workspace,
            "arguments": {k: v for k, v in vars(args).items()
                          if k not in _COMMON and v is not None}}
  try:
    ws = load_workspace(args.workspace)
    code, payload = _COMMANDS[args.command](ws, args)
    if args.replay:
      code, payload = _run_replay(ws, args, dict(report, **payload))
    report.update(payload)
  except _ERRORS as exc:
    report["error"] = {"kind": type(exc).__name__, "message": str(exc)}
    code = 1
  _emit(report, args.json)
  return code


if __name__ == "__main__":
  sys.exit(main())
