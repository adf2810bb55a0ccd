"""J-morphisms between inverse systems, and their decision procedures.

A J-morphism X -> Y is an index function f from the stages of Y to the
stages of X together with, for every stage mu of Y, a J-indexed family of
morphisms X_f(mu) -> Y_mu.  Validity asks, for every related pair of
stages, that the two ways around the square agree at some stage above
both images for all large j.  Equivalence of two J-morphisms asks the
same kind of tail agreement pointwise in mu.

Families over an infinite stage chain are stored as a ladder: an
eventually periodic sequence whose cells are whole families.  Adjacent
pairs suffice on a chain, and a periodic ladder plus uniform towers and
an affine index function make one transient-plus-period window of
adjacent pairs cover every pair, which turns the scans exact.

Stage searches ascend a deterministic cofinal chain.  Over a finite stage
set the search is exhaustive and the answer exact.  Over a uniform tower
the search state (the two compared families) evolves autonomously, so a
repeated state proves the search can never succeed; otherwise exhausting
the horizon is reported as inconclusive, never as failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cat import (CatError, CycGrp, MorphismFamily, compose_families,
                  equal_everywhere, eventually_equal, validate_family)
from .eventual import PeriodicSeq, Staircase
from .invsys import InverseSystem
from .order import (DEFAULT_HORIZON, FinitePoset, IndexFunction, OmegaPoset,
                    ProductPoset, Verdict, check_cofinal_increasing,
                    compose_index, increasing_majorant, is_increasing,
                    threshold_stairs, upper_bound)


class JmorError(Exception):
  """Malformed J-morphism data or an operation outside its contract."""


def _same_cat(a, b):
  return a is b or (isinstance(a, CycGrp) and isinstance(b, CycGrp))


class JMorphism:
  """families: mapping mu -> MorphismFamily (finite stage set), a
  PeriodicSeq of families (ladder over omega), or a callable."""

  def __init__(self, name, source, target, j_poset, index_fn, families):
    if not _same_cat(source.cat, target.cat):
      raise JmorError("source and target live over different categories")
    if index_fn.domain != target.index:
      raise JmorError("index function must start at the target stages")
    if index_fn.codomain != source.index:
      raise JmorError("index function must land in the source stages")
    if isinstance(families, PeriodicSeq) and not isinstance(target.index,
                                                            OmegaPoset):
      raise JmorError("family ladders are indexed by omega")
    self.name = name
    self.source = source
    self.target = target
    self.j_poset = j_poset
    self.index_fn = index_fn
    self.families = families

  @property
  def cat(self):
    return self.source.cat

  def family_at(self, mu):
    if isinstance(self.families, dict):
      try:
        fam = self.families[mu]
      except KeyError:
        raise JmorError(f"no family at stage {mu!r}") from None
    elif isinstance(self.families, PeriodicSeq):
      fam = self.families.at(mu)
    else:
      fam = self.families(mu)
    return fam

  @property
  def ladder(self):
    return self.families if isinstance(self.families, PeriodicSeq) else None

  def related_pairs(self):
    els = self.target.index.elements()
    if els is None:
      raise JmorError("related pairs are enumerable only over finite stages")
    return [(a, b) for a in els for b in els
            if a != b and self.target.index.le(a, b)]

  def stage_sample(self, horizon):
    els = self.target.index.elements()
    return list(els) if els is not None else \
        self.target.index.enumerate_to(horizon)

  def describe(self):
    out = {"name": self.name, "source": self.source.name,
           "target": self.target.name, "index": self.index_fn.describe(),
           "j": self.j_poset.describe()}
    if isinstance(self.families, dict):
      out["families"] = {str(mu): fam.describe()
                         for mu, fam in self.families.items()}
    elif isinstance(self.families, PeriodicSeq):
      out["families"] = {"transient": [f.describe() for f in self.families.transient],
                         "cycle": [f.describe() for f in self.families.cycle]}
    else:
      out["families"] = "rule"
    return out


@dataclass(frozen=True)
class JMorphismClass:
  """An equivalence class of J-morphisms, named by a representative."""
  representative: object
  members: tuple


# ---------------------------------------------------------------------------
# structural validation
# ---------------------------------------------------------------------------


def validate_jmorphism(jm, horizon=DEFAULT_HORIZON):
  """Endpoint bookkeeping per stage; Def-level validity is check_jmorphism."""
  errors = []
  stages = jm.stage_sample(min(horizon, 16))
  f = jm.index_fn
  for mu in stages:
    try:
      fam = jm.family_at(mu)
    except JmorError:
      errors.append({"error": "missing_family", "stage": mu})
      continue
    if fam.j_poset != jm.j_poset:
      errors.append({"error": "family_index", "stage": mu})
      continue
    want_src = jm.source.object_at(f(mu))
    want_tgt = jm.target.object_at(mu)
    if (fam.source, fam.target) != (want_src, want_tgt):
      errors.append({"error": "family_endpoints", "stage": mu,
                     "got": [fam.source, fam.target],
                     "want": [want_src, want_tgt]})
      continue
    for err in validate_family(jm.cat, fam):
      err = dict(err)
      err["stage"] = mu
      errors.append(err)
  return errors


# ---------------------------------------------------------------------------
# the stage-search engine
# ---------------------------------------------------------------------------


def _lambda_search(X, cat, floor, build_pair, horizon, compare):
  """Least stage lam >= floor at which compare(build_pair(lam)) holds.
  The condition is upward closed in lam (compose with a further bond),
  so scanning the whole upper set settles finite stage sets, and a
  repeated search state over a uniform tower settles omega."""
  chain = X.index.ascend(floor, horizon)
  if X.index.is_finite:
    last = None
    open_lam = None
    for lam in chain:
      lhs, rhs = build_pair(lam)
      v = compare(cat, lhs, rhs)
      if v:
        return Verdict.holds({"lambda": lam,
                              "from": (v.witness or {}).get("from")})
      if v.is_inconclusive and open_lam is None:
        open_lam = lam
      last = (lam, v)
    if open_lam is not None:
      # an undecided candidate blocks the no-stage-works conclusion
      return Verdict.inconclusive(horizon, {"undecided_lambda": open_lam})
    lam, v = last
    detail = dict(v.counterexample or {})
    detail["lambda_top"] = lam
    return Verdict.fails(detail)

  autonomous = isinstance(X.index, OmegaPoset) and X.uniform_step is not None
  seen = {}
  saw_open = False
  for lam in chain:
    lhs, rhs = build_pair(lam)
    v = compare(cat, lhs, rhs)
    if v:
      return Verdict.holds({"lambda": lam,
                            "from": (v.witness or {}).get("from")})
    saw_open = saw_open or v.is_inconclusive
    if autonomous:
      state = (lhs.key(), rhs.key())
      if state in seen:
        if saw_open:
          return Verdict.inconclusive(horizon, {"lambda_cycle": [seen[state], lam]})
        return Verdict.fails({"lambda_cycle": [seen[state], lam],
                              **dict(v.counterexample or {})})
      seen[state] = lam
  return Verdict.inconclusive(horizon, {"lambda_exhausted": chain[-1]})


def _aggregate(per_item, items, horizon, witness_label):
  """Run per_item over items; any failure wins, then any open item."""
  witnesses = {}
  open_item = None
  for it in items:
    v = per_item(it)
    if v.is_fails:
      detail = dict(v.counterexample or {})
      detail[witness_label] = it
      return Verdict.fails(detail)
    if v.is_inconclusive:
      if open_item is None:
        open_item = (it, v)
      continue
    witnesses[str(it)] = v.witness
  if open_item is not None:
    it, v = open_item
    detail = dict(v.witness or {})
    detail[witness_label] = it
    return Verdict.inconclusive(horizon, detail)
  return Verdict.holds({witness_label + "s": witnesses})


def _ladder_scan_length(*ladders):
  """Pairs to check so that every (fam_n, fam_n+1, ...) state recurs."""
  t = max(l.tail_start for l in ladders)
  p = 1
  for l in ladders:
    p = p * l.period // math.gcd(p, l.period)
  return t + p


def _exact_omega_premises(jm):
  """The adjacent-pair window is complete when the family assignment is
  periodic, the index function moves stages affinely, and both towers
  look the same at every stage."""
  return (jm.ladder is not None
          and jm.index_fn.affine is not None
          and isinstance(jm.source.index, OmegaPoset)
          and jm.source.uniform_step is not None
          and jm.target.uniform_step is not None)


# ---------------------------------------------------------------------------
# validity and equivalence
# ---------------------------------------------------------------------------


def _square_stage(jm, mu, mup, horizon, compare=eventually_equal):
  """Stage search for one validity square; the witness carries the
  lambda that settles it."""
  X, Y, cat, f = jm.source, jm.target, jm.cat, jm.index_fn
  fmu, fmup = f(mu), f(mup)
  floor = upper_bound(X.index, [fmu, fmup])
  q = Y.bond(mu, mup)
  fam_mu, fam_mup = jm.family_at(mu), jm.family_at(mup)

  def build(lam):
    lhs = fam_mu.map_pre(cat, X.bond(fmu, lam))
    rhs = fam_mup.map_pre(cat, X.bond(fmup, lam)).map_post(cat, q)
    return lhs, rhs

  return _lambda_search(X, cat, floor, build, horizon, compare)


def check_jmorphism(jm, horizon=DEFAULT_HORIZON, compare=eventually_equal):
  """Validity over all related stage pairs."""
  Y = jm.target

  def pair_verdict(pair):
    return _square_stage(jm, pair[0], pair[1], horizon, compare)

  if Y.index.is_finite:
    return _aggregate(pair_verdict, jm.related_pairs(), horizon, "pair")

  if not isinstance(Y.index, OmegaPoset):
    # probe: failures are exact, universal claims are not
    sample = Y.index.enumerate_to(horizon)
    pairs = [(a, b) for a, b in zip(sample, sample[1:])
             if a != b and Y.index.le(a, b)]
    v = _aggregate(pair_verdict, pairs, horizon, "pair")
    if v:
      return Verdict.inconclusive(horizon, {"pairs_probed": len(pairs)})
    return v

  # adjacent pairs suffice on a chain: the square for (n, n+2) is the
  # two stacked squares composed
  if _exact_omega_premises(jm):
    n_pairs = _ladder_scan_length(jm.ladder)
    v = _aggregate(pair_verdict, [(n, n + 1) for n in range(n_pairs + 1)],
                   horizon, "pair")
    if v:
      return Verdict.holds({"adjacent_window": n_pairs + 1,
                            "periodic": True})
    return v
  v = _aggregate(pair_verdict, [(n, n + 1) for n in range(horizon + 1)],
                 horizon, "pair")
  if v:
    return Verdict.inconclusive(horizon, {"checked_adjacent": horizon + 1})
  return v


def equivalent_jmorphisms(a, b, horizon=DEFAULT_HORIZON,
                          compare=eventually_equal):
  """Def-level equivalence: for every stage mu some lam >= both image
  stages equalizes the two families' tails."""
  if a.source is not b.source or a.target is not b.target:
    raise JmorError("equivalence compares parallel J-morphisms")
  if a.j_poset != b.j_poset:
    raise JmorError("equivalence needs a shared enrichment index")
  X, cat = a.source, a.cat
  fa, fb = a.index_fn, b.index_fn

  def stage_verdict(mu):
    floor = upper_bound(X.index, [fa(mu), fb(mu)])
    fam_a, fam_b = a.family_at(mu), b.family_at(mu)

    def build(lam):
      lhs = fam_a.map_pre(cat, X.bond(fa(mu), lam))
      rhs = fam_b.map_pre(cat, X.bond(fb(mu), lam))
      return lhs, rhs

    return _lambda_search(X, cat, floor, build, horizon, compare)

  M = a.target.index
  if M.is_finite:
    return _aggregate(stage_verdict, list(M.elements()), horizon, "stage")
  if not isinstance(M, OmegaPoset):
    sample = M.enumerate_to(horizon)
    v = _aggregate(stage_verdict, sample, horizon, "stage")
    if v:
      return Verdict.inconclusive(horizon, {"stages_probed": len(sample)})
    return v

  exact = (a.ladder is not None and b.ladder is not None
           and fa.affine is not None and fb.affine is not None
           and fa.affine[0][0] == fb.affine[0][0]
           and isinstance(X.index, OmegaPoset)
           and X.uniform_step is not None)
  if exact:
    n_stages = _ladder_scan_length(a.ladder, b.ladder)
    v = _aggregate(stage_verdict, list(range(n_stages + 1)), horizon, "stage")
    if v:
      return Verdict.holds({"stage_window": n_stages + 1, "periodic": True})
    return v
  v = _aggregate(stage_verdict, list(range(horizon + 1)), horizon, "stage")
  if v:
    return Verdict.inconclusive(horizon, {"checked_stages": horizon + 1})
  return v


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def identity_jmorphism(X, j_poset, name="id"):
  lam_poset = X.index
  if lam_poset.is_finite:
    els = lam_poset.elements()
    index = IndexFunction.from_table(lam_poset, lam_poset, {e: e for e in els})
    fams = {e: MorphismFamily.constant(j_poset, X.cat.identity(X.object_at(e)))
            for e in els}
    return JMorphism(name, X, X, j_poset, index, fams)
  if isinstance(lam_poset, OmegaPoset):
    index = IndexFunction.from_affine(lam_poset, [(1, 0)])
    if X.uniform_step is not None:
      fam = MorphismFamily.constant(j_poset, X.cat.identity(X.object_at(0)))
      return JMorphism(name, X, X, j_poset, index, PeriodicSeq((), (fam,)))
    return JMorphism(
        name, X, X, j_poset, index,
        lambda n: MorphismFamily.constant(j_poset,
                                          X.cat.identity(X.object_at(n))))
  index = IndexFunction.from_fn(lam_poset, lam_poset, lambda x: x,
                                increasing_hint=True)
  return JMorphism(
      name, X, X, j_poset, index,
      lambda mu: MorphismFamily.constant(j_poset,
                                         X.cat.identity(X.object_at(mu))))


def compose_jmorphisms(g, f, name=None):
  """g after f: families compose pointwise in j at matched stages."""
  if f.target is not g.source:
    raise JmorError("composition needs matching middle system")
  if f.j_poset != g.j_poset:
    raise JmorError("composition needs a shared enrichment index")
  cat = f.cat
  index = compose_index(f.index_fn, g.index_fn)
  name = name or f"{g.name}.{f.name}"

  if isinstance(g.families, dict):
    fams = {nu: compose_families(cat, g.family_at(nu),
                                 f.family_at(g.index_fn(nu)))
            for nu in g.target.index.elements()}
    return JMorphism(name, f.source, g.target, f.j_poset, index, fams)

  if (g.ladder is not None and f.ladder is not None
      and g.index_fn.affine is not None and g.index_fn.affine[0][0] >= 0):
    (a, b), = g.index_fn.affine
    pulled = f.ladder.compose_stair(Staircase.affine(a, b))
    fams = g.ladder.zip_with(pulled, lambda gf, ff: compose_families(cat, gf, ff))
    return JMorphism(name, f.source, g.target, f.j_poset, index, fams)

  return JMorphism(
      name, f.source, g.target, f.j_poset, index,
      lambda nu: compose_families(cat, g.family_at(nu),
                                  f.family_at(g.index_fn(nu))))


def _map_families(jm, fam_map, stage_map=None):
  """Transform every family; ladders stay ladders when stages map affinely."""
  if isinstance(jm.families, dict):
    return {mu: fam_map(mu, fam) for mu, fam in jm.families.items()}
  if isinstance(jm.families, PeriodicSeq) and stage_map is None:
    # stage-independent maps act cellwise
    return jm.families.map(lambda fam: fam_map(None, fam))
  if isinstance(jm.families, PeriodicSeq):
    return lambda mu: fam_map(mu, jm.families.at(mu))
  return lambda mu: fam_map(mu, jm.family_at(mu))


def induce(jm, j_poset, name=None):
  """Enrich a plain system morphism (one-point enrichment index) into a
  J-morphism with constant families.  The class map is injective, so
  nothing is lost by re-reading a morphism this way."""
  els = jm.j_poset.elements()
  if els is None or len(els) != 1:
    raise JmorError("induce starts from a one-point enrichment index")
  v = check_jmorphism(jm)
  if v.is_fails:
    raise JmorError(f"induce needs a valid input morphism: {v.counterexample}")
  point = els[0]

  def remap(_, fam):
    return MorphismFamily.constant(j_poset, fam.at(point))

  fams = _map_families(jm, remap)
  return JMorphism(name or f"{jm.name}|up", jm.source, jm.target, j_poset,
                   jm.index_fn, fams)


def restrict_stages(jm, phi, name=None):
  """Restrict the target stages along an increasing cofinal phi; the
  result is the same morphism seen over the coarser stage chain."""
  inc = is_increasing(phi)
  if inc.is_fails:
    raise JmorError(f"restriction needs an increasing map: {inc.counterexample}")
  cof = check_cofinal_increasing(phi)
  if cof.is_fails:
    raise JmorError(f"restriction needs a cofinal map: {cof.counterexample}")
  if phi.codomain != jm.target.index:
    raise JmorError("phi must land in the target stages")
  Y = jm.target
  K = phi.domain
  if K.is_finite:
    objects = {k: Y.object_at(phi(k)) for k in K.elements()}
    bonds = {(k1, k2): Y.bond(phi(k1), phi(k2))
             for k1 in K.elements() for k2 in K.elements() if K.le(k1, k2)}
    restricted = InverseSystem(f"{Y.name}|res", Y.cat, K, objects, bonds)
    fams = {k: jm.family_at(phi(k)) for k in K.elements()}
  else:
    step = None
    if (Y.uniform_step is not None and isinstance(K, OmegaPoset)
        and phi.affine is not None and phi.affine[0][0] >= 1):
      # step of the restricted tower is the a-fold composite
      (a, _), = phi.affine
      step = Y.uniform_step
      for _ in range(a - 1):
        step = Y.cat.compose(Y.uniform_step, step)
    restricted = InverseSystem(
        f"{Y.name}|res", Y.cat, K, lambda k: Y.object_at(phi(k)),
        bonds=None if step is not None else
        (lambda k1, k2: Y.bond(phi(k1), phi(k2))),
        uniform_step=step)
    if jm.ladder is not None and phi.affine is not None and \
        phi.affine[0][0] >= 0:
      (a, b), = phi.affine
      fams = jm.ladder.compose_stair(Staircase.affine(a, b))
    else:
      fams = lambda k: jm.family_at(phi(k))
  index = compose_index(jm.index_fn, phi)
  return JMorphism(name or f"{jm.name}|restr", jm.source, restricted,
                   jm.j_poset, index, fams)


def collapse_to_pro(jm, name=None):
  """With a greatest enrichment index j*, the tail condition degenerates
  to plain equality at j*; the morphism collapses to its j* slice."""
  els = jm.j_poset.elements()
  if els is None:
    raise JmorError("collapse needs a finite enrichment index")
  maxes = [m for m in els if all(jm.j_poset.le(e, m) for e in els)]
  if not maxes:
    raise JmorError("collapse needs a greatest enrichment index")
  jstar = maxes[0]
  point = FinitePoset.chain(["*"])

  def squash(_, fam):
    return MorphismFamily.constant(point, fam.at(jstar))

  fams = _map_families(jm, squash)
  return JMorphism(name or f"{jm.name}|pro", jm.source, jm.target, point,
                   jm.index_fn, fams)


def simplify(jm, name=None, horizon=DEFAULT_HORIZON):
  """Equivalent simple representative: push each stage past every
  witness of the validity squares, take the increasing majorant, and
  precompose each family with the connecting bond.  After that every
  square settles at the image stage itself, with no ascent left."""
  f = jm.index_fn
  X, Y, cat = jm.source, jm.target, jm.cat
  M = Y.index
  new_name = name or f"{jm.name}|inc"

  def witness_stage(mu, mup):
    v = _square_stage(jm, mu, mup, horizon)
    if not v:
      raise JmorError("no simple representative: the validity square for "
                      f"({mu!r}, {mup!r}) is {v.outcome}")
    return v.witness["lambda"]

  if M.is_finite:
    hat = {mu: f(mu) for mu in M.elements()}
    for mu, mup in jm.related_pairs():
      hat[mup] = upper_bound(X.index, [hat[mup], witness_stage(mu, mup)])
    g = increasing_majorant(IndexFunction.from_table(M, X.index, hat),
                            horizon)
    if all(g(mu) == f(mu) for mu in M.elements()):
      return JMorphism(new_name, X, Y, jm.j_poset, f, jm.families)

    def bump(mu, fam):
      return fam.map_pre(cat, X.bond(f(mu), g(mu)))

    fams = _map_families(jm, bump, stage_map=True)
    return JMorphism(new_name, X, Y, jm.j_poset, g, fams)

  if not isinstance(M, OmegaPoset) or f.affine is None:
    raise JmorError("infinite stage sets are supported as towers over "
                    "omega with an affine index")
  # adjacent squares suffice on a chain; with periodic premises the
  # shift found on the recurrence window bounds every later square
  window = (_ladder_scan_length(jm.ladder) if _exact_omega_premises(jm)
            else horizon)
  shift = 0
  for n in range(window + 1):
    shift = max(shift, witness_stage(n, n + 1) - f(n + 1))
  if shift == 0:
    return JMorphism(new_name, X, Y, jm.j_poset, f, jm.families)
  (a, b), = f.affine
  g = IndexFunction.from_affine(X.index, ((a, b + shift),))
  if isinstance(jm.families, PeriodicSeq) and X.uniform_step is not None:
    lift = X.bond(0, shift)
    fams = jm.families.map(lambda fam: fam.map_pre(cat, lift))
  else:
    def bump(mu, fam):
      return fam.map_pre(cat, X.bond(f(mu), f(mu) + shift))
    fams = _map_families(jm, bump, stage_map=True)
  return JMorphism(new_name, X, Y, jm.j_poset, g, fams)


def transfer(jm, phi, name=None):
  """Reindex the enrichment from omega to phi's codomain: the new value
  at k is the old value at the least j with k <= phi(j)."""
  if not isinstance(jm.j_poset, OmegaPoset):
    raise JmorError("transfer starts from an omega enrichment index")
  if phi.affine is None or any(a < 1 for a, _ in phi.affine):
    raise JmorError("transfer needs an affine phi with growing coordinates")
  K = phi.codomain
  stairs = threshold_stairs(phi)

  if isinstance(K, OmegaPoset):
    def remap(_, fam):
      return MorphismFamily.from_seq(K, fam.payload.compose_stair(stairs[0]))
  elif isinstance(K, ProductPoset) and not K.is_finite:
    def remap(_, fam):
      return MorphismFamily.grid(K, fam.payload, stairs)
  else:
    raise JmorError("transfer lands in omega or an omega product")

  fams = _map_families(jm, remap)
  return JMorphism(name or f"{jm.name}|K", jm.source, jm.target, K,
                   jm.index_fn, fams)


def transfer_iso_back(jm, phi, name=None):
  """Pull the enrichment back along phi: the new value at j is the old
  value at phi(j).  Exact staircase composition keeps the closed form."""
  if phi.affine is None:
    raise JmorError("transfer back needs an affine phi")
  if not isinstance(phi.domain, OmegaPoset):
    raise JmorError("transfer back lands in an omega enrichment index")
  if phi.codomain != jm.j_poset:
    raise JmorError("phi must land in the current enrichment index")
  omega = phi.domain

  if isinstance(jm.j_poset, OmegaPoset):
    (a, b), = phi.affine
    if a < 0:
      raise JmorError("phi must be monotone")
    stair = Staircase.affine(a, b)

    def remap(_, fam):
      return MorphismFamily.from_seq(omega, fam.payload.compose_stair(stair))
  else:
    coeffs = phi.affine
    if any(a < 0 for a, _ in coeffs):
      raise JmorError("phi must be monotone")

    def remap(_, fam):
      inner, stairs = fam.payload
      total = None
      for (a, b), s in zip(coeffs, stairs):
        piece = s.of(Staircase.affine(a, b))
        total = piece if total is None else total.max_with(piece)
      return MorphismFamily.from_seq(omega, inner.compose_stair(total))

  fams = _map_families(jm, remap)
  return JMorphism(name or f"{jm.name}|J", jm.source, jm.target, omega,
                   jm.index_fn, fams)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def _is_level(jm, horizon):
  if jm.source.index != jm.target.index:
    return Verdict.fails({"reason": "stage posets differ"})
  f = jm.index_fn
  if f.affine is not None:
    if f.affine == ((1, 0),):
      return Verdict.holds({"identity_index": True})
    return Verdict.fails({"affine": [list(c) for c in f.affine]})
  sample = jm.stage_sample(horizon)
  for mu in sample:
    if f(mu) != mu:
      return Verdict.fails({"stage": mu, "image": f(mu)})
  if f.table is not None or jm.target.index.is_finite:
    return Verdict.holds({"identity_index": True})
  return Verdict.inconclusive(horizon)


def _is_simple(jm, horizon):
  """Increasing index function, and each square settled at lam = f(mu')
  with no ascent."""
  inc = is_increasing(jm.index_fn, horizon)
  if inc.is_fails:
    return Verdict.fails({"increasing": inc.counterexample})
  X, Y, cat, f = jm.source, jm.target, jm.cat, jm.index_fn

  def pair_verdict(pair):
    mu, mup = pair
    lhs = jm.family_at(mu).map_pre(cat, X.bond(f(mu), f(mup)))
    rhs = jm.family_at(mup).map_post(cat, Y.bond(mu, mup))
    return eventually_equal(cat, lhs, rhs)

  if Y.index.is_finite:
    v = _aggregate(pair_verdict, jm.related_pairs(), horizon, "pair")
  elif isinstance(Y.index, OmegaPoset):
    if _exact_omega_premises(jm):
      n_pairs = _ladder_scan_length(jm.ladder)
      v = _aggregate(pair_verdict, [(n, n + 1) for n in range(n_pairs + 1)],
                     horizon, "pair")
    else:
      v = _aggregate(pair_verdict, [(n, n + 1) for n in range(horizon + 1)],
                     horizon, "pair")
      if v:
        v = Verdict.inconclusive(horizon, {"checked_adjacent": horizon + 1})
  else:
    raise JmorError("infinite stage sets are supported as towers over omega")
  if v and inc.is_inconclusive:
    return Verdict.inconclusive(horizon, {"increasing_unverified": True})
  return v


def is_level(jm, horizon=DEFAULT_HORIZON):
  """Shared stage poset and identity index map."""
  return _is_level(jm, horizon)


def classify_jmorphism(jm, horizon=DEFAULT_HORIZON):
  """Verdicts for the standard structure predicates."""
  return {
      "valid": check_jmorphism(jm, horizon),
      "commutative": check_jmorphism(jm, horizon, compare=equal_everywhere),
      "simple": _is_simple(jm, horizon),
      "level": _is_level(jm, horizon),
  }
