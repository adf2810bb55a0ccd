"""Quotient-category layer over a finite ambient category with a chosen
full subcategory: objects are resolved by finite subcategory-valued
systems ("expansions"), morphisms are enriched system morphisms between
the resolutions, and equality transports across the canonical
isomorphisms connecting any two resolutions of one object.

Everything here is exhaustive over explicit hom sets, so verdicts are
exact and witnesses replayable."""

from dataclasses import dataclass

from .cat import FinCat, Morphism, MorphismFamily, eventually_equal
from .invsys import rudimentary
from .jmor import (JMorphism, JMorphismClass, check_jmorphism,
                   compose_jmorphisms, equivalent_jmorphisms,
                   identity_jmorphism, induce)
from .order import (DEFAULT_BUDGET, DEFAULT_HORIZON, FinitePoset,
                    IndexFunction, Verdict)
from .procat import hom_classes


class ShapeError(Exception):
  """Malformed pair data or an operation outside its contract."""


class NotUniformlyFactorizable(ShapeError):
  """No single stage leg factors every member of the family."""


# the one-point enrichment index: plain system morphisms live here
POINT = FinitePoset.chain(["*"])


# ---------------------------------------------------------------------------
# expansions and the ambient pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Expansion:
  """A candidate resolution of one object: a finite subcategory-valued
  system together with one leg per stage."""
  obj: object
  system: object
  legs: dict

  def leg(self, lam):
    try:
      return self.legs[lam]
    except KeyError:
      raise ShapeError(f"no leg at stage {lam!r}") from None

  def stages(self):
    return self.system.index.elements()

  def describe(self):
    return {"object": self.obj, "system": self.system.describe(),
            "legs": {str(lam): m.describe() for lam, m in self.legs.items()}}


def rudimentary_expansion(cat, obj, name=None):
  """One-stage resolution of a subcategory object by itself."""
  sys = rudimentary(cat, obj, name if name is not None else f"<{obj}>")
  return Expansion(obj, sys, {"*": cat.identity(obj)})


def _check_record(cat, d_objects, X, p):
  """Structural half: endpoints, membership, and the cone identities.
  The factorization properties live in check_expansion."""
  if p.obj != X:
    raise ShapeError(f"expansion record is for {p.obj!r}, not {X!r}")
  if p.system.cat is not cat:
    raise ShapeError("expansion system lives over a different category")
  if not p.system.index.is_finite:
    raise ShapeError("expansion stages must be finite")
  stages = p.system.index.elements()
  if set(p.legs) != set(stages):
    raise ShapeError("legs must cover the stages exactly")
  for lam in stages:
    obj = p.system.object_at(lam)
    if obj not in d_objects:
      raise ShapeError(f"stage object {obj!r} at {lam!r} is outside the "
                       "subcategory")
    leg = p.legs[lam]
    if (leg.source, leg.target) != (X, obj):
      raise ShapeError(f"leg at {lam!r} must run {X!r} -> {obj!r}")
  for a in stages:
    for b in stages:
      if a != b and p.system.index.le(a, b):
        if cat.compose(p.system.bond(a, b), p.legs[b]) != p.legs[a]:
          raise ShapeError(f"legs do not form a cone: bond ({a!r}, {b!r})")


class ProReflectivePair:
  """A finite category with a full subcategory (an object subset) and one
  designated expansion per object.  Fullness is by construction: the
  subcategory inherits the ambient hom sets unchanged."""

  def __init__(self, cat, d_objects, expansions, validate=True):
    if not isinstance(cat, FinCat):
      raise ShapeError("the ambient category must be finite and explicit")
    objs = cat.objects()
    wanted = set(d_objects)
    if not wanted <= set(objs):
      raise ShapeError("subcategory objects must be objects of the "
                       "ambient category")
    if not wanted:
      raise ShapeError("the subcategory needs at least one object")
    self.cat = cat
    self.d_objects = tuple(o for o in objs if o in wanted)
    self.expansions = dict(expansions)
    unknown = [o for o in self.expansions if o not in objs]
    if unknown:
      raise ShapeError(f"expansions declared for unknown objects: {unknown}")
    missing = [o for o in objs if o not in self.expansions]
    if missing:
      raise ShapeError(f"objects without a designated expansion: {missing}")
    for obj in objs:
      _check_record(cat, self.d_objects, obj, self.expansions[obj])
    if validate:
      for obj in objs:
        v = check_expansion(self, obj, self.expansions[obj])
        if not v:
          raise ShapeError(f"designated record for {obj!r} is not an "
                           f"expansion: {v.counterexample}")

  def expansion(self, X):
    try:
      return self.expansions[X]
    except KeyError:
      raise ShapeError(f"no designated expansion for {X!r}") from None

  def describe(self):
    return {"category": self.cat.name, "subcategory": list(self.d_objects),
            "expansions": {str(o): e.describe()
                           for o, e in self.expansions.items()}}


def rudimentary_pair(cat, validate=True):
  """Every object in the subcategory, resolved by itself."""
  exps = {obj: rudimentary_expansion(cat, obj) for obj in cat.objects()}
  return ProReflectivePair(cat, cat.objects(), exps, validate=validate)


# ---------------------------------------------------------------------------
# the expansion property
# ---------------------------------------------------------------------------


def _factor_through(cat, p, h):
  """First (stage, w) with w o leg == h, scanning stages and hom sets in
  declaration order; None when no stage factors h."""
  for lam in p.system.index.elements():
    for w in cat.hom(p.system.object_at(lam), h.target):
      if cat.compose(w, p.leg(lam)) == h:
        return lam, w
  return None


def check_expansion(pair, X, p):
  """Holds iff every morphism from X into a subcategory object factors
  through some leg, and any two stage morphisms equalized by a leg merge
  under a later bond.  Both halves are exhaustive."""
  cat = pair.cat
  if X not in cat.objects():
    raise ShapeError(f"unknown object {X!r}")
  _check_record(cat, pair.d_objects, X, p)
  stages = p.system.index.elements()

  factored = 0
  for P in pair.d_objects:
    for h in cat.hom(X, P):
      if _factor_through(cat, p, h) is None:
        return Verdict.fails({"rule": "factor", "morphism": h.describe()})
      factored += 1

  merged = 0
  for lam in stages:
    for P in pair.d_objects:
      homset = cat.hom(p.system.object_at(lam), P)
      for i, u in enumerate(homset):
        for v in homset[i + 1:]:
          if cat.compose(u, p.leg(lam)) != cat.compose(v, p.leg(lam)):
            continue
          if not any(cat.compose(u, p.system.bond(lam, lam2)) ==
                     cat.compose(v, p.system.bond(lam, lam2))
                     for lam2 in stages if p.system.index.le(lam, lam2)):
            return Verdict.fails({"rule": "merge", "stage": lam,
                                  "left": u.describe(),
                                  "right": v.describe()})
          merged += 1
  return Verdict.holds({"factorizations": factored, "merged_pairs": merged})


# ---------------------------------------------------------------------------
# canonical isomorphisms between expansions of one object
# ---------------------------------------------------------------------------


def _connecting(pair, X, p, p2, name, horizon):
  """The stagewise-factored morphism p.system -> p2.system over the
  one-point enrichment; unique up to equivalence when both records are
  expansions."""
  cat = pair.cat
  tab, fams = {}, {}
  for nu in p2.system.index.elements():
    hit = _factor_through(cat, p, p2.leg(nu))
    if hit is None:
      raise ShapeError(f"leg at {nu!r} does not factor through the other "
                       f"record; not both expansions of {X!r}")
    lam, w = hit
    tab[nu] = lam
    fams[nu] = MorphismFamily.constant(POINT, w)
  index = IndexFunction.from_table(p2.system.index, p.system.index, tab)
  jm = JMorphism(name, p.system, p2.system, POINT, index, fams)
  if not check_jmorphism(jm, horizon):
    raise ShapeError(f"stage factorizations do not merge; not both "
                     f"expansions of {X!r}")
  return jm


def canonical_iso(pair, X, p, p2, j_poset=None, horizon=DEFAULT_HORIZON):
  """The connecting class between two expansions of one object, enriched
  by constant families; mutual invertibility is verified before return."""
  for rec in (p, p2):
    _check_record(pair.cat, pair.d_objects, X, rec)
  fwd = _connecting(pair, X, p, p2, "i", horizon)
  back = _connecting(pair, X, p2, p, "i~", horizon)
  pairs = ((compose_jmorphisms(back, fwd), identity_jmorphism(p.system, POINT)),
           (compose_jmorphisms(fwd, back), identity_jmorphism(p2.system, POINT)))
  for got, want in pairs:
    if not equivalent_jmorphisms(got, want, horizon):
      raise ShapeError(f"connecting morphisms are not mutually inverse; "
                       f"a record for {X!r} is not an expansion")
  rep = fwd if j_poset is None or j_poset == POINT else \
      induce(fwd, j_poset, name="i")
  return JMorphismClass(rep, (rep,))


# ---------------------------------------------------------------------------
# shape morphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class JShapeMorphism:
  """A morphism of the quotient category: an enriched system morphism
  between chosen expansions of its endpoints.  Two presentations are the
  same morphism when they agree after transport across the canonical
  isomorphisms, which same_as decides."""
  pair: object
  source: object
  target: object
  source_expansion: Expansion
  target_expansion: Expansion
  morphism: JMorphism

  @property
  def j_poset(self):
    return self.morphism.j_poset

  def same_as(self, other, horizon=DEFAULT_HORIZON):
    if not isinstance(other, JShapeMorphism) or self.pair is not other.pair:
      raise ShapeError("comparison needs morphisms over one pair")
    if (self.source, self.target) != (other.source, other.target):
      raise ShapeError("comparison needs shared endpoints")
    if self.j_poset != other.j_poset:
      raise ShapeError("comparison needs a shared enrichment index")
    J = self.j_poset
    i = canonical_iso(self.pair, self.source, self.source_expansion,
                      other.source_expansion, J, horizon).representative
    j = canonical_iso(self.pair, self.target, self.target_expansion,
                      other.target_expansion, J, horizon).representative
    return equivalent_jmorphisms(compose_jmorphisms(j, self.morphism),
                                 compose_jmorphisms(other.morphism, i),
                                 horizon)

  def describe(self):
    return {"source": self.source, "target": self.target,
            "representative": self.morphism.describe()}


def shape_morphism(pair, X, Y, f, source_expansion=None,
                   target_expansion=None):
  """Wrap a morphism between expansion systems.  The designated
  expansions are assumed unless alternates are named."""
  rep = f.representative if isinstance(f, JMorphismClass) else f
  se = source_expansion if source_expansion is not None else pair.expansion(X)
  te = target_expansion if target_expansion is not None else pair.expansion(Y)
  if rep.source is not se.system:
    raise ShapeError("representative does not start at the source expansion")
  if rep.target is not te.system:
    raise ShapeError("representative does not land in the target expansion")
  return JShapeMorphism(pair, X, Y, se, te, rep)


def identity_shape_morphism(pair, X, j_poset=None):
  p = pair.expansion(X)
  jm = identity_jmorphism(p.system, j_poset if j_poset is not None else POINT)
  return JShapeMorphism(pair, X, X, p, p, jm)


def compose_shape_morphisms(g, f, horizon=DEFAULT_HORIZON):
  """g after f; a canonical bridge is inserted when the middle expansions
  differ."""
  if f.pair is not g.pair:
    raise ShapeError("composition needs morphisms over one pair")
  if f.target != g.source:
    raise ShapeError("composition needs a matching middle object")
  if f.j_poset != g.j_poset:
    raise ShapeError("composition needs a shared enrichment index")
  if g.source_expansion.system is f.target_expansion.system:
    rep = compose_jmorphisms(g.morphism, f.morphism)
  else:
    bridge = canonical_iso(f.pair, f.target, f.target_expansion,
                           g.source_expansion, f.j_poset,
                           horizon).representative
    rep = compose_jmorphisms(g.morphism,
                             compose_jmorphisms(bridge, f.morphism))
  return JShapeMorphism(f.pair, f.source, g.target, f.source_expansion,
                        g.target_expansion, rep)


def rebase(F, source_expansion, target_expansion, horizon=DEFAULT_HORIZON):
  """The same shape morphism presented between other expansions of its
  endpoints, via the canonical isomorphisms."""
  J = F.j_poset
  i = canonical_iso(F.pair, F.source, source_expansion, F.source_expansion,
                    J, horizon).representative
  j = canonical_iso(F.pair, F.target, F.target_expansion, target_expansion,
                    J, horizon).representative
  rep = compose_jmorphisms(j, compose_jmorphisms(F.morphism, i))
  return JShapeMorphism(F.pair, F.source, F.target, source_expansion,
                        target_expansion, rep)


# ---------------------------------------------------------------------------
# the functor from the ambient category
# ---------------------------------------------------------------------------


def shape_functor(pair, f, j_poset=None, horizon=DEFAULT_HORIZON):
  """Image of an ambient morphism: factor each target leg composite
  through the source expansion, stage by stage."""
  if not isinstance(f, Morphism):
    raise ShapeError("shape_functor lifts a single ambient morphism")
  cat = pair.cat
  p = pair.expansion(f.source)
  q = pair.expansion(f.target)
  tab, fams = {}, {}
  for mu in q.system.index.elements():
    h = cat.compose(q.leg(mu), f)
    hit = _factor_through(cat, p, h)
    if hit is None:
      raise ShapeError(f"no stage factorization at {mu!r}; the designated "
                       f"expansion of {f.source!r} is invalid")
    lam, w = hit
    tab[mu] = lam
    fams[mu] = MorphismFamily.constant(POINT, w)
  index = IndexFunction.from_table(q.system.index, p.system.index, tab)
  jm = JMorphism(f"S({f.value})", p.system, q.system, POINT, index, fams)
  if not check_jmorphism(jm, horizon):
    raise ShapeError("stage factorizations do not merge; a designated "
                     "expansion is invalid")
  if j_poset is not None and j_poset != POINT:
    jm = induce(jm, j_poset, name=f"S({f.value})")
  return JShapeMorphism(pair, f.source, f.target, p, q, jm)


def plain_shape_morphism(pair, u, j_poset=None):
  """A subcategory morphism read as a shape morphism between one-stage
  expansions."""
  J = j_poset if j_poset is not None else POINT
  for obj in (u.source, u.target):
    if obj not in pair.d_objects:
      raise ShapeError(f"{obj!r} is not in the subcategory")
  se = rudimentary_expansion(pair.cat, u.source)
  te = rudimentary_expansion(pair.cat, u.target)
  index = IndexFunction.from_table(te.system.index, se.system.index,
                                   {"*": "*"})
  jm = JMorphism(u.value, se.system, te.system, J, index,
                 {"*": MorphismFamily.constant(J, u)})
  return JShapeMorphism(pair, u.source, u.target, se, te, jm)


# ---------------------------------------------------------------------------
# uniform factorization of enriched families
# ---------------------------------------------------------------------------


def _uniform_stage(pair, phis):
  """First stage whose leg factors every member value of the family,
  with the member -> factor table; (expansion, None, None) when no single
  stage works."""
  cat = pair.cat
  p = pair.expansion(phis.source)
  values = []
  for m in phis.members():
    if m not in values:
      values.append(m)
  for lam in p.system.index.elements():
    table = {}
    for val in values:
      w = next((cand for cand in cat.hom(p.system.object_at(lam), phis.target)
                if cat.compose(cand, p.leg(lam)) == val), None)
      if w is None:
        table = None
        break
      table[val] = w
    if table is not None:
      return p, lam, table
  return p, None, None


def uniform_factorize(pair, X, Q, phis, horizon=DEFAULT_HORIZON):
  """Factor an enriched family of plain morphisms X -> Q through a single
  stage leg of the designated expansion; the result is a shape morphism
  into the one-stage system on Q."""
  if Q not in pair.d_objects:
    raise ShapeError(f"{Q!r} is not in the subcategory")
  if phis.source != X or phis.target != Q:
    raise ShapeError(f"family endpoints must run {X!r} -> {Q!r}")
  p, lam, table = _uniform_stage(pair, phis)
  if lam is None:
    raise NotUniformlyFactorizable(
        f"no single stage of the expansion of {X!r} factors every member")
  fam = phis.map_values(lambda m: table[m])
  target = rudimentary_expansion(pair.cat, Q)
  index = IndexFunction.from_table(target.system.index, p.system.index,
                                   {"*": lam})
  # one target stage: the eventual pair condition is vacuous
  jm = JMorphism(f"F@{lam}", p.system, target.system, phis.j_poset, index,
                 {"*": fam})
  return JShapeMorphism(pair, X, Q, p, target, jm)


def inducing_family(pair, F):
  """Rebuild the plain enriched family from a shape morphism into a
  one-stage identity-leg expansion: compose the stage family with the
  chosen source leg."""
  te = F.target_expansion
  stages = te.system.index.elements()
  if stages is None or len(stages) != 1:
    raise ShapeError("the family is read off a one-stage target expansion")
  s0 = stages[0]
  if not pair.cat.is_identity(te.leg(s0)):
    raise ShapeError("the target expansion leg must be an identity")
  lam = F.morphism.index_fn(s0)
  return F.morphism.family_at(s0).map_pre(pair.cat,
                                          F.source_expansion.leg(lam))


def almost_equal(pair, phis, phis2, horizon=DEFAULT_HORIZON):
  """Eventual pointwise equality of two uniformly factorizable enriched
  families with shared endpoints."""
  if (phis.source, phis.target) != (phis2.source, phis2.target):
    raise ShapeError("families must share endpoints")
  if phis.j_poset != phis2.j_poset:
    raise ShapeError("families must share the enrichment index")
  for fam in (phis, phis2):
    _, lam, _ = _uniform_stage(pair, fam)
    if lam is None:
      raise NotUniformlyFactorizable(
          f"a compared family does not factor through a single stage of "
          f"the expansion of {fam.source!r}")
  return eventually_equal(pair.cat, phis, phis2, horizon)


# ---------------------------------------------------------------------------
# isomorphism of subcategory objects in the quotient
# ---------------------------------------------------------------------------


def same_shape_on_d(pair, P, Q, j_poset=None, horizon=DEFAULT_HORIZON,
                    budget=DEFAULT_BUDGET):
  """Search the enrichment classes between the one-stage systems on P and
  Q for a mutually inverse pair."""
  J = j_poset if j_poset is not None else POINT
  for obj in (P, Q):
    if obj not in pair.d_objects:
      raise ShapeError(f"{obj!r} is not in the subcategory")
  cat = pair.cat
  sysP = rudimentary(cat, P, f"<{P}>")
  sysQ = rudimentary(cat, Q, f"<{Q}>")
  # over an infinite enrichment a short window suffices: any inverse pair
  # forces a stagewise-invertible member, so a constant candidate exists
  win = horizon if J.is_finite else min(horizon, 2)
  fwd = hom_classes(sysP, sysQ, J, horizon=win, budget=budget)
  bwd = hom_classes(sysQ, sysP, J, horizon=win, budget=budget)
  id_p = identity_jmorphism(sysP, J)
  id_q = identity_jmorphism(sysQ, J)
  for F in fwd:
    for G in bwd:
      gf = compose_jmorphisms(G.representative, F.representative)
      fg = compose_jmorphisms(F.representative, G.representative)
      if equivalent_jmorphisms(gf, id_p, win) and \
         equivalent_jmorphisms(fg, id_q, win):
        return Verdict.holds({"forward": F.representative.describe(),
                              "backward": G.representative.describe()})
  return Verdict.fails({"forward_classes": len(fwd),
                        "backward_classes": len(bwd)})


# ---------------------------------------------------------------------------
# gluing stagewise morphisms into an expansion target
# ---------------------------------------------------------------------------


def _based_at(F, px):
  """True when F already runs from the designated expansion into a
  one-stage identity-leg target."""
  te = F.target_expansion
  st = te.system.index.elements()
  return (F.source_expansion is px and st is not None and len(st) == 1
          and F.pair.cat.is_identity(te.leg(st[0])))


def lift_system_morphism(pair, X, q, H, horizon=DEFAULT_HORIZON):
  """Glue one shape morphism per stage of a target expansion into a
  single shape morphism to its object.  The stage morphisms must commute
  with the bonds; the glued morphism satisfies every leg identity and is
  the only class that does."""
  Y = q.obj
  v = check_expansion(pair, Y, q)
  if not v:
    raise ShapeError(f"the target record is not an expansion: "
                     f"{v.counterexample}")
  stages = q.system.index.elements()
  if set(H) != set(stages):
    raise ShapeError("one stage morphism per target stage is required")
  px = pair.expansion(X)
  j_posets = {H[mu].j_poset for mu in stages}
  if len(j_posets) != 1:
    raise ShapeError("stage morphisms must share the enrichment index")
  J = next(iter(j_posets))

  norm = {}
  for mu in stages:
    F = H[mu]
    if F.pair is not pair:
      raise ShapeError("stage morphisms must live over the given pair")
    if F.source != X or F.target != q.system.object_at(mu):
      raise ShapeError(f"stage morphism at {mu!r} has wrong endpoints")
    if _based_at(F, px):
      norm[mu] = F
    else:
      rud = rudimentary_expansion(pair.cat, F.target)
      norm[mu] = rebase(F, px, rud, horizon)

  def stage0(mu):
    return norm[mu].target_expansion.system.index.elements()[0]

  # compatibility with the bonds, checked over the common presentations
  for mu in stages:
    for mu2 in stages:
      if mu == mu2 or not q.system.index.le(mu, mu2):
        continue
      u = q.system.bond(mu, mu2)
      src_sys = norm[mu2].target_expansion.system
      tgt_sys = norm[mu].target_expansion.system
      bond_jm = JMorphism(
          u.value, src_sys, tgt_sys, J,
          IndexFunction.from_table(tgt_sys.index, src_sys.index,
                                   {stage0(mu): stage0(mu2)}),
          {stage0(mu): MorphismFamily.constant(J, u)})
      rhs = compose_jmorphisms(bond_jm, norm[mu2].morphism)
      if not equivalent_jmorphisms(norm[mu].morphism, rhs, horizon):
        raise ShapeError(f"stage morphisms are incompatible with the bond "
                         f"at ({mu!r}, {mu2!r})")

  tab = {mu: norm[mu].morphism.index_fn(stage0(mu)) for mu in stages}
  fams = {mu: norm[mu].morphism.family_at(stage0(mu)) for mu in stages}
  index = IndexFunction.from_table(q.system.index, px.system.index, tab)
  glued = JMorphism("F", px.system, q.system, J, index, fams)
  if not check_jmorphism(glued, horizon):
    raise ShapeError("glued morphism fails the eventual pair condition; "
                     "an expansion is inconsistent")
  return JShapeMorphism(pair, X, Y, px, q, glued)
