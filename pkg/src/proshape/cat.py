"""Categories and J-indexed morphism families.

Two backends carry all examples at desk scale: FinCat (explicit objects,
named morphisms, a composition table) and CycGrp (objects are positive
moduli standing for the cyclic groups Z/m, morphisms are residues c with
c*m = 0 mod n, composition is multiplication in the target).

A MorphismFamily is a J-indexed family of parallel morphisms.  Families
are stored in closed forms that make "equal for all large j" decidable:
a full table when J is finite, an eventually periodic sequence when J is
omega, and a grid form over product indexes (an inner sequence sampled at
the max of per-coordinate staircases, which is exactly the shape produced
by index transfer).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .eventual import PeriodicSeq, Staircase, grid_tail_equal
from .order import (DEFAULT_HORIZON, FinitePoset, IndexPoset, OmegaPoset,
                    ProductPoset, Verdict)


class CatError(Exception):
  """Malformed category data or an operation outside its contract."""


@dataclass(frozen=True)
class Morphism:
  source: object
  target: object
  value: object

  def describe(self):
    return {"source": self.source, "target": self.target, "value": self.value}


class Category:
  kind = "abstract"

  def objects(self):
    """All objects, or None when the object class is symbolic."""
    return None

  def hom(self, a, b):
    raise NotImplementedError

  def compose(self, g, f):
    raise NotImplementedError

  def identity(self, obj):
    raise NotImplementedError

  def is_identity(self, mor):
    return mor == self.identity(mor.source)


class FinCat(Category):
  """Explicit finite category.  Structural references are validated here;
  the category laws themselves are checked by validate_category so that
  broken tables can be loaded and reported on."""

  kind = "finite"

  def __init__(self, objects, morphisms, composition, identities, name=""):
    self.name = name
    self._objects = tuple(objects)
    if len(set(self._objects)) != len(self._objects):
      raise CatError("duplicate objects")
    self._mors = {}
    for mname, (src, tgt) in morphisms.items():
      if src not in self._objects or tgt not in self._objects:
        raise CatError(f"morphism {mname!r} references unknown object")
      self._mors[mname] = (src, tgt)
    self._comp = {}
    for (g, f), h in composition.items():
      for n in (g, f, h):
        if n not in self._mors:
          raise CatError(f"composition table references unknown morphism {n!r}")
      self._comp[(g, f)] = h
    self._ids = {}
    for obj, mname in identities.items():
      if obj not in self._objects:
        raise CatError(f"identity listed for unknown object {obj!r}")
      if mname not in self._mors:
        raise CatError(f"identity {mname!r} is not a declared morphism")
      if self._mors[mname] != (obj, obj):
        raise CatError(f"identity {mname!r} is not an endomorphism of {obj!r}")
      self._ids[obj] = mname
    missing = [o for o in self._objects if o not in self._ids]
    if missing:
      raise CatError(f"objects without identities: {missing}")

  def objects(self):
    return self._objects

  def mor(self, name):
    try:
      src, tgt = self._mors[name]
    except KeyError:
      raise CatError(f"unknown morphism {name!r}") from None
    return Morphism(src, tgt, name)

  def all_morphisms(self):
    return tuple(Morphism(s, t, n) for n, (s, t) in self._mors.items())

  def hom(self, a, b):
    return tuple(Morphism(a, b, n) for n, (s, t) in self._mors.items()
                 if s == a and t == b)

  def endpoints(self, name):
    return self._mors[name]

  def composition_table(self):
    return dict(self._comp)

  def compose(self, g, f):
    if f.target != g.source:
      raise CatError(f"cannot compose {g.value!r} after {f.value!r}: "
                     f"{f.target!r} != {g.source!r}")
    try:
      h = self._comp[(g.value, f.value)]
    except KeyError:
      raise CatError(f"no composite recorded for ({g.value!r}, {f.value!r})") from None
    src, tgt = self._mors[h]
    return Morphism(src, tgt, h)

  def identity(self, obj):
    if obj not in self._ids:
      raise CatError(f"unknown object {obj!r}")
    return Morphism(obj, obj, self._ids[obj])

  def identity_names(self):
    return set(self._ids.values())


class CycGrp(Category):
  """Cyclic groups and the zero-preserving maps between them.  An object
  is a positive modulus m; a morphism m -> n is a residue c mod n with
  c*m = 0 mod n (the condition for x -> c*x to be well defined)."""

  kind = "cyclic"

  def contains_object(self, m):
    return isinstance(m, int) and m >= 1

  def valid_morphism(self, mor):
    return (self.contains_object(mor.source) and self.contains_object(mor.target)
            and isinstance(mor.value, int)
            and 0 <= mor.value < mor.target
            and (mor.value * mor.source) % mor.target == 0)

  def hom(self, m, n):
    if not (self.contains_object(m) and self.contains_object(n)):
      raise CatError("moduli must be positive integers")
    return tuple(Morphism(m, n, c) for c in range(n) if (c * m) % n == 0)

  def compose(self, g, f):
    if f.target != g.source:
      raise CatError(f"cannot compose: {f.target!r} != {g.source!r}")
    return Morphism(f.source, g.target, (g.value * f.value) % g.target)

  def identity(self, m):
    if not self.contains_object(m):
      raise CatError("moduli must be positive integers")
    return Morphism(m, m, 1 % m)


CYCGRP = CycGrp()


# ---------------------------------------------------------------------------
# category-level decision procedures
# ---------------------------------------------------------------------------


def validate_category(cat, budget=None):
  """Structured law violations; empty list means valid.  Exhaustive for
  FinCat.  CycGrp satisfies the laws by construction."""
  if isinstance(cat, CycGrp):
    return []
  if not isinstance(cat, FinCat):
    raise CatError(f"unknown category kind: {cat!r}")

  errors = []
  mors = cat.all_morphisms()
  table = cat.composition_table()

  for g, f in itertools.product(mors, mors):
    if f.target != g.source:
      continue
    h = table.get((g.value, f.value))
    if h is None:
      errors.append({"error": "missing_composite", "pair": [g.value, f.value]})
      continue
    src, tgt = cat.endpoints(h)
    if (src, tgt) != (f.source, g.target):
      errors.append({"error": "type_mismatch", "pair": [g.value, f.value],
                     "got": h, "expected": [f.source, g.target]})

  def comp(g, f):
    return table.get((g.value, f.value))

  for h, g, f in itertools.product(mors, mors, mors):
    if f.target != g.source or g.target != h.source:
      continue
    gf, hg = comp(g, f), comp(h, g)
    if gf is None or hg is None:
      continue  # already reported as missing
    left = table.get((h.value, gf))
    right = table.get((hg, f.value))
    if left is None or right is None:
      continue
    if left != right:
      errors.append({"error": "associativity", "triple": [h.value, g.value, f.value],
                     "left": left, "right": right})

  for f in mors:
    lid = cat.identity(f.target)
    got = comp(lid, f)
    if got is not None and got != f.value:
      errors.append({"error": "identity", "morphism": f.value, "side": "left",
                     "got": got})
    rid = cat.identity(f.source)
    got = comp(f, rid)
    if got is not None and got != f.value:
      errors.append({"error": "identity", "morphism": f.value, "side": "right",
                     "got": got})

  return errors


def compose_morphisms(cat, g, f):
  return cat.compose(g, f)


def find_inverse(cat, mor):
  """Two-sided inverse, or None.  Exact for both backends."""
  if isinstance(cat, CycGrp):
    if mor.source != mor.target:
      return None
    n = mor.target
    if math.gcd(mor.value if n > 1 else 1, n) != 1:
      return None
    inv = pow(mor.value, -1, n) if n > 1 else 0
    return Morphism(n, n, inv)
  ids = (cat.identity(mor.source), cat.identity(mor.target))
  for cand in cat.hom(mor.target, mor.source):
    try:
      if (cat.compose(cand, mor) == ids[0] and cat.compose(mor, cand) == ids[1]):
        return cand
    except CatError:
      continue
  return None


# ---------------------------------------------------------------------------
# J-indexed morphism families
# ---------------------------------------------------------------------------

TABLE = "table"
SEQ = "seq"
GRID = "grid"


def _finite_max(poset):
  els = poset.elements()
  maxes = [m for m in els if all(poset.le(e, m) for e in els)]
  return maxes[0] if maxes else None


class MorphismFamily:
  """J-indexed family of parallel morphisms in a fixed closed form."""

  def __init__(self, j_poset, source, target, tag, payload):
    self.j_poset = j_poset
    self.source = source
    self.target = target
    self.tag = tag
    self.payload = payload

  # -- constructors ---------------------------------------------------------

  @staticmethod
  def constant(j_poset, mor):
    if j_poset.is_finite:
      table = {j: mor for j in j_poset.elements()}
      return MorphismFamily(j_poset, mor.source, mor.target, TABLE, table)
    if isinstance(j_poset, OmegaPoset):
      return MorphismFamily(j_poset, mor.source, mor.target, SEQ,
                            PeriodicSeq((), (mor,)))
    if isinstance(j_poset, ProductPoset):
      stairs = (Staircase.identity(), Staircase.identity())
      return MorphismFamily(j_poset, mor.source, mor.target, GRID,
                            (PeriodicSeq((), (mor,)), stairs))
    raise CatError("constant families need a finite, omega, or product index")

  @staticmethod
  def step(j_poset, base, steps):
    """Piecewise-constant family: below every threshold the base morphism,
    from each threshold on its piece.  Thresholds must form a chain."""
    for _, mor in steps:
      if (mor.source, mor.target) != (base.source, base.target):
        raise CatError("step pieces must be parallel to the base")
    thresholds = [t for t, _ in steps]
    if len(set(map(repr, thresholds))) != len(thresholds):
      raise CatError("duplicate step thresholds")
    for t in thresholds:
      if not j_poset.contains(t):
        raise CatError(f"threshold {t!r} outside the index poset")
    for a, b in itertools.combinations(thresholds, 2):
      if not (j_poset.le(a, b) or j_poset.le(b, a)):
        raise CatError(f"step thresholds must be comparable: {a!r}, {b!r}")
    ordered = sorted(steps, key=lambda s: sum(
        1 for t in thresholds if j_poset.le(t, s[0])))

    def value_at(j):
      out = base
      for t, mor in ordered:
        if j_poset.le(t, j):
          out = mor
      return out

    if j_poset.is_finite:
      table = {j: value_at(j) for j in j_poset.elements()}
      return MorphismFamily(j_poset, base.source, base.target, TABLE, table)
    if isinstance(j_poset, OmegaPoset):
      top = max(thresholds) if thresholds else 0
      transient = tuple(value_at(j) for j in range(top))
      seq = PeriodicSeq(transient, (value_at(top),))
      return MorphismFamily(j_poset, base.source, base.target, SEQ, seq)
    raise CatError("step families need a finite or omega index")

  @staticmethod
  def rule(j_poset, source_mod, target_mod, coeffs):
    """CycGrp family over omega: value at j is the residue of an integer
    polynomial in j.  Residues mod n repeat with period dividing n, so
    validity and the closed form are settled by one period."""
    if not isinstance(j_poset, OmegaPoset):
      raise CatError("rule families are indexed by omega")
    n = target_mod
    if not (isinstance(source_mod, int) and source_mod >= 1 and
            isinstance(n, int) and n >= 1):
      raise CatError("moduli must be positive integers")
    coeffs = tuple(int(c) for c in coeffs)

    def residue(j):
      return sum(c * j**i for i, c in enumerate(coeffs)) % n

    bad = [j for j in range(n) if (residue(j) * source_mod) % n != 0]
    if bad:
      raise CatError(f"rule does not land in the hom set at j={bad[0]}")
    cycle = tuple(Morphism(source_mod, n, residue(j)) for j in range(n))
    return MorphismFamily(j_poset, source_mod, n, SEQ, PeriodicSeq((), cycle))

  @staticmethod
  def from_table(j_poset, table):
    if not j_poset.is_finite:
      raise CatError("tables need a finite index poset")
    table = dict(table)
    missing = [j for j in j_poset.elements() if j not in table]
    if missing:
      raise CatError(f"family undefined at {missing[0]!r}")
    mors = list(table.values())
    src, tgt = mors[0].source, mors[0].target
    if any((m.source, m.target) != (src, tgt) for m in mors):
      raise CatError("family members must be parallel")
    return MorphismFamily(j_poset, src, tgt, TABLE, table)

  @staticmethod
  def from_seq(j_poset, seq):
    if not isinstance(j_poset, OmegaPoset):
      raise CatError("sequence families are indexed by omega")
    mors = list(seq.transient) + list(seq.cycle)
    src, tgt = mors[0].source, mors[0].target
    if any((m.source, m.target) != (src, tgt) for m in mors):
      raise CatError("family members must be parallel")
    return MorphismFamily(j_poset, src, tgt, SEQ, seq)

  @staticmethod
  def grid(j_poset, inner, stairs):
    if not (isinstance(j_poset, ProductPoset) and not j_poset.is_finite):
      raise CatError("grid families are indexed by infinite products")
    mors = list(inner.transient) + list(inner.cycle)
    src, tgt = mors[0].source, mors[0].target
    if any((m.source, m.target) != (src, tgt) for m in mors):
      raise CatError("family members must be parallel")
    return MorphismFamily(j_poset, src, tgt, GRID, (inner, tuple(stairs)))

  # -- access -----------------------------------------------------------------

  def at(self, j):
    if self.tag == TABLE:
      try:
        return self.payload[j]
      except KeyError:
        raise CatError(f"family undefined at {j!r}") from None
    if self.tag == SEQ:
      return self.payload.at(j)
    inner, stairs = self.payload
    return inner.at(max(s.value(c) for s, c in zip(stairs, j)))

  def members(self):
    """The finitely many distinct member morphisms (with repetition as stored)."""
    if self.tag == TABLE:
      return tuple(self.payload[j] for j in self.j_poset.elements())
    seq = self.payload if self.tag == SEQ else self.payload[0]
    return tuple(seq.transient) + tuple(seq.cycle)

  def is_constant(self):
    vals = set(self.members())
    return len(vals) == 1

  def constant_value(self):
    vals = set(self.members())
    return next(iter(vals)) if len(vals) == 1 else None

  def map_post(self, cat, mor):
    """Family j -> mor o self(j)."""
    if mor.source != self.target:
      raise CatError("post-composition endpoint mismatch")
    return self._map(lambda m: cat.compose(mor, m))

  def map_pre(self, cat, mor):
    """Family j -> self(j) o mor."""
    if mor.target != self.source:
      raise CatError("pre-composition endpoint mismatch")
    return self._map(lambda m: cat.compose(m, mor))

  def map_values(self, fn):
    """Pointwise image j -> fn(self(j)); fn must be well defined on the
    stored member morphisms."""
    return self._map(fn)

  def _map(self, fn):
    if self.tag == TABLE:
      table = {j: fn(m) for j, m in self.payload.items()}
      return MorphismFamily.from_table(self.j_poset, table)
    if self.tag == SEQ:
      return MorphismFamily.from_seq(self.j_poset, self.payload.map(fn))
    inner, stairs = self.payload
    return MorphismFamily.grid(self.j_poset, inner.map(fn), stairs)

  def key(self):
    """Hashable signature used by recurrence detection."""
    if self.tag == TABLE:
      items = tuple((j, self.payload[j]) for j in self.j_poset.elements())
      return (TABLE, self.source, self.target, items)
    if self.tag == SEQ:
      return (SEQ, self.source, self.target, self.payload)
    inner, stairs = self.payload
    return (GRID, self.source, self.target, inner, stairs)

  def __eq__(self, other):
    return (isinstance(other, MorphismFamily)
            and self.j_poset == other.j_poset and self.key() == other.key())

  def __hash__(self):
    return hash(self.key())

  def describe(self):
    out = {"source": self.source, "target": self.target, "form": self.tag}
    if self.tag == TABLE:
      out["entries"] = {str(j): m.describe() for j, m in self.payload.items()}
    elif self.tag == SEQ:
      out["transient"] = [m.describe() for m in self.payload.transient]
      out["cycle"] = [m.describe() for m in self.payload.cycle]
    else:
      inner, stairs = self.payload
      out["inner_transient"] = [m.describe() for m in inner.transient]
      out["inner_cycle"] = [m.describe() for m in inner.cycle]
      out["stairs"] = len(stairs)
    return out


def compose_families(cat, g_fam, f_fam):
  """Pointwise composition j -> g(j) o f(j) over a shared index poset."""
  if f_fam.j_poset != g_fam.j_poset:
    raise CatError("families must share an index poset")
  if f_fam.target != g_fam.source:
    raise CatError("family endpoints do not compose")
  if f_fam.tag == TABLE:
    table = {j: cat.compose(g_fam.at(j), f_fam.at(j))
             for j in f_fam.j_poset.elements()}
    return MorphismFamily.from_table(f_fam.j_poset, table)
  if f_fam.tag == SEQ:
    seq = g_fam.payload.zip_with(f_fam.payload, lambda g, f: cat.compose(g, f))
    return MorphismFamily.from_seq(f_fam.j_poset, seq)
  g_inner, g_stairs = g_fam.payload
  f_inner, f_stairs = f_fam.payload
  if g_fam.is_constant():
    return f_fam._map(lambda m: cat.compose(g_fam.constant_value(), m))
  if f_fam.is_constant():
    return g_fam._map(lambda m: cat.compose(m, f_fam.constant_value()))
  if g_stairs == f_stairs:
    inner = g_inner.zip_with(f_inner, lambda g, f: cat.compose(g, f))
    return MorphismFamily.grid(f_fam.j_poset, inner, f_stairs)
  raise CatError("grid families with different stairs cannot be composed "
                 "pointwise in closed form")


def eventually_equal(cat, a, b, horizon=DEFAULT_HORIZON):
  """Does a(j) = b(j) for all sufficiently large j?  Exact for every
  stored form; product indexes go through the grid decision procedure."""
  if a.j_poset != b.j_poset:
    raise CatError("families must share an index poset")
  if (a.source, a.target) != (b.source, b.target):
    raise CatError("families must be parallel")
  if a.tag != b.tag:
    raise CatError("families over one index poset should share a form")

  if a.tag == TABLE:
    top = _finite_max(a.j_poset)
    if top is None:
      raise CatError("finite index posets must be directed for tail questions")
    if a.at(top) == b.at(top):
      return Verdict.holds({"from": top})
    return Verdict.fails({"j": top, "left": a.at(top).describe(),
                          "right": b.at(top).describe()})

  if a.tag == SEQ:
    ok, info = a.payload.tail_equal(b.payload)
    if ok:
      return Verdict.holds({"from": info})
    j1, j2 = info
    return Verdict.fails({"j": j1, "recurs_at": j2,
                          "left": a.at(j1).describe(),
                          "right": b.at(j1).describe()})

  a_inner, a_stairs = a.payload
  b_inner, b_stairs = b.payload
  out = grid_tail_equal(a_inner, a_stairs, b_inner, b_stairs)
  restricted = getattr(a.j_poset, "restricted", False)
  if out.equal:
    return Verdict.holds({"from": list(out.witness)})
  p1, p2 = out.counterexample
  if restricted and not (a.j_poset.contains(p1) and a.j_poset.contains(p2)):
    # disagreements exist in the ambient grid but may miss the subset
    return Verdict.inconclusive(horizon, {"ambient_disagreement": list(p1)})
  return Verdict.fails({"j": list(p1), "recurs_at": list(p2),
                        "left": a.at(p1).describe(),
                        "right": b.at(p1).describe()})


def equal_everywhere(cat, a, b, horizon=DEFAULT_HORIZON):
  """Does a(j) = b(j) at every single j?  Exact for tables and sequences;
  grids are settled when their closed forms align and left open otherwise."""
  if a.j_poset != b.j_poset:
    raise CatError("families must share an index poset")
  if (a.source, a.target) != (b.source, b.target):
    raise CatError("families must be parallel")
  if a.tag == TABLE:
    for j in a.j_poset.elements():
      if a.at(j) != b.at(j):
        return Verdict.fails({"j": j, "left": a.at(j).describe(),
                              "right": b.at(j).describe()})
    return Verdict.holds({"checked": "all"})
  if a.tag == SEQ:
    ok, bad = a.payload.everywhere_equal(b.payload)
    if ok:
      return Verdict.holds({"checked": "all"})
    return Verdict.fails({"j": bad, "left": a.at(bad).describe(),
                          "right": b.at(bad).describe()})
  a_inner, a_stairs = a.payload
  b_inner, b_stairs = b.payload
  if a.key() == b.key():
    return Verdict.holds({"checked": "closed form"})
  if a.is_constant() and b.is_constant():
    if a.constant_value() == b.constant_value():
      return Verdict.holds({"checked": "constants"})
    return Verdict.fails({"j": [0, 0], "left": a.constant_value().describe(),
                          "right": b.constant_value().describe()})
  if a_stairs == b_stairs:
    ok, bad = a_inner.everywhere_equal(b_inner)
    if ok:
      return Verdict.holds({"checked": "shared stairs"})
    # an inner disagreement is only visible if some point reaches it
    for x in range(horizon + 1):
      for point in ((x, 0), (0, x), (x, x)):
        if a.at(point) != b.at(point):
          return Verdict.fails({"j": list(point),
                                "left": a.at(point).describe(),
                                "right": b.at(point).describe()})
    return Verdict.inconclusive(horizon)
  for x in range(horizon + 1):
    for point in ((x, 0), (0, x), (x, x)):
      if a.at(point) != b.at(point):
        return Verdict.fails({"j": list(point), "left": a.at(point).describe(),
                              "right": b.at(point).describe()})
  return Verdict.inconclusive(horizon)


def validate_family(cat, fam):
  """Each member must be a genuine morphism of cat with the family's
  endpoints; returns structured errors."""
  errors = []
  seen = set()
  for m in fam.members():
    if m in seen:
      continue
    seen.add(m)
    if (m.source, m.target) != (fam.source, fam.target):
      errors.append({"error": "family_endpoints", "member": m.describe()})
      continue
    if isinstance(cat, CycGrp):
      if not cat.valid_morphism(m):
        errors.append({"error": "not_a_morphism", "member": m.describe()})
    else:
      try:
        known = cat.endpoints(m.value)
      except KeyError:
        errors.append({"error": "unknown_morphism", "member": m.describe()})
        continue
      if known != (m.source, m.target):
        errors.append({"error": "endpoint_mismatch", "member": m.describe(),
                       "declared": list(known)})
  return errors
