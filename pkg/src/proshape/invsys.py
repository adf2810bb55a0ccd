"""Inverse systems: stage-indexed objects with contravariant bonds.

A system over an index poset L assigns an object X_a to every stage a and
a bond p_ab: X_b -> X_a to every pair a <= b, subject to identity bonds
at equal stages and path independence of composition.  Explicit systems
(finite stage sets) store objects and a generating family of bonds, with
the remaining bonds composed along stored chains.  Rule systems (towers
over omega and the like) compute objects and bonds on demand, either from
one procedure for arbitrary pairs or from a ladder of single-step bonds.
"""

from __future__ import annotations

import itertools

from .cat import CatError, CycGrp, FinCat, Morphism
from .order import DEFAULT_HORIZON, FinitePoset, OmegaPoset, upper_bound


class InvSysError(Exception):
  """Malformed system data or a bond request outside the order."""


class InverseSystem:

  def __init__(self, name, cat, index_poset, objects, bonds=None, steps=None,
               uniform_step=None, validate_refs=True):
    """objects: mapping or callable stage -> object.
    bonds: mapping (a, b) -> Morphism for a <= b, or callable (a, b) -> Morphism.
    steps: callable n -> Morphism X_{n+1} -> X_n, for towers over omega.
    uniform_step: declares that every single-step bond is this one
    morphism; recurrence arguments over the stage axis rely on it."""
    self.name = name
    self.cat = cat
    self.index = index_poset
    self._objects = objects
    self._bond_data = bonds
    self._steps = steps
    self.uniform_step = uniform_step
    self._memo = {}
    if bonds is None and steps is None and uniform_step is None:
      self._bond_data = {}
    if steps is not None and not isinstance(index_poset, OmegaPoset):
      raise InvSysError("step ladders describe towers over omega")
    if uniform_step is not None:
      if not isinstance(index_poset, OmegaPoset):
        raise InvSysError("uniform steps describe towers over omega")
      if uniform_step.source != uniform_step.target:
        raise InvSysError("a uniform step must be an endomorphism")
      if steps is None and bonds is None:
        self._steps = lambda n: uniform_step
    if validate_refs and isinstance(objects, dict):
      missing = [a for a in (index_poset.elements() or ()) if a not in objects]
      if missing:
        raise InvSysError(f"no object at stage {missing[0]!r}")

  # -- access -----------------------------------------------------------------

  def object_at(self, a):
    if callable(self._objects):
      return self._objects(a)
    try:
      return self._objects[a]
    except KeyError:
      raise InvSysError(f"no object at stage {a!r}") from None

  def bond(self, a, b):
    """The bond X_b -> X_a for a <= b."""
    if not self.index.le(a, b):
      raise InvSysError(f"bond requested against the order: {a!r}, {b!r}")
    key = (a, b)
    if key in self._memo:
      return self._memo[key]
    out = self._compute_bond(a, b)
    self._memo[key] = out
    return out

  def _compute_bond(self, a, b):
    if isinstance(self._bond_data, dict):
      if (a, b) in self._bond_data:
        return self._bond_data[(a, b)]
      if a == b:
        return self.cat.identity(self.object_at(a))
      path = self._bond_path(a, b)
      if path is None:
        raise InvSysError(f"no bond or bond path for {a!r} <= {b!r}")
      # path runs downward from b, so each later bond applies after
      out = path[0]
      for mor in path[1:]:
        out = self.cat.compose(mor, out)
      return out
    if a == b and self._steps is not None:
      return self.cat.identity(self.object_at(a))
    if self._steps is not None:
      out = self._steps(b - 1)
      for n in range(b - 2, a - 1, -1):
        out = self.cat.compose(self._steps(n), out)
      return out
    return self._bond_data(a, b)

  def _bond_path(self, a, b):
    """Stored bonds composing X_b -> X_a, found by a deterministic BFS
    downward from b; None when no stored chain connects them."""
    down = {}
    for (lo, hi) in self._bond_data:
      down.setdefault(hi, []).append(lo)
    for hi in down:
      down[hi] = sorted(down[hi], key=self._enum_rank)
    frontier = [(b, [])]
    seen = {b}
    while frontier:
      stage, mors = frontier.pop(0)
      for lo in down.get(stage, ()):
        if lo in seen:
          continue
        trail = mors + [self._bond_data[(lo, stage)]]
        if lo == a:
          return trail
        seen.add(lo)
        frontier.append((lo, trail))
    return None

  def _enum_rank(self, stage):
    els = self.index.elements()
    if els is not None:
      return els.index(stage)
    return stage if isinstance(stage, int) else 0

  def stages(self, horizon=DEFAULT_HORIZON):
    els = self.index.elements()
    return list(els) if els is not None else self.index.enumerate_to(horizon)

  def describe(self):
    out = {"name": self.name, "index": self.index.describe()}
    if isinstance(self._objects, dict):
      out["objects"] = {str(a): self._objects[a] for a in self.stages()}
    else:
      out["objects"] = "rule"
    return out


def tower(cat, obj_fn, step_fn, name=""):
  """Tower over omega from an object rule and single-step bonds."""
  return InverseSystem(name, cat, OmegaPoset(), obj_fn, steps=step_fn)


def uniform_tower(cat, obj, step_mor, name=""):
  """Tower with one object and one step bond repeated at every stage."""
  if (step_mor.source, step_mor.target) != (obj, obj):
    raise InvSysError("step must be an endomorphism of the tower object")
  return InverseSystem(name, cat, OmegaPoset(), lambda n: obj,
                       uniform_step=step_mor)


def rudimentary(cat, obj, name=""):
  """One-stage system: the embedding of a plain object."""
  poset = FinitePoset.chain(["*"])
  return InverseSystem(name, cat, poset, {"*": obj},
                       {("*", "*"): cat.identity(obj)})


def truncate(sys, stages, name=None):
  """Explicit finite system on a stage subset, bonds copied (composing
  through dropped stages happens in the source system)."""
  stages = list(stages)
  sub = [(a, b) for a in stages for b in stages if a != b and sys.index.le(a, b)]
  poset = FinitePoset.from_le_pairs(stages, sub)
  objects = {a: sys.object_at(a) for a in stages}
  bonds = {(a, b): sys.bond(a, b) for a in stages for b in stages
           if sys.index.le(a, b)}
  return InverseSystem(name or f"{sys.name}|{len(stages)}", sys.cat, poset,
                       objects, bonds)


def validate_system(sys, horizon=DEFAULT_HORIZON):
  """Structured law violations; exhaustive over finite stage sets,
  windowed for rule systems."""
  errors = []
  cat = sys.cat
  if sys.index.is_finite:
    stages = list(sys.index.elements())
    window = stages
  else:
    stages = sys.index.enumerate_to(min(horizon, 24))
    window = stages[:12]

  def check_bond(a, b):
    try:
      p = sys.bond(a, b)
    except InvSysError:
      errors.append({"error": "missing_bond", "pair": [a, b]})
      return None
    except CatError as e:
      errors.append({"error": "bond_composition_failed", "pair": [a, b],
                     "detail": str(e)})
      return None
    if p.source != sys.object_at(b) or p.target != sys.object_at(a):
      errors.append({"error": "bond_endpoints", "pair": [a, b],
                     "bond": p.describe()})
      return None
    if isinstance(cat, CycGrp) and not cat.valid_morphism(p):
      errors.append({"error": "not_a_morphism", "pair": [a, b],
                     "bond": p.describe()})
      return None
    if isinstance(cat, FinCat):
      try:
        declared = cat.endpoints(p.value)
      except KeyError:
        errors.append({"error": "unknown_morphism", "pair": [a, b],
                       "bond": p.describe()})
        return None
      if declared != (p.source, p.target):
        errors.append({"error": "endpoint_mismatch", "pair": [a, b],
                       "bond": p.describe()})
        return None
    return p

  for a in stages:
    p = check_bond(a, a)
    if p is not None and p != cat.identity(sys.object_at(a)):
      errors.append({"error": "identity_bond", "stage": a, "bond": p.describe()})

  comparable = [(a, b) for a, b in itertools.product(stages, stages)
                if a != b and sys.index.le(a, b)]
  bonds = {}
  for a, b in comparable:
    p = check_bond(a, b)
    if p is not None:
      bonds[(a, b)] = p

  for a, b in comparable:
    if (a, b) not in bonds:
      continue
    for c in (stages if sys.index.is_finite else window):
      if b != c and sys.index.le(b, c) and (b, c) in bonds:
        if (a, c) not in bonds:
          continue
        try:
          composed = cat.compose(bonds[(a, b)], bonds[(b, c)])
        except CatError as e:
          errors.append({"error": "bond_composition_failed",
                         "triple": [a, b, c], "detail": str(e)})
          continue
        if composed != bonds[(a, c)]:
          errors.append({"error": "composition", "triple": [a, b, c],
                         "composed": composed.describe(),
                         "stored": bonds[(a, c)].describe()})

  return errors
