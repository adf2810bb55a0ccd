"""Plain-text workspace files: named declarations resolved into engine
values, validated as they are built, with line/column positions on
every complaint.

Declarations, one per block, references resolving to earlier names:

  poset J { elements: 0, 1, 2; le: 0<=1, 1<=2 }
  poset W = omega
  poset K = product(W, W)
  category C { objects: A, B; morphisms: f: A->B, iA: A->A, iB: B->B;
               identity: A = iA, B = iB;
               compose: iA.iA = iA, f.iA = f, iB.f = f, iB.iB = iB }
  category cyc = cycgrp
  system X over J in C { object 0 = A; object 1 = B; bond 0<=1 = f }
  system T over omega in cyc { object = 4; step = 2 }
  indexmap phi : W -> K = affine (1,0) (1,0)
  indexmap psi : J -> J { 0 -> 0, 1 -> 1, 2 -> 2 }
  jmorphism h : X -> Y over J { index: 0 -> 0, 1 -> 0;
                                family 0 = const(f);
                                family 1 = table(0: f, 1: g) }
  jmorphism t : T -> T over W { index: affine (1,0);
                                cells cycle = [ const(2) ] }
  pair SH (C, D) { D: A, B;
                   expansion A = { 0: iA } into RA;
                   expansion B = { 0: iB } into RB }
  stages H for X into Y in SH { 0: h0, 1: h1 }

Family forms: const(m), table(j: m, ...), step[(j, m), ...] (value of
the first entry below its threshold, later entries from theirs on), and
rule(c0, c1, ...) (cyclic-group residue polynomial in j).  Tower
morphisms take transient/cycle cell lists instead of per-stage lines.
The first expansion per object is the designated one; later lines for
the same object are alternates, kept for transport experiments and
checked only structurally at load time.
"""

import re

from .cat import CYCGRP, CatError, FinCat, Morphism, MorphismFamily, \
    validate_category
from .invsys import InverseSystem, InvSysError, uniform_tower, validate_system
from .jmor import JmorError, JMorphism, validate_jmorphism
from .order import OMEGA, FinitePoset, IndexFunction, OmegaPoset, PosetError, \
    ProductPoset
from .shape import Expansion, ProReflectivePair, ShapeError, check_expansion


class WorkspaceError(Exception):

  def __init__(self, msg, line=None, col=None):
    self.line, self.col = line, col
    where = f"line {line}, column {col}: " if line is not None else ""
    super().__init__(where + msg)


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow>->)
  | (?P<le><=)
  | (?P<int>-?[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*|\*)
  | (?P<punct>[{}()\[\]:;,=.])
""", re.VERBOSE)


def _tokens(text):
  line, col = 1, 1
  pos = 0
  out = []
  while pos < len(text):
    m = _TOKEN.match(text, pos)
    if m is None:
      raise WorkspaceError(f"unexpected character {text[pos]!r}", line, col)
    kind = m.lastgroup
    val = m.group()
    if kind == "nl":
      line += 1
      col = 1
    else:
      if kind == "int":
        out.append(("INT", int(val), line, col))
      elif kind == "name":
        out.append(("NAME", val, line, col))
      elif kind in ("arrow", "le", "punct"):
        out.append(("PUNCT", val, line, col))
      col += len(val)
    pos = m.end()
  out.append(("EOF", None, line, col))
  return out


# ---------------------------------------------------------------------------
# the resolved workspace
# ---------------------------------------------------------------------------


class StageBundle:
  """Named stage-morphism collection for the glue command: references
  are kept by name and materialized against the pair on use."""

  def __init__(self, name, pair_name, source, target, entries):
    self.name = name
    self.pair_name = pair_name
    self.source = source
    self.target = target
    self.entries = entries  # stage -> jmorphism name


class Workspace:

  def __init__(self, path="<workspace>"):
    self.path = path
    self.posets = {}
    self.categories = {}
    self.systems = {}
    self.indexmaps = {}
    self.jmorphisms = {}
    self.pairs = {}
    self.alternates = {}   # pair name -> {object -> [Expansion, ...]}
    self.bundles = {}

  def _get(self, table, kind, name, line=None, col=None):
    try:
      return table[name]
    except KeyError:
      raise WorkspaceError(f"unknown {kind} {name!r}", line, col) from None

  def poset(self, name, line=None, col=None):
    if name == "omega":
      return OMEGA
    return self._get(self.posets, "poset", name, line, col)

  def category(self, name, line=None, col=None):
    return self._get(self.categories, "category", name, line, col)

  def system(self, name, line=None, col=None):
    return self._get(self.systems, "system", name, line, col)

  def indexmap(self, name, line=None, col=None):
    return self._get(self.indexmaps, "index map", name, line, col)

  def jmorphism(self, name, line=None, col=None):
    return self._get(self.jmorphisms, "morphism", name, line, col)

  def pair(self, name, line=None, col=None):
    return self._get(self.pairs, "pair", name, line, col)

  def bundle(self, name, line=None, col=None):
    return self._get(self.bundles, "stage bundle", name, line, col)

  def only_pair(self):
    if len(self.pairs) != 1:
      raise WorkspaceError("name the pair explicitly: the workspace "
                           f"declares {len(self.pairs)}")
    return next(iter(self.pairs.values()))

  def describe(self):
    return {"path": self.path,
            "posets": list(self.posets),
            "categories": list(self.categories),
            "systems": list(self.systems),
            "indexmaps": list(self.indexmaps),
            "jmorphisms": list(self.jmorphisms),
            "pairs": list(self.pairs),
            "stage_bundles": list(self.bundles)}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


class _Parser:

  def __init__(self, text, path):
    self.toks = _tokens(text)
    self.i = 0
    self.ws = Workspace(path)

  # -- token plumbing --

  def peek(self):
    return self.toks[self.i]

  def next(self):
    t = self.toks[self.i]
    self.i += 1
    return t

  def at(self, value):
    k, v, _, _ = self.peek()
    return v == value and k in ("NAME", "PUNCT")

  def expect(self, value):
    k, v, line, col = self.next()
    if v != value or k not in ("NAME", "PUNCT"):
      raise WorkspaceError(f"expected {value!r}, found {v!r}", line, col)
    return line, col

  def name(self, what="a name"):
    k, v, line, col = self.next()
    if k != "NAME":
      raise WorkspaceError(f"expected {what}, found {v!r}", line, col)
    return v, line, col

  def scalar(self, what="a label"):
    """Element labels: bare names or integers."""
    k, v, line, col = self.next()
    if k not in ("NAME", "INT"):
      raise WorkspaceError(f"expected {what}, found {v!r}", line, col)
    return v, line, col

  def int_(self, what="an integer"):
    k, v, line, col = self.next()
    if k != "INT":
      raise WorkspaceError(f"expected {what}, found {v!r}", line, col)
    return v, line, col

  def sep(self):
    """Items inside blocks are separated by , or ; interchangeably."""
    if self.at(",") or self.at(";"):
      self.next()
      return True
    return False

  def declare(self, table, name, line, col, value):
    if name in table:
      raise WorkspaceError(f"duplicate declaration of {name!r}", line, col)
    table[name] = value

  # -- declarations --

  def parse(self):
    while True:
      k, v, line, col = self.peek()
      if k == "EOF":
        return self.ws
      if k != "NAME":
        raise WorkspaceError(f"expected a declaration, found {v!r}",
                             line, col)
      handler = getattr(self, f"decl_{v}", None)
      if handler is None:
        raise WorkspaceError(f"unknown declaration kind {v!r}", line, col)
      self.next()
      handler()

  def decl_poset(self):
    name, line, col = self.name("a poset name")
    if self.at("="):
      self.next()
      head, hl, hc = self.name("omega or product")
      if head == "omega":
        value = OMEGA
      elif head == "product":
        self.expect("(")
        a, al, ac = self.name()
        self.expect(",")
        b, bl, bc = self.name()
        self.expect(")")
        value = ProductPoset(self.ws.poset(a, al, ac),
                             self.ws.poset(b, bl, bc))
      else:
        raise WorkspaceError(f"unknown poset form {head!r}", hl, hc)
      self.declare(self.ws.posets, name, line, col, value)
      return
    self.expect("{")
    self.expect("elements")
    self.expect(":")
    elements = [self.scalar("an element")[0]]
    while self.at(","):
      self.next()
      elements.append(self.scalar("an element")[0])
    pairs = []
    if self.sep() and not self.at("}"):
      self.expect("le")
      self.expect(":")
      while True:
        a, _, _ = self.scalar()
        self.expect("<=")
        b, _, _ = self.scalar()
        pairs.append((a, b))
        if not self.at(","):
          break
        self.next()
      self.sep()
    self.expect("}")
    try:
      value = FinitePoset.from_le_pairs(elements, pairs)
    except PosetError as exc:
      raise WorkspaceError(f"invalid poset: {exc}", line, col) from exc
    self.declare(self.ws.posets, name, line, col, value)

  def decl_category(self):
    name, line, col = self.name("a category name")
    if self.at("="):
      self.next()
      head, hl, hc = self.name()
      if head != "cycgrp":
        raise WorkspaceError(f"unknown category form {head!r}", hl, hc)
      self.declare(self.ws.categories, name, line, col, CYCGRP)
      return
    self.expect("{")
    self.expect("objects")
    self.expect(":")
    objects = [self.scalar("an object")[0]]
    while self.at(","):
      self.next()
      objects.append(self.scalar("an object")[0])
    self.sep()
    self.expect("morphisms")
    self.expect(":")
    morphisms = {}
    while True:
      mname, _, _ = self.name("a morphism name")
      self.expect(":")
      src, _, _ = self.scalar()
      self.expect("->")
      tgt, _, _ = self.scalar()
      morphisms[mname] = (src, tgt)
      if not self.at(","):
        break
      self.next()
    self.sep()
    self.expect("identity")
    self.expect(":")
    identities = {}
    while True:
      obj, _, _ = self.scalar()
      self.expect("=")
      mname, _, _ = self.name()
      identities[obj] = mname
      if not self.at(","):
        break
      self.next()
    composition = {}
    if self.sep() and not self.at("}"):
      self.expect("compose")
      self.expect(":")
      while True:
        g, _, _ = self.name()
        self.expect(".")
        f, _, _ = self.name()
        self.expect("=")
        h, _, _ = self.name()
        composition[(g, f)] = h
        if not self.at(","):
          break
        self.next()
      self.sep()
    self.expect("}")
    # identity composites are forced by the laws; fill them in
    for mname, (src, tgt) in morphisms.items():
      if src in identities:
        composition.setdefault((mname, identities[src]), mname)
      if tgt in identities:
        composition.setdefault((identities[tgt], mname), mname)
    try:
      cat = FinCat(objects, morphisms, composition, identities, name=name)
    except CatError as exc:
      raise WorkspaceError(f"invalid category: {exc}", line, col) from exc
    errors = validate_category(cat)
    if errors:
      raise WorkspaceError(f"category law violation: {errors[0]}", line, col)
    self.declare(self.ws.categories, name, line, col, cat)

  def _morphism(self, cat, ref, src, tgt, line, col):
    """A morphism reference: a declared label for table categories, a
    residue for the cyclic-group backend."""
    if isinstance(cat, FinCat):
      if not isinstance(ref, str):
        raise WorkspaceError("morphisms of a table category are named",
                             line, col)
      try:
        m = cat.mor(ref)
      except CatError as exc:
        raise WorkspaceError(str(exc), line, col) from exc
      if (src, tgt) != (None, None) and (m.source, m.target) != (src, tgt):
        raise WorkspaceError(
            f"{ref!r} runs {m.source!r} -> {m.target!r}, "
            f"expected {src!r} -> {tgt!r}", line, col)
      return m
    if not isinstance(ref, int):
      raise WorkspaceError("cyclic-group morphisms are residues", line, col)
    m = Morphism(src, tgt, ref % tgt if isinstance(tgt, int) else ref)
    if not CYCGRP.valid_morphism(m):
      raise WorkspaceError(
          f"residue {ref} is not a morphism {src} -> {tgt}", line, col)
    return m

  def decl_system(self):
    name, line, col = self.name("a system name")
    self.expect("over")
    pname, pl, pc = self.name()
    poset = self.ws.poset(pname, pl, pc)
    self.expect("in")
    cname, cl, cc = self.name()
    cat = self.ws.category(cname, cl, cc)
    self.expect("{")
    objects = {}
    bonds = {}
    uniform_obj = None
    step_ref = None
    while not self.at("}"):
      head, hl, hc = self.name("a system item")
      if head == "object":
        if self.at("="):   # uniform tower: one object for every stage
          self.next()
          uniform_obj = self.scalar("an object")[0]
        else:
          stage, _, _ = self.scalar("a stage")
          self.expect("=")
          objects[stage] = self.scalar("an object")[0]
      elif head == "bond":
        a, _, _ = self.scalar("a stage")
        self.expect("<=")
        b, _, _ = self.scalar("a stage")
        self.expect("=")
        ref, rl, rc = self.scalar("a morphism")
        bonds[(a, b)] = (ref, rl, rc)
      elif head == "step":
        self.expect("=")
        ref, rl, rc = self.scalar("a morphism")
        step_ref = (ref, rl, rc)
      else:
        raise WorkspaceError(f"unknown system item {head!r}", hl, hc)
      self.sep()
    self.expect("}")

    if step_ref is not None or uniform_obj is not None:
      if not isinstance(poset, OmegaPoset):
        raise WorkspaceError("uniform towers are indexed by omega",
                             line, col)
      if step_ref is None or uniform_obj is None or objects or bonds:
        raise WorkspaceError("a uniform tower takes exactly one object "
                             "and one step", line, col)
      ref, rl, rc = step_ref
      step = self._morphism(cat, ref, uniform_obj, uniform_obj, rl, rc)
      value = uniform_tower(cat, uniform_obj, step, name=name)
    else:
      if not poset.is_finite:
        raise WorkspaceError("stagewise systems need a finite index; "
                             "use object/step for towers", line, col)
      missing = [e for e in poset.elements() if e not in objects]
      if missing:
        raise WorkspaceError(f"no object at stage {missing[0]!r}", line, col)
      mors = {}
      for (a, b), (ref, rl, rc) in bonds.items():
        for stage in (a, b):
          if stage not in objects:
            raise WorkspaceError(f"bond references unknown stage {stage!r}",
                                 rl, rc)
        mors[(a, b)] = self._morphism(cat, ref, objects[b], objects[a],
                                      rl, rc)
      try:
        value = InverseSystem(name, cat, poset, objects, mors)
        errors = validate_system(value)
      except InvSysError as exc:
        raise WorkspaceError(f"invalid system: {exc}", line, col) from exc
      if errors:
        raise WorkspaceError(f"system law violation: {errors[0]}", line, col)
    self.declare(self.ws.systems, name, line, col, value)

  def _affine_coeffs(self):
    coeffs = []
    while self.at("("):
      self.next()
      a, _, _ = self.int_()
      self.expect(",")
      b, _, _ = self.int_()
      self.expect(")")
      coeffs.append((a, b))
    return tuple(coeffs)

  def decl_indexmap(self):
    name, line, col = self.name("an index map name")
    self.expect(":")
    dname, dl, dc = self.name()
    domain = self.ws.poset(dname, dl, dc)
    self.expect("->")
    cname, cl, cc = self.name()
    codomain = self.ws.poset(cname, cl, cc)
    if self.at("="):
      self.next()
      self.expect("affine")
      if not isinstance(domain, OmegaPoset):
        raise WorkspaceError("affine index maps start from omega", line, col)
      coeffs = self._affine_coeffs()
      if not coeffs:
        raise WorkspaceError("affine needs at least one coefficient pair",
                             line, col)
      value = IndexFunction.from_affine(codomain, coeffs, name=name)
    else:
      self.expect("{")
      table = {}
      while not self.at("}"):
        a, _, _ = self.scalar()
        self.expect("->")
        table[a] = self._target_label(codomain)
        self.sep()
      self.expect("}")
      value = IndexFunction.from_table(domain, codomain, table, name=name)
    self.declare(self.ws.indexmaps, name, line, col, value)

  def _target_label(self, poset):
    """A label, or a (a, b) pair for product targets."""
    if isinstance(poset, ProductPoset) and self.at("("):
      self.next()
      a, _, _ = self.scalar()
      self.expect(",")
      b, _, _ = self.scalar()
      self.expect(")")
      return (a, b)
    return self.scalar()[0]

  def _family(self, j_poset, cat, src, tgt):
    head, line, col = self.name("a family form")
    if head == "const":
      self.expect("(")
      ref, rl, rc = self.scalar("a morphism")
      self.expect(")")
      return MorphismFamily.constant(j_poset,
                                     self._morphism(cat, ref, src, tgt,
                                                    rl, rc))
    if head == "table":
      self.expect("(")
      table = {}
      while True:
        j, _, _ = self.scalar("an index")
        self.expect(":")
        ref, rl, rc = self.scalar("a morphism")
        table[j] = self._morphism(cat, ref, src, tgt, rl, rc)
        if not self.at(","):
          break
        self.next()
      self.expect(")")
      try:
        return MorphismFamily.from_table(j_poset, table)
      except CatError as exc:
        raise WorkspaceError(str(exc), line, col) from exc
    if head == "step":
      self.expect("[")
      entries = []
      while self.at("("):
        self.next()
        j, _, _ = self.scalar("a threshold")
        self.expect(",")
        ref, rl, rc = self.scalar("a morphism")
        self.expect(")")
        entries.append((j, self._morphism(cat, ref, src, tgt, rl, rc)))
        if self.at(","):
          self.next()
      self.expect("]")
      if not entries:
        raise WorkspaceError("step needs at least one entry", line, col)
      try:
        return MorphismFamily.step(j_poset, entries[0][1], entries)
      except CatError as exc:
        raise WorkspaceError(str(exc), line, col) from exc
    if head == "rule":
      if not (isinstance(src, int) and isinstance(tgt, int)):
        raise WorkspaceError("rule families live in the cyclic-group "
                             "backend", line, col)
      self.expect("(")
      coeffs = [self.int_("a coefficient")[0]]
      while self.at(","):
        self.next()
        coeffs.append(self.int_("a coefficient")[0])
      self.expect(")")
      try:
        return MorphismFamily.rule(j_poset, src, tgt, coeffs)
      except CatError as exc:
        raise WorkspaceError(str(exc), line, col) from exc
    raise WorkspaceError(f"unknown family form {head!r}", line, col)

  def decl_jmorphism(self):
    name, line, col = self.name("a morphism name")
    self.expect(":")
    xname, xl, xc = self.name()
    X = self.ws.system(xname, xl, xc)
    self.expect("->")
    yname, yl, yc = self.name()
    Y = self.ws.system(yname, yl, yc)
    self.expect("over")
    jname, jl, jc = self.name()
    j_poset = self.ws.poset(jname, jl, jc)
    self.expect("{")
    self.expect("index")
    self.expect(":")
    if self.at("affine"):
      self.next()
      coeffs = self._affine_coeffs()
      index = IndexFunction.from_affine(X.index, coeffs, name=f"{name}.ix")
    else:
      table = {}
      while True:
        mu, _, _ = self.scalar("a target stage")
        self.expect("->")
        table[mu] = self._target_label(X.index)
        if not self.at(","):
          break
        self.next()
      index = IndexFunction.from_table(Y.index, X.index, table,
                                       name=f"{name}.ix")
    self.sep()

    cells = {}
    fams = {}
    while not self.at("}"):
      head, hl, hc = self.name("family or cells")
      if head == "family":
        mu, ml, mc = self.scalar("a target stage")
        self.expect("=")
        try:
          src = X.object_at(index(mu))
          tgt = Y.object_at(mu)
        except (PosetError, InvSysError) as exc:
          raise WorkspaceError(str(exc), ml, mc) from exc
        fams[mu] = self._family(j_poset, X.cat, src, tgt)
      elif head == "cells":
        part, pl, pc = self.name("transient or cycle")
        if part not in ("transient", "cycle"):
          raise WorkspaceError(f"unknown cell block {part!r}", pl, pc)
        self.expect("=")
        self.expect("[")
        block = []
        while not self.at("]"):
          # cells are read against the stage-0 endpoints; mismatches
          # surface in the structural validator below
          src = X.object_at(index(len(block)))
          tgt = Y.object_at(len(block))
          block.append(self._family(j_poset, X.cat, src, tgt))
          if self.at(","):
            self.next()
        self.expect("]")
        cells[part] = tuple(block)
      else:
        raise WorkspaceError(f"unknown morphism item {head!r}", hl, hc)
      self.sep()
    self.expect("}")

    if cells:
      from .eventual import PeriodicSeq
      if "cycle" not in cells or not cells["cycle"]:
        raise WorkspaceError("cell form needs a nonempty cycle", line, col)
      families = PeriodicSeq(cells.get("transient", ()), cells["cycle"])
    else:
      families = fams
    try:
      jm = JMorphism(name, X, Y, j_poset, index, families)
      errors = validate_jmorphism(jm)
    except JmorError as exc:
      raise WorkspaceError(f"invalid morphism: {exc}", line, col) from exc
    if errors:
      raise WorkspaceError(f"morphism violation: {errors[0]}", line, col)
    self.declare(self.ws.jmorphisms, name, line, col, jm)

  def decl_pair(self):
    k, v, _, _ = self.peek()
    pname = None
    if k == "NAME":
      pname, line, col = self.name()
    self.expect("(")
    cname, cl, cc = self.name()
    cat = self.ws.category(cname, cl, cc)
    self.expect(",")
    sub, _, _ = self.name("a subcategory label")
    self.expect(")")
    if pname is None:
      pname, line, col = sub, cl, cc
    self.expect("{")
    self.expect(sub)
    self.expect(":")
    d_objects = [self.scalar("an object")[0]]
    while self.at(","):
      self.next()
      d_objects.append(self.scalar("an object")[0])
    self.sep()

    designated = {}
    alternates = {}
    while not self.at("}"):
      self.expect("expansion")
      obj, ol, oc = self.scalar("an object")
      self.expect("=")
      self.expect("{")
      legs = {}
      while not self.at("}"):
        stage, _, _ = self.scalar("a stage")
        self.expect(":")
        ref, rl, rc = self.scalar("a morphism")
        legs[stage] = (ref, rl, rc)
        if self.at(","):
          self.next()
      self.expect("}")
      self.expect("into")
      sname, sl, sc = self.name()
      system = self.ws.system(sname, sl, sc)
      resolved = {}
      for stage, (ref, rl, rc) in legs.items():
        try:
          tgt = system.object_at(stage)
        except InvSysError as exc:
          raise WorkspaceError(str(exc), rl, rc) from exc
        resolved[stage] = self._morphism(cat, ref, obj, tgt, rl, rc)
      record = Expansion(obj, system, resolved)
      if obj in designated:
        alternates.setdefault(obj, []).append(record)
      else:
        designated[obj] = record
      self.sep()
    self.expect("}")

    try:
      value = ProReflectivePair(cat, d_objects, designated)
      for obj, records in alternates.items():
        for rec in records:   # structural complaints only; the verdict
          check_expansion(value, obj, rec)
      self.declare(self.ws.pairs, pname, line, col, value)
    except ShapeError as exc:
      raise WorkspaceError(f"invalid pair: {exc}", line, col) from exc
    self.ws.alternates[pname] = alternates

  def decl_stages(self):
    name, line, col = self.name("a bundle name")
    self.expect("for")
    source, _, _ = self.scalar("an object")
    self.expect("into")
    target, _, _ = self.scalar("an object")
    self.expect("in")
    pname, pl, pc = self.name()
    self.ws.pair(pname, pl, pc)
    self.expect("{")
    entries = {}
    while not self.at("}"):
      stage, _, _ = self.scalar("a stage")
      self.expect(":")
      jname, jl, jc = self.name()
      self.ws.jmorphism(jname, jl, jc)
      entries[stage] = jname
      self.sep()
    self.expect("}")
    self.declare(self.ws.bundles, name, line, col,
                 StageBundle(name, pname, source, target, entries))


def parse_workspace(text, path="<workspace>"):
  return _Parser(text, path).parse()


def load_workspace(path):
  try:
    with open(path, encoding="utf-8") as fh:
      text = fh.read()
  except OSError as exc:
    raise WorkspaceError(f"cannot read workspace: {exc}") from exc
  return parse_workspace(text, path)
