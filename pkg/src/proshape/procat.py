"""Pro-level machinery over level pairs: exhaustive hom classes,
reindexing an arbitrary morphism to a level one, and isomorphism
criteria with constructive inverses."""

import itertools
from dataclasses import dataclass
from math import lcm

from .cat import GRID, TABLE, MorphismFamily, find_inverse
from .eventual import PeriodicSeq
from .invsys import InverseSystem
from .jmor import (JMorphism, JMorphismClass, JmorError, check_jmorphism,
                   compose_jmorphisms, equivalent_jmorphisms,
                   identity_jmorphism, is_level, simplify)
from .order import (DEFAULT_BUDGET, DEFAULT_HORIZON, IndexFunction,
                    OmegaPoset, PosetError, ProductPoset, Verdict,
                    min_threshold, upper_bound)


class ProcatError(Exception):
  """Input outside a procedure's contract, a blown search budget, or a
  witness that no longer matches the data it is replayed against."""


_OPEN = object()  # stage search ran out of horizon without a decision


# ---------------------------------------------------------------------------
# level pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelPair:
  """Two systems on one stage poset joined by a level morphism.  Build
  through level_pair so the shape claim is actually checked."""
  X: InverseSystem
  Y: InverseSystem
  morphism: JMorphism


def level_pair(jm, horizon=DEFAULT_HORIZON, strict=True):
  v = is_level(jm, horizon)
  if v.is_fails:
    raise ProcatError(f"morphism is not level: {v.counterexample}")
  if strict and not v:
    raise ProcatError("level shape undecided for a rule-backed index map")
  return LevelPair(jm.source, jm.target, jm)


# ---------------------------------------------------------------------------
# tail searches shared by the criteria
# ---------------------------------------------------------------------------


def _eventual_choice(j_poset, fams, pick):
  """Least threshold j0 with pick(j) succeeding at every j >= j0.

  pick must depend on j only through the families' values there, so
  table enrichments are exhausted and tail-periodic ones are decided on
  one full window.  Returns (j0, ((j, value), ...), cycle_start, period)
  covering the decided region, or None."""
  if any(f.tag == GRID for f in fams):
    raise ProcatError("tail search needs table or tail-periodic families; "
                      "move grid enrichments onto a chain first")
  if fams[0].tag == TABLE:
    els = list(j_poset.elements())
    chosen = {j: pick(j) for j in els}
    for j0 in els:
      uppers = [j for j in els if j_poset.le(j0, j)]
      if all(chosen[j] is not None for j in uppers):
        return j0, tuple((j, chosen[j]) for j in uppers), None, None
    return None
  t = max(f.payload.tail_start for f in fams)
  p = lcm(*[f.payload.period for f in fams])
  chosen = [pick(j) for j in range(t + p)]
  if any(c is None for c in chosen[t:]):
    return None
  j0 = t
  while j0 > 0 and chosen[j0 - 1] is not None:
    j0 -= 1
  return j0, tuple((j, chosen[j]) for j in range(j0, t + p)), t, p


def _triangle_pick(cat, fam_lo, fam_hi, p, q, hom):
  """First h (in hom order) filling both triangles at j: the lower one
  fam_lo(j) . h == q and the upper one h . fam_hi(j) == p."""
  def pick(j):
    lo, hi = fam_lo.at(j), fam_hi.at(j)
    for h in hom:
      if cat.compose(lo, h) == q and cat.compose(h, hi) == p:
        return h
    return None
  return pick


# ---------------------------------------------------------------------------
# triangle criterion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MoritaEntry:
  """One stage's certificate: from j_threshold on, h_table fills both
  triangles against the bonds into lam from lambda_prime."""
  lam: object
  lambda_prime: object
  j_threshold: object
  h_table: tuple
  j_cycle_start: int | None = None
  j_period: int | None = None

  def describe(self):
    out = {"lambda": self.lam, "lambda_prime": self.lambda_prime,
           "j_threshold": self.j_threshold,
           "h_table": {str(j): h.describe() for j, h in self.h_table}}
    if self.j_period is not None:
      out["j_cycle_start"] = self.j_cycle_start
      out["j_period"] = self.j_period
    return out


@dataclass(frozen=True)
class MoritaWitness:
  entries: tuple
  lambda_cycle_start: int | None = None
  lambda_period: int | None = None

  def entry_for(self, lam):
    for e in self.entries:
      if e.lam == lam:
        return e
    return None

  def describe(self):
    out = {"entries": [e.describe() for e in self.entries]}
    if self.lambda_period is not None:
      out["lambda_cycle_start"] = self.lambda_cycle_start
      out["lambda_period"] = self.lambda_period
    return out


def _stage_entry(pair, lam, horizon):
  """First ascending lambda' whose triangle tails close at lam; None is
  an exact refutation, _OPEN ran out of horizon undecided."""
  jm, X, Y = pair.morphism, pair.X, pair.Y
  cat = jm.cat
  fam_lo = jm.family_at(lam)
  chain = X.index.ascend(lam, horizon)
  autonomous = (isinstance(X.index, OmegaPoset)
                and X.uniform_step is not None and Y.uniform_step is not None)
  seen = set()
  for lp in chain:
    q = Y.bond(lam, lp)
    p = X.bond(lam, lp)
    fam_hi = jm.family_at(lp)
    hom = cat.hom(Y.object_at(lp), X.object_at(lam))
    pick = _triangle_pick(cat, fam_lo, fam_hi, p, q, hom)
    got = _eventual_choice(jm.j_poset, (fam_lo, fam_hi), pick)
    if got is not None:
      j0, pairs, jc, jp = got
      return MoritaEntry(lam, lp, j0, pairs, jc, jp)
    if autonomous:
      state = (fam_hi.key(), q, p)
      if state in seen:
        return None  # the ascent only repeats states from here on
      seen.add(state)
  return None if X.index.is_finite else _OPEN


def _morita_scan(pair, horizon):
  jm, X, Y = pair.morphism, pair.X, pair.Y
  lam_poset = X.index

  def run(stages):
    entries = []
    for lam in stages:
      got = _stage_entry(pair, lam, horizon)
      if got is None:
        hom = jm.cat.hom(Y.object_at(lam), X.object_at(lam))
        return Verdict.fails({"lambda": lam,
                              "reason": "no higher stage closes the triangles",
                              "h_candidates": [m.describe() for m in hom]}), None
      if got is _OPEN:
        return Verdict.inconclusive(horizon, {"undecided_lambda": lam}), None
      entries.append(got)
    return None, entries

  if lam_poset.is_finite:
    failed, entries = run(list(lam_poset.elements()))
    if failed is not None:
      return failed, None
    w = MoritaWitness(tuple(entries))
    return Verdict.holds(w.describe()), w

  if not isinstance(lam_poset, OmegaPoset):
    raise ProcatError("triangle criterion runs over finite stage posets "
                      "or towers")
  exact = (jm.ladder is not None and X.uniform_step is not None
           and Y.uniform_step is not None)
  if exact:
    width = jm.ladder.tail_start + jm.ladder.period
    failed, entries = run(range(width))
    if failed is not None:
      return failed, None
    w = MoritaWitness(tuple(entries), jm.ladder.tail_start, jm.ladder.period)
    out = w.describe()
    out["periodic"] = True
    return Verdict.holds(out), w
  failed, entries = run(range(horizon + 1))
  if failed is not None:
    return failed, None
  return Verdict.inconclusive(horizon, {"checked_stages": horizon + 1}), None


def morita_check(pair, horizon=DEFAULT_HORIZON):
  """Invertibility via triangle fill-ins: at every stage some higher
  stage and enrichment threshold admit h with f.h and h.f equal to the
  two bonds.  Exact over finite stage posets; exact over towers when
  the family ladder and both step certificates are present."""
  return _morita_scan(pair, horizon)[0]


def morita_witness(pair, horizon=DEFAULT_HORIZON):
  """The structured certificate behind morita_check, or None."""
  return _morita_scan(pair, horizon)[1]


def _verify_entry(pair, e):
  jm, X, Y = pair.morphism, pair.X, pair.Y
  cat = jm.cat

  def stale(reason):
    raise ProcatError(f"stale witness at stage {e.lam!r}: {reason}")

  if not X.index.le(e.lam, e.lambda_prime):
    stale("stages out of order")
  q = Y.bond(e.lam, e.lambda_prime)
  p = X.bond(e.lam, e.lambda_prime)
  fam_lo = jm.family_at(e.lam)
  fam_hi = jm.family_at(e.lambda_prime)
  table = dict(e.h_table)
  if e.j_period is None:
    uppers = [j for j in jm.j_poset.elements() if jm.j_poset.le(e.j_threshold, j)]
    if set(table) != set(uppers):
      stale("h table does not cover the enrichment tail")
  else:
    t = max(fam_lo.payload.tail_start, fam_hi.payload.tail_start)
    per = lcm(fam_lo.payload.period, fam_hi.payload.period)
    if (e.j_cycle_start, e.j_period) != (t, per):
      stale("enrichment window no longer matches the families")
    if list(table) != list(range(e.j_threshold, t + per)):
      stale("h table does not cover the enrichment window")
  for j, h in table.items():
    if (h.source, h.target) != (Y.object_at(e.lambda_prime), X.object_at(e.lam)):
      stale(f"h at {j!r} has wrong endpoints")
    if cat.compose(fam_lo.at(j), h) != q or cat.compose(h, fam_hi.at(j)) != p:
      stale(f"triangles broken at {j!r}")


def _entry_family(j_poset, e):
  """The inverse's family at e.lam: h at the threshold below it, the
  per-j h above it."""
  table = dict(e.h_table)
  base = table[e.j_threshold]
  if e.j_period is None:
    full = {j: table[j] if j_poset.le(e.j_threshold, j) else base
            for j in j_poset.elements()}
    return MorphismFamily.from_table(j_poset, full)
  transient = tuple(table[j] if j >= e.j_threshold else base
                    for j in range(e.j_cycle_start))
  cycle = tuple(table[j] for j in range(e.j_cycle_start,
                                        e.j_cycle_start + e.j_period))
  return MorphismFamily.from_seq(j_poset, PeriodicSeq(transient, cycle))


@dataclass(frozen=True)
class MoritaInverse:
  morphism: JMorphism
  left_identity: Verdict   # g.f against the identity of X
  right_identity: Verdict  # f.g against the identity of Y


def morita_inverse(pair, witness, name="g", horizon=DEFAULT_HORIZON):
  """Constructive inverse read off a triangle witness.  The witness is
  re-verified against the pair first, and both composites are checked
  against the identities before anything is returned."""
  jm, X, Y = pair.morphism, pair.X, pair.Y
  J = jm.j_poset
  lam_poset = X.index
  for e in witness.entries:
    _verify_entry(pair, e)

  if lam_poset.is_finite:
    els = list(lam_poset.elements())
    if [e.lam for e in witness.entries] != els:
      raise ProcatError("stale witness: stage coverage changed")
    index = IndexFunction.from_table(lam_poset, lam_poset,
                                     {e.lam: e.lambda_prime
                                      for e in witness.entries})
    fams = {e.lam: _entry_family(J, e) for e in witness.entries}
    g = JMorphism(name, Y, X, J, index, fams)
  else:
    cs, per = witness.lambda_cycle_start, witness.lambda_period
    if per is None or jm.ladder is None or \
        (cs, per) != (jm.ladder.tail_start, jm.ladder.period):
      raise ProcatError("stale witness: stage window no longer matches")
    entries = witness.entries
    if [e.lam for e in entries] != list(range(cs + per)):
      raise ProcatError("stale witness: stage coverage changed")
    offsets = {e.lambda_prime - e.lam for e in entries}
    if len(offsets) == 1:
      index = IndexFunction.from_affine(lam_poset, ((1, offsets.pop()),))
    else:
      def target_stage(lam, _entries=entries, _cs=cs, _per=per):
        if lam < len(_entries):
          return _entries[lam].lambda_prime
        base = _cs + (lam - _cs) % _per
        return _entries[base].lambda_prime + (lam - base)
      index = IndexFunction.from_fn(lam_poset, lam_poset, target_stage)
    cells = [_entry_family(J, e) for e in entries]
    g = JMorphism(name, Y, X, J,
                  index, PeriodicSeq(tuple(cells[:cs]), tuple(cells[cs:])))

  left = equivalent_jmorphisms(compose_jmorphisms(g, jm),
                               identity_jmorphism(X, J), horizon)
  right = equivalent_jmorphisms(compose_jmorphisms(jm, g),
                                identity_jmorphism(Y, J), horizon)
  if left.is_fails or right.is_fails:
    raise ProcatError("stale witness: a composite fails the identity check")
  return MoritaInverse(g, left, right)


# ---------------------------------------------------------------------------
# cofinally invertible components
# ---------------------------------------------------------------------------


def cofinal_iso_check(pair, horizon=DEFAULT_HORIZON):
  """Certificate criterion: the stages whose component family is
  eventually invertible form a cofinal set.  Holds implies the triangle
  criterion (component inverses fill the triangles); Fails only says
  this particular certificate is unavailable, not that the morphism
  fails to be invertible."""
  jm, X = pair.morphism, pair.X
  cat = jm.cat
  lam_poset = X.index

  def stage_tail(lam):
    fam = jm.family_at(lam)

    def pick(j):
      return find_inverse(cat, fam.at(j))

    return _eventual_choice(jm.j_poset, (fam,), pick)

  if lam_poset.is_finite:
    els = list(lam_poset.elements())
    good = {lam: got for lam in els if (got := stage_tail(lam)) is not None}
    uncovered = [lam for lam in els
                 if not any(lam_poset.le(lam, s) for s in good)]
    if uncovered:
      return Verdict.fails({"uncovered_stage": uncovered[0],
                            "invertible_stages": list(good)})
    return Verdict.holds({"stages": list(good),
                          "j_thresholds": {str(lam): got[0]
                                           for lam, got in good.items()}})

  if not isinstance(lam_poset, OmegaPoset):
    raise ProcatError("cofinal criterion runs over finite stage posets "
                      "or towers")
  if jm.ladder is not None:
    cs, per = jm.ladder.tail_start, jm.ladder.period
    good = [lam for lam in range(cs + per) if stage_tail(lam) is not None]
    recurrent = [lam for lam in good if lam >= cs]
    if recurrent:
      return Verdict.holds({"stages": good, "cycle_start": cs, "period": per,
                            "periodic": True})
    return Verdict.fails({"tail_window": [cs, cs + per],
                          "invertible_stages": good})
  good = [lam for lam in range(horizon + 1) if stage_tail(lam) is not None]
  return Verdict.inconclusive(horizon, {"checked_stages": horizon + 1,
                                        "invertible_stages": good})


# ---------------------------------------------------------------------------
# reindexing to a level morphism
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReindexResult:
  pair: LevelPair          # X', Y' and the level morphism between them
  into_source: JMorphism   # X -> X'
  into_target: JMorphism   # Y -> Y'
  from_source: JMorphism   # X' -> X, inverse of into_source
  from_target: JMorphism   # Y' -> Y, inverse of into_target
  square: Verdict          # into_target . f  against  f' . into_source


def reindex(jm, name=None, horizon=DEFAULT_HORIZON):
  """Rebuild a morphism as a level one.  The new stage poset is the set
  of stage pairs (alpha, beta) with alpha above the image of the
  increasing representative; objects and bonds are copied along the
  two projections, and the change-of-stage morphisms come with explicit
  inverses."""
  try:
    w = simplify(jm, horizon=horizon)
  except (JmorError, PosetError) as exc:
    raise ProcatError(f"no increasing representative: {exc}") from exc
  X, Y, cat, J = jm.source, jm.target, jm.cat, jm.j_poset
  A, B = X.index, Y.index
  wf = w.index_fn

  def member(nu):
    return A.le(wf(nu[1]), nu[0])

  def fix(nu):
    return upper_bound(A, [nu[0], wf(nu[1])]), nu[1]

  N = ProductPoset(A, B, member=member, fix=fix)
  base = name or jm.name or "f"

  if N.is_finite:
    els = list(N.elements())
    x_objects = {nu: X.object_at(nu[0]) for nu in els}
    x_bonds = {(u, v): X.bond(u[0], v[0])
               for u in els for v in els if N.le(u, v)}
    y_objects = {nu: Y.object_at(nu[1]) for nu in els}
    y_bonds = {(u, v): Y.bond(u[1], v[1])
               for u in els for v in els if N.le(u, v)}
    identity_index = IndexFunction.from_table(N, N, {nu: nu for nu in els})

    def table_on(fn):
      return {nu: fn(nu) for nu in els}
  else:
    x_objects = lambda nu: X.object_at(nu[0])
    x_bonds = lambda u, v: X.bond(u[0], v[0])
    y_objects = lambda nu: Y.object_at(nu[1])
    y_bonds = lambda u, v: Y.bond(u[1], v[1])
    identity_index = IndexFunction.from_fn(N, N, lambda nu: nu,
                                           increasing_hint=True)

    def table_on(fn):
      return fn

  x2 = InverseSystem(f"{X.name or 'X'}'", cat, N, x_objects, x_bonds)
  y2 = InverseSystem(f"{Y.name or 'Y'}'", cat, N, y_objects, y_bonds)

  def level_family(nu):
    alpha, beta = nu
    return w.family_at(beta).map_pre(cat, X.bond(wf(beta), alpha))

  f2 = JMorphism(f"{base}'", x2, y2, J, identity_index,
                 table_on(level_family))

  def proj_source(nu):
    return nu[0]

  def proj_target(nu):
    return nu[1]

  if N.is_finite:
    src_index = IndexFunction.from_table(N, A, {nu: nu[0] for nu in els})
    tgt_index = IndexFunction.from_table(N, B, {nu: nu[1] for nu in els})
  else:
    src_index = IndexFunction.from_fn(N, A, proj_source, increasing_hint=True)
    tgt_index = IndexFunction.from_fn(N, B, proj_target, increasing_hint=True)

  into_source = JMorphism("i", X, x2, J, src_index,
                          table_on(lambda nu: MorphismFamily.constant(
                              J, cat.identity(X.object_at(nu[0])))))
  into_target = JMorphism("j", Y, y2, J, tgt_index,
                          table_on(lambda nu: MorphismFamily.constant(
                              J, cat.identity(Y.object_at(nu[1])))))

  beta0 = B.elements()[0] if B.is_finite else 0

  def src_section(lam):
    return fix((lam, beta0))

  def tgt_section(mu):
    return wf(mu), mu

  if A.is_finite:
    back_src_index = IndexFunction.from_table(
        A, N, {lam: src_section(lam) for lam in A.elements()})
  else:
    back_src_index = IndexFunction.from_fn(A, N, src_section)
  if B.is_finite:
    back_tgt_index = IndexFunction.from_table(
        B, N, {mu: tgt_section(mu) for mu in B.elements()})
  else:
    back_tgt_index = IndexFunction.from_fn(B, N, tgt_section)

  def from_source_family(lam):
    return MorphismFamily.constant(J, X.bond(lam, src_section(lam)[0]))

  def from_target_family(mu):
    return MorphismFamily.constant(J, cat.identity(Y.object_at(mu)))

  if A.is_finite:
    from_source_fams = {lam: from_source_family(lam) for lam in A.elements()}
  else:
    from_source_fams = from_source_family
  if B.is_finite:
    from_target_fams = {mu: from_target_family(mu) for mu in B.elements()}
  else:
    from_target_fams = from_target_family

  from_source = JMorphism("i~", x2, X, J, back_src_index, from_source_fams)
  from_target = JMorphism("j~", y2, Y, J, back_tgt_index, from_target_fams)

  square = equivalent_jmorphisms(compose_jmorphisms(into_target, jm),
                                 compose_jmorphisms(f2, into_source), horizon)
  if square.is_fails:
    raise ProcatError(f"reindex square failed: {square.counterexample}")

  pair = level_pair(f2, horizon, strict=N.is_finite)
  return ReindexResult(pair, into_source, into_target,
                       from_source, from_target, square)


# ---------------------------------------------------------------------------
# exhaustive hom classes
# ---------------------------------------------------------------------------


def _family_space(cat, j_poset, src_obj, tgt_obj, horizon):
  """Every family src_obj -> tgt_obj: tables over a finite enrichment,
  eventually constant tails with threshold <= horizon over omega."""
  hom = cat.hom(src_obj, tgt_obj)
  if j_poset.is_finite:
    els = list(j_poset.elements())
    return [MorphismFamily.from_table(j_poset, dict(zip(els, combo)))
            for combo in itertools.product(hom, repeat=len(els))]
  return [MorphismFamily.from_seq(j_poset,
                                  PeriodicSeq(combo[:-1], (combo[-1],)))
          for combo in itertools.product(hom, repeat=horizon + 1)]


def _family_space_size(cat, j_poset, src_obj, tgt_obj, horizon):
  hom = len(cat.hom(src_obj, tgt_obj))
  width = len(j_poset.elements()) if j_poset.is_finite else horizon + 1
  return hom ** width


def hom_classes(X, Y, j_poset, horizon=DEFAULT_HORIZON, budget=DEFAULT_BUDGET):
  """All valid morphisms X -> Y over the enrichment, grouped by
  equivalence; classes come in first-found order with their members.
  Both stage posets must be finite, and the candidate count is checked
  against the budget before enumeration starts."""
  cat = X.cat
  if not (cat is Y.cat or cat.kind == Y.cat.kind == "cyclic"):
    raise ProcatError("systems live over different categories")
  if not (X.index.is_finite and Y.index.is_finite):
    raise ProcatError("hom classes are enumerable over finite stage "
                      "posets only")
  if not (j_poset.is_finite or isinstance(j_poset, OmegaPoset)):
    raise ProcatError("enrichment must be finite or omega")
  m_els = list(Y.index.elements())
  lam_els = list(X.index.elements())

  total = 0
  index_count = len(lam_els) ** len(m_els)
  if index_count > budget:
    raise ProcatError(f"candidate space exceeds budget {budget}: "
                      f"{index_count} index maps alone")
  for combo in itertools.product(lam_els, repeat=len(m_els)):
    prod = 1
    for mu, lam in zip(m_els, combo):
      prod *= _family_space_size(cat, j_poset, X.object_at(lam),
                                 Y.object_at(mu), horizon)
    total += prod
    if total > budget:
      raise ProcatError(f"candidate space exceeds budget {budget}")

  candidates = []
  for combo in itertools.product(lam_els, repeat=len(m_els)):
    index = IndexFunction.from_table(Y.index, X.index,
                                     dict(zip(m_els, combo)))
    spaces = [_family_space(cat, j_poset, X.object_at(lam),
                            Y.object_at(mu), horizon)
              for mu, lam in zip(m_els, combo)]
    for fams in itertools.product(*spaces):
      jm = JMorphism(f"f{len(candidates)}", X, Y, j_poset, index,
                     dict(zip(m_els, fams)))
      if check_jmorphism(jm, horizon):
        candidates.append(jm)

  parent = list(range(len(candidates)))

  def find(a):
    while parent[a] != a:
      parent[a] = parent[parent[a]]
      a = parent[a]
    return a

  comparisons = 0
  for a in range(len(candidates)):
    for b in range(a + 1, len(candidates)):
      ra, rb = find(a), find(b)
      if ra == rb:
        continue
      comparisons += 1
      if comparisons > budget:
        raise ProcatError(f"equivalence comparisons exceed budget {budget}")
      if equivalent_jmorphisms(candidates[a], candidates[b], horizon):
        parent[max(ra, rb)] = min(ra, rb)

  groups = {}
  for idx in range(len(candidates)):
    groups.setdefault(find(idx), []).append(candidates[idx])
  return [JMorphismClass(members[0], tuple(members))
          for _, members in sorted(groups.items())]


# ---------------------------------------------------------------------------
# tower criterion
# ---------------------------------------------------------------------------


def _tower_shape(jm, gamma):
  X, Y = jm.source, jm.target
  if not (isinstance(X.index, OmegaPoset) and isinstance(Y.index, OmegaPoset)):
    raise ProcatError("tower criterion needs towers on both sides")
  if not isinstance(jm.j_poset, OmegaPoset):
    raise ProcatError("tower criterion needs an omega enrichment")
  if jm.index_fn.affine is None or jm.index_fn.affine[0][0] < 1:
    raise ProcatError("index map must be affine and strictly increasing")
  if gamma is not None:
    if gamma.affine is None or gamma.affine[0][0] < 1:
      raise ProcatError("commutation radius must be affine with positive "
                        "slope, so it is nondecreasing and unbounded")
  return X, Y


def _square_ok(cat, jm, m, j):
  f = jm.index_fn
  lhs = cat.compose(jm.family_at(m).at(j),
                    jm.source.bond(f(m), f(m + 1)))
  rhs = cat.compose(jm.target.bond(m, m + 1), jm.family_at(m + 1).at(j))
  return lhs == rhs


def _tower_premises(jm):
  return (jm.ladder is not None and jm.source.uniform_step is not None
          and jm.target.uniform_step is not None)


def _j_window(jm, m, floor):
  a = jm.family_at(m).payload
  b = jm.family_at(m + 1).payload
  t = max(floor, a.tail_start, b.tail_start)
  return range(floor, t + lcm(a.period, b.period))


def tower_iso_check(jm, gamma, horizon=DEFAULT_HORIZON):
  """Ladder criterion for a strictly increasing morphism of towers.

  gamma is the caller's claim of a commutation radius: the naturality
  square at stage m must commute exactly at every j with gamma(j) > m.
  The claim is verified first and a violation is an error, not a
  verdict.  Holds means diagonal fill-ins exist throughout the radius
  region, which makes the morphism invertible; Fails refutes the
  condition every invertible morphism satisfies; Inconclusive reports
  the gap."""
  X, Y = _tower_shape(jm, gamma)
  if gamma is None:
    raise ProcatError("the tower criterion needs a commutation radius")
  cat = jm.cat
  f = jm.index_fn
  exact = _tower_premises(jm)
  width = jm.ladder.tail_start + jm.ladder.period if exact else horizon + 1

  for m in range(width):
    floor = min_threshold(gamma, m + 1)
    for j in _j_window(jm, m, floor):
      if not _square_ok(cat, jm, m, j):
        raise ProcatError(f"commutation radius is inconsistent: square at "
                          f"stage {m} fails at enrichment {j}")

  entries = []
  gap = None
  for m in range(width):
    floor = min_threshold(gamma, m + 1)
    p = X.bond(f(m), f(m + 1))
    q = Y.bond(m, m + 1)
    hom = cat.hom(Y.object_at(m + 1), X.object_at(f(m)))
    fam_m, fam_next = jm.family_at(m), jm.family_at(m + 1)
    pick = _triangle_pick(cat, fam_m, fam_next, p, q, hom)
    window = list(_j_window(jm, m, floor))
    chosen = [(j, pick(j)) for j in window]
    if any(h is None for _, h in chosen):
      gap = {"stage": m,
             "missing_at": next(j for j, h in chosen if h is None)}
      break
    entries.append({"stage": m, "j_threshold": floor,
                    "h_table": {str(j): h.describe() for j, h in chosen}})

  if gap is None:
    if exact:
      return Verdict.holds({"stage_window": width, "periodic": True,
                            "entries": entries})
    return Verdict.inconclusive(horizon, {"checked_stages": width,
                                          "entries": entries})

  necessary = tower_iso_witnesses(jm, horizon)
  if necessary.is_fails:
    return necessary
  out = dict(gap)
  out["note"] = "fill-ins missing inside the radius, no exact refutation"
  return Verdict.inconclusive(horizon, out)


def tower_iso_witnesses(jm, horizon=DEFAULT_HORIZON):
  """The condition every invertible tower morphism satisfies: for each
  stage m some m' >= m, a threshold, and fill-ins h with h . f_{m'}
  equal to the source bond and f_m . h equal to the target bond.  Fails
  refutes invertibility exactly; Holds certifies only this
  one-directional condition."""
  X, Y = _tower_shape(jm, None)
  cat = jm.cat
  f = jm.index_fn
  autonomous = (X.uniform_step is not None and Y.uniform_step is not None)

  def stage_entry(m):
    fam_m = jm.family_at(m)
    seen = set()
    for mp in range(m, m + horizon + 1):
      q = Y.bond(m, mp)
      p = X.bond(f(m), f(mp))
      fam_hi = jm.family_at(mp)
      hom = cat.hom(Y.object_at(mp), X.object_at(f(m)))
      pick = _triangle_pick(cat, fam_m, fam_hi, p, q, hom)
      got = _eventual_choice(jm.j_poset, (fam_m, fam_hi), pick)
      if got is not None:
        j0, pairs, _, _ = got
        return {"stage": m, "stage_prime": mp, "j_threshold": j0,
                "h_table": {str(j): h.describe() for j, h in pairs}}
      if autonomous:
        state = (fam_hi.key(), q, p)
        if state in seen:
          return None
        seen.add(state)
    return _OPEN

  exact = _tower_premises(jm)
  width = jm.ladder.tail_start + jm.ladder.period if exact else horizon + 1
  entries = []
  for m in range(width):
    got = stage_entry(m)
    if got is None:
      return Verdict.fails({"stage": m,
                            "reason": "no higher stage closes the triangles"})
    if got is _OPEN:
      return Verdict.inconclusive(horizon, {"undecided_stage": m})
    entries.append(got)
  if exact:
    return Verdict.holds({"stage_window": width, "periodic": True,
                          "entries": entries})
  return Verdict.inconclusive(horizon, {"checked_stages": width,
                                        "entries": entries})
