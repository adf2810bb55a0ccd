"""J-morphism checks against exhaustive oracles on finite data, plus the
exact scan certificates over uniform towers."""

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from proshape.cat import CYCGRP, Morphism, MorphismFamily
from proshape.eventual import PeriodicSeq
from proshape.invsys import InverseSystem, tower, uniform_tower
from proshape.jmor import (JmorError, JMorphism, check_jmorphism,
                           classify_jmorphism, collapse_to_pro,
                           compose_jmorphisms, equivalent_jmorphisms,
                           identity_jmorphism, induce, restrict_stages,
                           simplify, transfer, transfer_iso_back,
                           validate_jmorphism)
from proshape.order import (OMEGA, FinitePoset, IndexFunction, ProductPoset,
                            is_increasing)

J2 = FinitePoset.chain([0, 1])
J3 = FinitePoset.chain([0, 1, 2])


# -- oracles -----------------------------------------------------------------
# Over a finite directed enrichment index the tail condition collapses to
# plain equality at the greatest element, so raw compositions decide
# validity and equivalence without any of the engine machinery.


def jtop(j_poset):
  els = list(j_poset.elements())
  return [m for m in els if all(j_poset.le(e, m) for e in els)][0]


def brute_valid(jm):
  X, Y, f, cat = jm.source, jm.target, jm.index_fn, jm.cat
  jt = jtop(jm.j_poset)
  lams = list(X.index.elements())
  mus = list(Y.index.elements())
  for mu in mus:
    for mup in mus:
      if mu == mup or not Y.index.le(mu, mup):
        continue
      q = Y.bond(mu, mup)
      ok = False
      for lam in lams:
        if not (X.index.le(f(mu), lam) and X.index.le(f(mup), lam)):
          continue
        lhs = cat.compose(jm.family_at(mu).at(jt), X.bond(f(mu), lam))
        rhs = cat.compose(q, cat.compose(jm.family_at(mup).at(jt),
                                         X.bond(f(mup), lam)))
        if lhs == rhs:
          ok = True
          break
      if not ok:
        return False
  return True


def brute_equivalent(a, b):
  X, cat = a.source, a.cat
  jt = jtop(a.j_poset)
  lams = list(X.index.elements())
  for mu in a.target.index.elements():
    fa, fb = a.index_fn(mu), b.index_fn(mu)
    ok = False
    for lam in lams:
      if not (X.index.le(fa, lam) and X.index.le(fb, lam)):
        continue
      lhs = cat.compose(a.family_at(mu).at(jt), X.bond(fa, lam))
      rhs = cat.compose(b.family_at(mu).at(jt), X.bond(fb, lam))
      if lhs == rhs:
        ok = True
        break
    if not ok:
      return False
  return True


# -- fixtures ----------------------------------------------------------------


def z4_tower(step_value, name=None):
  return uniform_tower(CYCGRP, 4, Morphism(4, 4, step_value),
                       name=name or f"T{step_value}")


def const_chain(labels, step_value, mod=4, name="X"):
  poset = FinitePoset.chain(list(labels))
  labels = list(labels)
  bonds = {(labels[i], labels[i + 1]): Morphism(mod, mod, step_value)
           for i in range(len(labels) - 1)}
  return InverseSystem(name, CYCGRP, poset, {l: mod for l in labels}, bonds)


def ladder_jm(X, Y, cells, coeffs=((1, 0),), name="f"):
  idx = IndexFunction.from_affine(X.index, coeffs)
  return JMorphism(name, X, Y, OMEGA, idx, PeriodicSeq((), tuple(cells)))


def c4(v):
  return Morphism(4, 4, v)


# -- identity and structural validation ---------------------------------------


def test_identity_on_uniform_tower():
  X = z4_tower(3)
  jm = identity_jmorphism(X, OMEGA)
  assert validate_jmorphism(jm) == []
  kinds = classify_jmorphism(jm)
  assert all(bool(v) for v in kinds.values()), kinds
  assert kinds["valid"].witness["periodic"] is True


def test_identity_on_finite_system():
  rng = random.Random(3)
  X = gen.chain_system(rng, 3)
  jm = identity_jmorphism(X, J2)
  kinds = classify_jmorphism(jm)
  assert all(bool(v) for v in kinds.values()), kinds
  assert brute_valid(jm)


def test_init_rejects_mismatched_data():
  rng = random.Random(5)
  X = gen.chain_system(rng, 3)
  Y = gen.chain_system(rng, 2, name="Y")
  pc = gen.poset_category(gen.random_directed_poset(rng))
  from proshape.invsys import rudimentary
  W = rudimentary(pc, list(pc.objects())[0])
  good = gen.random_jmorphism(rng, X, Y, J2)
  with pytest.raises(JmorError):
    JMorphism("f", X, W, J2, good.index_fn, good.families)
  wrong_dom = IndexFunction.from_table(X.index, X.index,
                                       {e: e for e in X.index.elements()})
  with pytest.raises(JmorError):
    JMorphism("f", X, Y, J2, wrong_dom, good.families)
  with pytest.raises(JmorError):
    # ladders need an omega-indexed target
    JMorphism("f", X, Y, J2, good.index_fn,
              PeriodicSeq((), (MorphismFamily.constant(J2, c4(1)),)))


def test_validate_reports_stagewise_errors():
  X = const_chain([0, 1, 2], 3)
  Y = const_chain(["a", "b"], 3, name="Y")
  idx = IndexFunction.from_table(Y.index, X.index, {"a": 1, "b": 1})
  ok = MorphismFamily.from_table(J2, {0: c4(1), 1: c4(2)})
  missing = validate_jmorphism(JMorphism("f", X, Y, J2, idx, {"a": ok}))
  assert {"error": "missing_family", "stage": "b"} in missing

  off_index = JMorphism("f", X, Y, J2, idx,
                        {"a": ok, "b": MorphismFamily.from_table(
                            J3, {0: c4(1), 1: c4(1), 2: c4(1)})})
  assert any(e["error"] == "family_index" for e in validate_jmorphism(off_index))

  bad_ends = JMorphism("f", X, Y, J2, idx,
                       {"a": ok, "b": MorphismFamily.from_table(
                           J2, {0: Morphism(6, 4, 0), 1: Morphism(6, 4, 2)})})
  errs = validate_jmorphism(bad_ends)
  assert any(e["error"] == "family_endpoints" and e["stage"] == "b"
             for e in errs)

  bad_member = JMorphism("f", X, Y, J2, idx,
                         {"a": ok, "b": MorphismFamily.from_table(
                             J2, {0: c4(1), 1: Morphism(4, 4, 7)})})
  errs = validate_jmorphism(bad_member)
  assert any(e["error"] == "not_a_morphism" and e["stage"] == "b"
             for e in errs)


def test_describe_is_json_ready():
  X = z4_tower(3)
  jm = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2))])
  json.dumps(jm.describe())


# -- validity: engine against the oracle --------------------------------------


def test_validity_matches_brute():
  rng = random.Random(7)
  seen = {True: 0, False: 0}
  for k in range(120):
    collapsing = k % 5 < 2
    X = gen.chain_system(rng, rng.randint(2, 4), collapsing=collapsing)
    Y = gen.chain_system(rng, rng.randint(2, 3), name="Y")
    jm = gen.random_jmorphism(rng, X, Y, J2, avoid_top=collapsing)
    v = check_jmorphism(jm)
    assert not v.is_inconclusive
    want = brute_valid(jm)
    assert bool(v) == want, (k, v.outcome, v.counterexample)
    seen[want] += 1
  assert seen[True] >= 20 and seen[False] >= 20, seen


def test_omega_ladder_valid_is_exact():
  X = z4_tower(3)
  jm = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2))])
  v = check_jmorphism(jm)
  assert bool(v)
  assert v.witness == {"adjacent_window": 2, "periodic": True}


def test_omega_ladder_invalid_fails_by_cycle():
  X = z4_tower(3)
  jm = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2)),
                        MorphismFamily.constant(OMEGA, c4(1))])
  v = check_jmorphism(jm)
  assert v.is_fails
  assert v.counterexample["pair"] == (0, 1)
  assert "lambda_cycle" in v.counterexample


def test_omega_without_uniform_step_stays_open():
  # same tower built from a step rule: no declared uniformity, so the
  # checker may confirm single squares but never the whole chain
  X = tower(CYCGRP, lambda n: 4, lambda n: Morphism(4, 4, 3), name="T")
  good = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2))])
  v = check_jmorphism(good, horizon=16)
  assert v.is_inconclusive
  assert v.witness == {"checked_adjacent": 17}

  bad = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2)),
                         MorphismFamily.constant(OMEGA, c4(1))])
  w = check_jmorphism(bad, horizon=16)
  assert w.is_inconclusive
  assert "lambda_exhausted" in w.witness


def test_check_probes_infinite_non_omega_stages():
  # product-indexed target: a clean scan is only a probe, but a failing
  # pair is exact because the stage ascent runs over the omega source
  K = ProductPoset(OMEGA, OMEGA)
  X = z4_tower(3)
  Y = InverseSystem("G", CYCGRP, K, lambda k: 4,
                    bonds=lambda k1, k2: c4(pow(3, (k2[0] - k1[0]) +
                                                (k2[1] - k1[1]), 4)))
  idx = IndexFunction.from_fn(K, OMEGA, lambda k: max(k),
                              increasing_hint=True)
  jm = JMorphism("f", X, Y, OMEGA, idx,
                 lambda mu: MorphismFamily.constant(OMEGA, c4(2)))
  v = check_jmorphism(jm, horizon=8)
  assert v.is_inconclusive
  assert v.witness["pairs_probed"] > 0

  bad = JMorphism("g", X, Y, OMEGA, idx,
                  lambda mu: MorphismFamily.constant(
                      OMEGA, c4(2 if (mu[0] + mu[1]) % 2 == 0 else 0)))
  w = check_jmorphism(bad, horizon=8)
  assert w.is_fails


# -- equivalence ---------------------------------------------------------------


def test_equivalence_matches_brute():
  rng = random.Random(11)
  seen = {True: 0, False: 0}
  for k in range(100):
    X = gen.chain_system(rng, rng.randint(2, 4))
    Y = gen.chain_system(rng, rng.randint(2, 3), name="Y")
    a = gen.random_jmorphism(rng, X, Y, J2)
    if k % 3 == 0:
      # same index function, families touched below the top index only
      fams = {}
      for mu in Y.index.elements():
        hom = CYCGRP.hom(X.object_at(a.index_fn(mu)), Y.object_at(mu))
        fams[mu] = MorphismFamily.from_table(
            J2, {0: rng.choice(hom), 1: a.family_at(mu).at(1)})
      b = JMorphism("g", X, Y, J2, a.index_fn, fams)
    else:
      b = gen.random_jmorphism(rng, X, Y, J2, name="g")
    v = equivalent_jmorphisms(a, b)
    assert not v.is_inconclusive
    want = brute_equivalent(a, b)
    assert bool(v) == want, (k, v.outcome)
    assert equivalent_jmorphisms(b, a).outcome == v.outcome
    assert bool(equivalent_jmorphisms(a, a))
    if want:
      # equivalence transports the square condition across the pair
      assert brute_valid(a) == brute_valid(b)
    seen[want] += 1
  assert seen[True] >= 15 and seen[False] >= 15, seen


def test_equivalence_omega_exact_window():
  X = z4_tower(2)
  a = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(1))], name="a")
  b = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(0)),
                       MorphismFamily.constant(OMEGA, c4(3))], name="b")
  v = equivalent_jmorphisms(a, b)
  assert bool(v)
  assert v.witness == {"stage_window": 3, "periodic": True}


def test_equivalence_omega_fails_by_cycle():
  X = z4_tower(3)
  a = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2))], name="a")
  b = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(1))], name="b")
  v = equivalent_jmorphisms(a, b)
  assert v.is_fails
  assert v.counterexample["stage"] == 0


def test_equivalence_slope_mismatch_stays_open():
  X = z4_tower(2)
  a = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(1))], name="a")
  b = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(3))],
                coeffs=((2, 0),), name="b")
  v = equivalent_jmorphisms(a, b, horizon=8)
  assert v.is_inconclusive
  assert v.witness == {"checked_stages": 9}


def test_equivalence_preconditions():
  rng = random.Random(13)
  X = gen.chain_system(rng, 3)
  Y = gen.chain_system(rng, 2, name="Y")
  X2 = gen.chain_system(rng, 3, name="X2")
  a = gen.random_jmorphism(rng, X, Y, J2)
  with pytest.raises(JmorError):
    equivalent_jmorphisms(a, gen.random_jmorphism(rng, X2, Y, J2))
  with pytest.raises(JmorError):
    equivalent_jmorphisms(a, gen.random_jmorphism(rng, X, Y, J3))


# -- composition ---------------------------------------------------------------


def test_compose_finite_pointwise():
  rng = random.Random(17)
  for k in range(40):
    X = gen.chain_system(rng, rng.randint(2, 4))
    Y = gen.chain_system(rng, rng.randint(2, 3), name="Y")
    Z = gen.chain_system(rng, 2, name="Z")
    f = gen.random_jmorphism(rng, X, Y, J2)
    g = gen.random_jmorphism(rng, Y, Z, J2, name="g")
    h = compose_jmorphisms(g, f)
    assert h.source is X and h.target is Z
    for nu in Z.index.elements():
      assert h.index_fn(nu) == f.index_fn(g.index_fn(nu))
      for j in (0, 1):
        want = CYCGRP.compose(g.family_at(nu).at(j),
                              f.family_at(g.index_fn(nu)).at(j))
        assert h.family_at(nu).at(j) == want
    v = check_jmorphism(h)
    assert not v.is_inconclusive
    assert bool(v) == brute_valid(h)


def test_compose_identity_laws():
  rng = random.Random(19)
  X = gen.chain_system(rng, 3)
  Y = gen.chain_system(rng, 2, name="Y")
  f = gen.random_jmorphism(rng, X, Y, J2)
  left = compose_jmorphisms(identity_jmorphism(Y, J2), f)
  right = compose_jmorphisms(f, identity_jmorphism(X, J2))
  for mu in Y.index.elements():
    assert left.index_fn(mu) == f.index_fn(mu)
    assert right.index_fn(mu) == f.index_fn(mu)
    assert left.family_at(mu).key() == f.family_at(mu).key()
    assert right.family_at(mu).key() == f.family_at(mu).key()


def test_compose_ladders_keeps_closed_form():
  X, Y, Z = z4_tower(3, "X"), z4_tower(3, "Y"), z4_tower(3, "Z")
  f = ladder_jm(X, Y, [MorphismFamily.constant(OMEGA, c4(1)),
                       MorphismFamily.constant(OMEGA, c4(3))], name="f")
  g = ladder_jm(Y, Z, [MorphismFamily.constant(OMEGA, c4(2))],
                coeffs=((2, 1),), name="g")
  h = compose_jmorphisms(g, f)
  assert h.ladder is not None
  assert h.index_fn.affine == ((2, 1),)
  for nu in range(6):
    want = CYCGRP.compose(g.family_at(nu).at(0), f.family_at(2 * nu + 1).at(0))
    assert h.family_at(nu).at(0) == want

  # constant index function: the pulled ladder degenerates to one cell
  gc = ladder_jm(Y, Z, [MorphismFamily.constant(OMEGA, c4(2))],
                 coeffs=((0, 3),), name="gc")
  hc = compose_jmorphisms(gc, f)
  assert hc.ladder is not None
  for nu in range(4):
    want = CYCGRP.compose(gc.family_at(nu).at(0), f.family_at(3).at(0))
    assert hc.family_at(nu).at(0) == want


def test_compose_preconditions():
  rng = random.Random(23)
  X = gen.chain_system(rng, 3)
  Y = gen.chain_system(rng, 2, name="Y")
  f = gen.random_jmorphism(rng, X, Y, J2)
  with pytest.raises(JmorError):
    compose_jmorphisms(f, f)
  g = gen.random_jmorphism(rng, Y, gen.chain_system(rng, 2, name="Z"), J3,
                           name="g")
  with pytest.raises(JmorError):
    compose_jmorphisms(g, f)


# -- classification ------------------------------------------------------------


def test_classify_shift_index():
  X = z4_tower(3)
  jm = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2))],
                 coeffs=((1, 1),))
  kinds = classify_jmorphism(jm)
  assert bool(kinds["valid"]) and bool(kinds["simple"])
  assert kinds["level"].is_fails
  assert kinds["level"].counterexample == {"affine": [[1, 1]]}


def test_classify_commutative_boundary():
  # tails agree but the j=0 entries trade places around the square, so
  # the morphism is valid, level, simple, and not commutative
  X = z4_tower(3)
  cell_a = MorphismFamily.from_seq(OMEGA, PeriodicSeq((c4(1),), (c4(2),)))
  cell_b = MorphismFamily.from_seq(OMEGA, PeriodicSeq((c4(3),), (c4(2),)))
  jm = ladder_jm(X, X, [cell_a, cell_b])
  kinds = classify_jmorphism(jm)
  assert bool(kinds["valid"]) and bool(kinds["level"]) and bool(kinds["simple"])
  assert kinds["commutative"].is_fails
  assert "lambda_cycle" in kinds["commutative"].counterexample


def test_classify_commutative_holds_for_identity():
  X = z4_tower(3)
  kinds = classify_jmorphism(identity_jmorphism(X, OMEGA))
  assert bool(kinds["commutative"])


# -- simplify ------------------------------------------------------------------


def test_simplify_majorant_chain():
  # valid because the top-j members are all 3 and the stage offsets have
  # matching parity under the times-3 bonds; the j=0 members are noise
  X = const_chain([0, 1, 2, 3], 3)
  Y = const_chain(["a", "b", "c"], 3, name="Y")
  idx = IndexFunction.from_table(Y.index, X.index, {"a": 2, "b": 1, "c": 2})
  fams = {"a": MorphismFamily.from_table(J2, {0: c4(1), 1: c4(3)}),
          "b": MorphismFamily.from_table(J2, {0: c4(2), 1: c4(3)}),
          "c": MorphismFamily.from_table(J2, {0: c4(0), 1: c4(3)})}
  jm = JMorphism("f", X, Y, J2, idx, fams)
  assert bool(check_jmorphism(jm))
  s = simplify(jm)
  assert {mu: s.index_fn(mu) for mu in "abc"} == {"a": 2, "b": 2, "c": 2}
  assert bool(is_increasing(s.index_fn))
  # stage b climbs one bond: each member picks up a factor of 3
  assert s.family_at("b").at(0) == c4(2 * 3 % 4)
  assert s.family_at("b").at(1) == c4(3 * 3 % 4)
  assert s.family_at("a").at(1) == c4(3)
  assert bool(equivalent_jmorphisms(jm, s))
  assert bool(classify_jmorphism(s)["simple"])


def test_simplify_refuses_invalid_input():
  X = const_chain([0, 1], 3)
  Y = const_chain(["a", "b"], 3, name="Y")
  idx = IndexFunction.from_table(Y.index, X.index, {"a": 0, "b": 0})
  fams = {"a": MorphismFamily.constant(J2, c4(1)),
          "b": MorphismFamily.constant(J2, c4(2))}
  jm = JMorphism("f", X, Y, J2, idx, fams)
  assert check_jmorphism(jm).is_fails
  with pytest.raises(JmorError, match="no simple representative"):
    simplify(jm)


def test_simplify_affine_passthrough():
  X = z4_tower(3)
  jm = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2))])
  assert simplify(jm).index_fn is jm.index_fn


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_simplify_is_equivalent(seed):
  rng = random.Random(seed)
  X = gen.chain_system(rng, rng.randint(2, 4))
  Y = gen.chain_system(rng, rng.randint(2, 3), name="Y")
  while True:
    jm = gen.random_jmorphism(rng, X, Y, J2)
    if check_jmorphism(jm):
      break
  s = simplify(jm)
  assert bool(is_increasing(s.index_fn))
  assert bool(equivalent_jmorphisms(jm, s))
  assert brute_valid(s)
  assert bool(classify_jmorphism(s)["simple"])


# -- induce, restrict and collapse -----------------------------------------------


POINT = FinitePoset.chain(["*"])


def test_induce_constant_families():
  rng = random.Random(47)
  X = gen.chain_system(rng, 3)
  Y = gen.chain_system(rng, 2, name="Y")
  jm = gen.random_jmorphism(rng, X, Y, POINT)
  while check_jmorphism(jm).is_fails:
    jm = gen.random_jmorphism(rng, X, Y, POINT)
  up = induce(jm, J3)
  assert up.j_poset == J3
  for mu in Y.index.elements():
    assert up.family_at(mu).is_constant()
    assert up.family_at(mu).at(2) == jm.family_at(mu).at("*")
  cls = classify_jmorphism(up)
  assert bool(cls["commutative"])


def test_induce_of_identity_is_identity():
  rng = random.Random(48)
  X = gen.chain_system(rng, 3)
  up = induce(identity_jmorphism(X, POINT), J2)
  want = identity_jmorphism(X, J2)
  for lam in X.index.elements():
    assert up.family_at(lam) == want.family_at(lam)
  assert bool(equivalent_jmorphisms(up, want))


def test_induce_is_injective_on_classes():
  rng = random.Random(49)
  agree = {True: 0, False: 0}
  for k in range(60):
    X = gen.chain_system(rng, 3)
    Y = gen.chain_system(rng, 2, name="Y")
    a = gen.random_jmorphism(rng, X, Y, POINT)
    b = gen.random_jmorphism(rng, X, Y, POINT)
    if check_jmorphism(a).is_fails or check_jmorphism(b).is_fails:
      continue
    plain = bool(equivalent_jmorphisms(a, b))
    lifted = bool(equivalent_jmorphisms(induce(a, J3), induce(b, J3)))
    assert plain == lifted
    agree[plain] += 1
  assert agree[True] >= 3 and agree[False] >= 3


def test_induce_is_functorial():
  rng = random.Random(50)
  done = 0
  while done < 20:
    X = gen.chain_system(rng, 3)
    Y = gen.chain_system(rng, 2, name="Y")
    Z = gen.chain_system(rng, 2, name="Z")
    f = gen.random_jmorphism(rng, X, Y, POINT)
    g = gen.random_jmorphism(rng, Y, Z, POINT)
    if check_jmorphism(f).is_fails or check_jmorphism(g).is_fails:
      continue
    gf = compose_jmorphisms(g, f)
    if check_jmorphism(gf).is_fails:
      continue
    lhs = induce(gf, J2)
    rhs = compose_jmorphisms(induce(g, J2), induce(f, J2))
    assert bool(equivalent_jmorphisms(lhs, rhs))
    done += 1


def test_induce_rejects_wide_or_invalid_input():
  rng = random.Random(51)
  X = gen.chain_system(rng, 3)
  with pytest.raises(JmorError):
    induce(identity_jmorphism(X, J2), J3)  # not a one-point enrichment
  bad = None
  while bad is None:
    cand = gen.random_jmorphism(rng, X, gen.chain_system(rng, 2, name="Y"),
                                POINT)
    if check_jmorphism(cand).is_fails:
      bad = cand
  with pytest.raises(JmorError):
    induce(bad, J3)


def test_induce_collapse_round_trip():
  rng = random.Random(52)
  done = 0
  while done < 20:
    X = gen.chain_system(rng, 3)
    Y = gen.chain_system(rng, 2, name="Y")
    jm = gen.random_jmorphism(rng, X, Y, J3)
    if check_jmorphism(jm).is_fails:
      continue
    back = induce(collapse_to_pro(jm), J3)
    assert bool(equivalent_jmorphisms(back, jm))
    done += 1


def test_restrict_affine_keeps_everything_exact():
  X = z4_tower(3)
  jm = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2))])
  phi = IndexFunction.from_affine(OMEGA, ((2, 0),))
  ind = restrict_stages(jm, phi)
  assert ind.target.uniform_step == c4(3 * 3 % 4)
  assert ind.index_fn.affine == ((2, 0),)
  assert ind.ladder is not None
  v = check_jmorphism(ind)
  assert bool(v) and v.witness["periodic"] is True


def test_restrict_finite_stages():
  rng = random.Random(29)
  X = gen.chain_system(rng, 4)
  Y = const_chain(["a", "b", "c"], 3, name="Y")
  jm = gen.random_jmorphism(rng, X, Y, J2)
  K = FinitePoset.chain([0, 1])
  phi = IndexFunction.from_table(K, Y.index, {0: "a", 1: "c"})
  ind = restrict_stages(jm, phi)
  assert ind.target.object_at(0) == Y.object_at("a")
  assert ind.target.bond(0, 1) == Y.bond("a", "c")
  assert ind.family_at(1).key() == jm.family_at("c").key()
  v = check_jmorphism(ind)
  assert bool(v) == brute_valid(ind)


def test_restrict_rejects_bad_maps():
  X = z4_tower(3)
  jm = ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2))])
  with pytest.raises(JmorError):
    restrict_stages(jm, IndexFunction.from_affine(OMEGA, ((0, 5),)))  # not cofinal
  Y = const_chain(["a", "b", "c"], 3, name="Y")
  K = FinitePoset.chain([0, 1])
  down = IndexFunction.from_table(K, Y.index, {0: "c", 1: "a"})
  rng = random.Random(31)
  fin = gen.random_jmorphism(rng, gen.chain_system(rng, 3), Y, J2)
  with pytest.raises(JmorError):
    restrict_stages(fin, down)  # not increasing
  up = IndexFunction.from_table(K, Y.index, {0: "a", 1: "c"})
  with pytest.raises(JmorError):
    restrict_stages(jm, up)  # lands in the wrong stage poset


def test_collapse_to_pro():
  rng = random.Random(37)
  seen = {True: 0, False: 0}
  for k in range(40):
    X = gen.chain_system(rng, 3)
    Y = gen.chain_system(rng, 2, name="Y")
    jm = gen.random_jmorphism(rng, X, Y, J3)
    col = collapse_to_pro(jm)
    assert list(col.j_poset.elements()) == ["*"]
    for mu in Y.index.elements():
      assert col.family_at(mu).at("*") == jm.family_at(mu).at(2)
    assert check_jmorphism(col).outcome == check_jmorphism(jm).outcome
    seen[brute_valid(jm)] += 1
  assert seen[True] >= 5 and seen[False] >= 5

  X = z4_tower(3)
  with pytest.raises(JmorError):
    collapse_to_pro(ladder_jm(X, X, [MorphismFamily.constant(OMEGA, c4(2))]))


# -- enrichment transfer ---------------------------------------------------------


def grid_jm():
  X = z4_tower(3)
  cell_a = MorphismFamily.from_seq(OMEGA, PeriodicSeq((c4(1),), (c4(2),)))
  cell_b = MorphismFamily.from_seq(OMEGA, PeriodicSeq((c4(3),), (c4(2),)))
  return X, ladder_jm(X, X, [cell_a, cell_b])


def test_transfer_to_grid_pointwise():
  X, jm = grid_jm()
  K = ProductPoset(OMEGA, OMEGA)
  phi = IndexFunction.from_affine(K, ((1, 0), (1, 0)))
  moved = transfer(jm, phi)
  assert moved.j_poset is K
  assert moved.ladder is not None
  for n in range(4):
    for k1 in range(4):
      for k2 in range(4):
        assert moved.family_at(n).at((k1, k2)) == \
            jm.family_at(n).at(max(k1, k2))
  v = check_jmorphism(moved)
  assert bool(v) and v.witness["periodic"] is True


def test_transfer_omega_to_omega():
  X, jm = grid_jm()
  phi = IndexFunction.from_affine(OMEGA, ((2, 0),))
  moved = transfer(jm, phi)
  for n in range(4):
    for k in range(7):
      assert moved.family_at(n).at(k) == jm.family_at(n).at(-(-k // 2))


def test_transfer_back_and_roundtrip():
  X, jm = grid_jm()
  K = ProductPoset(OMEGA, OMEGA)
  phi = IndexFunction.from_affine(K, ((1, 0), (1, 0)))
  moved = transfer(jm, phi)

  same = transfer_iso_back(moved, phi)
  for n in range(5):
    assert same.family_at(n).key() == jm.family_at(n).key()

  shifted = transfer_iso_back(moved, IndexFunction.from_affine(K, ((1, 1), (1, 1))))
  for n in range(5):
    for j in range(6):
      assert shifted.family_at(n).at(j) == jm.family_at(n).at(j + 1)


def test_transfer_rejects():
  X, jm = grid_jm()
  with pytest.raises(JmorError):
    transfer(jm, IndexFunction.from_fn(OMEGA, OMEGA, lambda n: n))
  K = ProductPoset(OMEGA, OMEGA)
  with pytest.raises(JmorError):
    transfer(jm, IndexFunction.from_affine(K, ((1, 0), (0, 2))))
  rng = random.Random(41)
  finite = gen.random_jmorphism(rng, gen.chain_system(rng, 3),
                                gen.chain_system(rng, 2, name="Y"), J2)
  with pytest.raises(JmorError):
    transfer(finite, IndexFunction.from_affine(OMEGA, ((1, 0),)))
