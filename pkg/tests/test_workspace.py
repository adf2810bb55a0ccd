"""Workspace files: every declaration kind round-trips into a working
engine value, and malformed input is refused with a position."""

import pytest

from proshape.cat import CYCGRP, FinCat
from proshape.order import OmegaPoset, ProductPoset
from proshape.workspace import WorkspaceError, load_workspace, parse_workspace

FIXTURES = __import__("pathlib").Path(__file__).resolve().parent.parent / "fixtures"

ISO_CAT = """
category C {
  objects: P, Q;
  morphisms: iP: P->P, iQ: Q->Q, s: P->Q, t: Q->P;
  identity: P = iP, Q = iQ;
  compose: s.t = iQ, t.s = iP
}
"""

TWO_POINT = """
category TP {
  objects: X, P;
  morphisms: idX: X->X, idP: P->P, p: X->P, q: X->P, u: P->P, v: P->P;
  identity: X = idX, P = idP;
  compose: u.p = p, u.q = p, v.p = q, v.q = q,
           u.u = u, u.v = u, v.u = v, v.v = v
}
"""


def test_finite_poset_declaration():
  ws = parse_workspace("poset J { elements: 0, 1, 2; le: 0<=1, 1<=2 }")
  J = ws.poset("J")
  assert J.le(0, 2) and not J.le(2, 0)
  assert J.le(1, 1)


def test_single_element_poset_is_reflexive():
  ws = parse_workspace("poset ONE { elements: a }")
  assert ws.poset("ONE").le("a", "a")


def test_omega_and_product_forms():
  ws = parse_workspace("poset W = omega\nposet K = product(W, W)")
  assert isinstance(ws.poset("W"), OmegaPoset)
  K = ws.poset("K")
  assert isinstance(K, ProductPoset)
  assert K.le((0, 1), (2, 3))
  # the bare name resolves without a declaration
  assert isinstance(ws.poset("omega"), OmegaPoset)


def test_category_declaration_builds_a_validated_fincat():
  ws = parse_workspace(ISO_CAT)
  C = ws.category("C")
  assert isinstance(C, FinCat)
  assert C.compose(C.mor("t"), C.mor("s")).value == "iP"


def test_identity_composites_are_filled_in():
  # no compose block at all: only identity composites exist
  ws = parse_workspace("""
    category A { objects: A, B;
                 morphisms: iA: A->A, iB: B->B, u: A->B;
                 identity: A = iA, B = iB }
  """)
  A = ws.category("A")
  assert A.compose(A.mor("u"), A.mor("iA")).value == "u"
  assert A.compose(A.mor("iB"), A.mor("u")).value == "u"


def test_cycgrp_alias():
  ws = parse_workspace("category G = cycgrp")
  assert ws.category("G") is CYCGRP


def test_stagewise_system():
  ws = parse_workspace(ISO_CAT + """
    poset J { elements: lo, hi; le: lo<=hi }
    system X over J in C { object lo = P; object hi = Q; bond lo<=hi = t }
  """)
  X = ws.system("X")
  assert X.object_at("lo") == "P"
  assert X.bond("lo", "hi").value == "t"
  assert X.bond("hi", "hi").value == "iQ"


def test_uniform_tower_over_cycgrp():
  ws = parse_workspace("""
    category cyc = cycgrp
    system T over omega in cyc { object = 6; step = 2 }
  """)
  T = ws.system("T")
  assert T.object_at(5) == 6
  assert T.bond(0, 2).value == 4  # two doubling steps

def test_indexmap_affine_and_table():
  ws = parse_workspace("""
    poset W = omega
    poset K = product(W, W)
    poset J { elements: lo, hi; le: lo<=hi }
    indexmap phi : W -> K = affine (1,0) (2,1)
    indexmap psi : J -> K { lo -> (0, 0), hi -> (1, 2) }
  """)
  assert ws.indexmap("phi")(3) == (3, 7)
  assert ws.indexmap("psi")("hi") == (1, 2)


def test_jmorphism_with_table_and_const_families():
  ws = parse_workspace(ISO_CAT + """
    poset J { elements: lo, hi; le: lo<=hi }
    poset E { elements: 0, 1; le: 0<=1 }
    system X over J in C { object lo = P; object hi = Q; bond lo<=hi = t }
    jmorphism f : X -> X over E {
      index: lo -> hi, hi -> hi;
      family lo = const(t);
      family hi = table(0: iQ, 1: iQ)
    }
  """)
  f = ws.jmorphism("f")
  assert f.index_fn("lo") == "hi"
  assert f.family_at("lo").at(0).value == "t"


def test_step_and_rule_families_over_omega():
  ws = parse_workspace("""
    poset W = omega
    poset PT { elements: pt }
    category cyc = cycgrp
    system S over PT in cyc { object pt = 5 }
    jmorphism r : S -> S over W {
      index: pt -> pt;
      family pt = step[(0, 1), (2, 2)]
    }
    jmorphism m : S -> S over W {
      index: pt -> pt;
      family pt = rule(0, 1)
    }
  """)
  st = ws.jmorphism("r").family_at("pt")
  assert st.at(1).value == 1 and st.at(2).value == 2 and st.at(9).value == 2
  ml = ws.jmorphism("m").family_at("pt")
  assert ml.at(3).value == 3 % 5


def test_tower_morphism_from_cells():
  ws = parse_workspace("""
    category cyc = cycgrp
    poset W = omega
    system T over W in cyc { object = 8; step = 2 }
    jmorphism t2 : T -> T over W {
      index: affine (1,0);
      cells transient = [ const(1) ];
      cells cycle = [ const(2) ]
    }
  """)
  t2 = ws.jmorphism("t2")
  assert t2.family_at(0).at(0).value == 1
  assert t2.family_at(4).at(0).value == 2


def test_pair_with_designated_and_alternate_expansions():
  ws = parse_workspace(ISO_CAT + """
    poset J { elements: lo, hi; le: lo<=hi }
    poset PT { elements: pt }
    system X over J in C { object lo = P; object hi = Q; bond lo<=hi = t }
    system RP over PT in C { object pt = P }
    system RQ over PT in C { object pt = Q }
    pair SH (C, D) {
      D: P, Q;
      expansion P = { lo: iP, hi: s } into X;
      expansion Q = { pt: iQ } into RQ;
      expansion P = { pt: iP } into RP
    }
  """)
  pair = ws.pair("SH")
  assert pair.d_objects == ("P", "Q")
  assert pair.expansion("P").system is ws.system("X")
  assert len(ws.alternates["SH"]["P"]) == 1


def test_unnamed_pair_takes_the_subcategory_label():
  ws = parse_workspace(ISO_CAT + """
    poset PT { elements: pt }
    system RP over PT in C { object pt = P }
    system RQ over PT in C { object pt = Q }
    pair (C, D) {
      D: P, Q;
      expansion P = { pt: iP } into RP;
      expansion Q = { pt: iQ } into RQ
    }
  """)
  assert ws.only_pair() is ws.pair("D")


def test_stage_bundles_keep_names():
  ws = parse_workspace(ISO_CAT + """
    poset J { elements: lo, hi; le: lo<=hi }
    poset PT { elements: pt }
    system X over J in C { object lo = P; object hi = Q; bond lo<=hi = t }
    system RQ over PT in C { object pt = Q }
    pair SH (C, D) {
      D: P, Q;
      expansion P = { lo: iP, hi: s } into X;
      expansion Q = { pt: iQ } into RQ
    }
    jmorphism h : X -> RQ over PT { index: pt -> hi; family pt = const(iQ) }
    stages H for P into Q in SH { pt: h }
  """)
  b = ws.bundle("H")
  assert (b.pair_name, b.source, b.target) == ("SH", "P", "Q")
  assert b.entries == {"pt": "h"}


def test_comments_and_item_separators():
  # comments run to the end of the line; system items take , or ;
  ws = parse_workspace(ISO_CAT + """
    poset J { elements: lo, hi; le: lo<=hi }   # trailing comment
    system X over J in C { object lo = P, object hi = Q, bond lo<=hi = t }
  """)
  assert ws.system("X").bond("lo", "hi").value == "t"


# -- refusals, each with a position --


def err(text):
  with pytest.raises(WorkspaceError) as ei:
    parse_workspace(text)
  return ei.value


def test_unexpected_character_reports_line_and_column():
  e = err("poset P { elements: a ? }")
  assert e.line == 1 and e.col == 23
  assert "unexpected character" in str(e)


def test_unknown_declaration_kind():
  e = err("wibble X {}")
  assert "unknown declaration kind" in str(e) and e.line == 1


def test_duplicate_declaration():
  e = err("poset P { elements: a }\nposet P { elements: b }")
  assert "duplicate declaration" in str(e) and e.line == 2


def test_unresolved_references():
  assert "unknown poset" in str(err("system X over J in C {}"))
  assert "unknown category" in str(
      err("poset J { elements: a }\nsystem X over J in C {}"))
  assert "unknown system" in str(err(
      ISO_CAT + "poset E { elements: 0 }\n"
      "jmorphism f : NO -> NO over E { index: 0 -> 0 }"))


def test_morphism_endpoint_mismatch():
  e = err(ISO_CAT + """
    poset J { elements: lo, hi; le: lo<=hi }
    system X over J in C { object lo = P; object hi = Q; bond lo<=hi = s }
  """)
  assert "expected 'Q' -> 'P'" in str(e)


def test_missing_stage_object():
  e = err(ISO_CAT + """
    poset J { elements: lo, hi; le: lo<=hi }
    system X over J in C { object lo = P }
  """)
  assert "no object at stage 'hi'" in str(e)


def test_category_law_violation_is_refused():
  e = err("""
    category B { objects: x;
                 morphisms: e: x->x, s: x->x;
                 identity: x = e;
                 compose: s.s = s, s.e = e }
  """)
  # s.e = e contradicts the identity law
  assert "invalid category" in str(e) or "law violation" in str(e)


def test_named_morphisms_refused_in_cycgrp():
  e = err("""
    category cyc = cycgrp
    poset PT { elements: pt }
    system S over PT in cyc { object pt = 5; bond pt<=pt = two }
  """)
  assert "residues" in str(e)


def test_residues_refused_in_table_categories():
  e = err(ISO_CAT + """
    poset PT { elements: pt }
    system S over PT in C { object pt = P; bond pt<=pt = 3 }
  """)
  assert "named" in str(e)


def test_uniform_tower_needs_omega():
  e = err(ISO_CAT + """
    poset PT { elements: pt }
    system S over PT in C { object = P; step = iP }
  """)
  assert "indexed by omega" in str(e)


def test_stagewise_system_needs_a_finite_poset():
  e = err(ISO_CAT + """
    system S over omega in C { object 0 = P }
  """)
  assert "finite index" in str(e)


def test_cells_need_a_cycle():
  e = err("""
    category cyc = cycgrp
    system T over omega in cyc { object = 4; step = 2 }
    jmorphism t : T -> T over omega {
      index: affine (1,0);
      cells transient = [ const(1) ]
    }
  """)
  assert "nonempty cycle" in str(e)


def test_invalid_jmorphism_family_endpoints():
  e = err(ISO_CAT + """
    poset J { elements: lo, hi; le: lo<=hi }
    poset E { elements: 0 }
    system X over J in C { object lo = P; object hi = Q; bond lo<=hi = t }
    jmorphism f : X -> X over E {
      index: lo -> hi, hi -> hi;
      family lo = const(iQ);
      family hi = const(iQ)
    }
  """)
  assert "expected 'Q' -> 'P'" in str(e)


def test_designated_record_must_pass_the_expansion_check():
  # two parallel maps into P are equalized by p but never merge
  e = err(TWO_POINT + """
    poset PT { elements: pt }
    system RP over PT in TP { object pt = P }
    pair BAD (TP, D) {
      D: P;
      expansion X = { pt: p } into RP;
      expansion P = { pt: idP } into RP
    }
  """)
  assert "is not an expansion" in str(e)


def test_alternate_with_broken_cone_is_refused():
  e = err(TWO_POINT + """
    poset J { elements: lo, hi; le: lo<=hi }
    poset PT { elements: pt }
    system X2 over J in TP { object lo = P; object hi = P; bond lo<=hi = u }
    system RP over PT in TP { object pt = P }
    system RX over PT in TP { object pt = X }
    pair ALT (TP, D) {
      D: P, X;
      expansion P = { pt: idP } into RP;
      expansion X = { pt: idX } into RX;
      expansion P = { lo: v, hi: idP } into X2
    }
  """)
  assert "cone" in str(e)


def test_only_pair_requires_exactly_one():
  ws = parse_workspace("poset J { elements: a }")
  with pytest.raises(WorkspaceError, match="declares 0"):
    ws.only_pair()


def test_rule_families_need_the_cyclic_backend():
  e = err(ISO_CAT + """
    poset PT { elements: pt }
    system S over PT in C { object pt = P }
    jmorphism f : S -> S over omega {
      index: pt -> pt;
      family pt = rule(1)
    }
  """)
  assert "cyclic-group backend" in str(e)


# -- the shipped fixture files --


def test_shipped_category_fixtures_load():
  arrow = load_workspace(FIXTURES / "arrow.cat").category("Arrow")
  assert arrow.compose(arrow.mor("idB"), arrow.mor("u")).value == "u"
  z2 = load_workspace(FIXTURES / "z2.cat").category("Z2")
  assert z2.compose(z2.mor("s"), z2.mor("s")).value == "e"
  assert load_workspace(FIXTURES / "cyc.cat").category("cyc") is CYCGRP


def test_demo_workspace_declares_one_of_everything():
  ws = load_workspace(FIXTURES / "demo.ws")
  d = ws.describe()
  for key in ("posets", "categories", "systems", "indexmaps", "jmorphisms",
              "pairs", "stage_bundles"):
    assert d[key], key
  assert ws.only_pair().d_objects == ("P", "Q")


def test_missing_file_is_a_workspace_error():
  with pytest.raises(WorkspaceError, match="cannot read"):
    load_workspace(FIXTURES / "absent.ws")
