from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import dglogic.characterise as ch
from dglogic import (BOTTOM, TOP, ArityMismatch, BoundExceeded, Model,
                     UnknownSymbol, format_formula, free_vars,
                     is_well_formed, random_model, satisfies_closed)


def check(m, f, binding):
    env = ch.std_environment(f, binding)
    return satisfies_closed(Model(m.graph), env, f)


# --------------------------------------------------------------------------
# degenerate-parameter cases


def test_degenerate_formulas():
    assert ch.f_k_cf(0, ()) == TOP
    assert ch.f_kl_cl(0, 0, ()) == TOP
    assert ch.f_kl_cl(0, 2, ("c1", "c2")) == BOTTOM
    assert ch.f_kn_wcf(0, 5, ()) == TOP
    assert ch.f_distinct(0, 0, ()) == BOTTOM
    assert format_formula(ch.f_distinct(0, 2, ("c1", "c2"))) == "p_D(c1, c2)"


def test_const_names():
    assert ch.const_names(3) == ["c1", "c2", "c3"]
    assert ch.const_names(2, prefix="t") == ["t1", "t2"]
    assert ch.const_names(0) == []


# --------------------------------------------------------------------------
# pinned model checks on the two worked models


def test_cf_pins(chain_model):
    f = ch.f_k_cf(2, ("c1", "c2"))
    assert check(chain_model, f, {"c1": "u1", "c2": "u4"})
    assert not check(chain_model, f, {"c1": "u2", "c2": "u3"})


def test_cl_pins(chain_model):
    f = ch.f_kl_cl(1, 2, ("c1", "c2"))
    assert check(chain_model, f, {"c1": "u3", "c2": "u5"})
    assert not check(chain_model, f, {"c1": "u3", "c2": "u4"})


def test_wcf_pins(chain_model):
    f = ch.f_kn_wcf(2, 5, ("c1", "c2"))
    assert not check(chain_model, f, {"c1": "u3", "c2": "u4"})
    assert check(chain_model, f, {"c1": "u1", "c2": "u4"})


def test_df_pins(chain_model):
    f = ch.f_k_df(1, "c0", ("c1",))
    assert check(chain_model, f, {"c0": "u3", "c1": "u1"})
    assert not check(chain_model, f, {"c0": "u5", "c1": "u1"})
    unattacked = ch.f_k_df(0, "c0", ())
    assert check(chain_model, unattacked, {"c0": "u1"})
    assert not check(chain_model, unattacked, {"c0": "u2"})


def test_wdf_pins(chain_model, cycle_model):
    f = ch.f_kn_wdf(1, 5, "c0", ("c1",))
    assert not check(chain_model, f, {"c0": "u3", "c1": "u1"})
    assert check(chain_model, ch.f_kn_wdf(0, 5, "c0", ()), {"c0": "u1"})
    f = ch.f_kn_wdf(1, 6, "c0", ("c1",))
    assert check(cycle_model, f, {"c0": "u1", "c1": "u4"})


def test_adm_pins(chain_model):
    simple = ch.f_adm("simple", 2, None, ("c1", "c2"))
    wide = ch.f_adm("wide", 2, 5, ("c1", "c2"))
    binding = {"c1": "u1", "c2": "u3"}
    assert check(chain_model, simple, binding)
    assert not check(chain_model, wide, binding)


def test_cmp_pins(chain_model, cycle_model):
    f = ch.f_cmp("D-CMP", 3, 5, ("c1", "c2", "c3"))
    assert check(chain_model, f, {"c1": "u1", "c2": "u3", "c3": "u4"})
    f = ch.f_cmp("W-D-CMP", 2, 5, ("c1", "c2"))
    assert check(chain_model, f, {"c1": "u1", "c2": "u4"})
    f = ch.f_cmp("E-CMP", 1, 6, ("c1",))
    assert check(cycle_model, f, {"c1": "u5"})


def test_extension_item_pins(chain_model, cycle_model):
    preferred = ch.f_extension(5, 2, 5, ("c1", "c2"))
    assert check(chain_model, preferred, {"c1": "u1", "c2": "u4"})
    grounded = ch.f_extension(8, 0, 6, ())
    assert check(cycle_model, grounded, {})
    stable = ch.f_extension(10, 3, 5, ("c1", "c2", "c3"))
    assert check(chain_model, stable, {"c1": "u1", "c2": "u3", "c3": "u4"})


def test_distinct_pins(chain_model):
    f = ch.f_distinct(1, 1, ("c1", "c2"))
    assert check(chain_model, f, {"c1": "u1", "c2": "u4"})
    assert not check(chain_model, f, {"c1": "u1", "c2": "u1"})


def test_cmps_pins(chain_model, cycle_model):
    sole = ch.f_cmps([2], 5, ("c1", "c2"))
    assert check(chain_model, sole, {"c1": "u1", "c2": "u4"})
    extra = ch.f_cmps([2, 1], 5, ("c1", "c2", "c3"))
    assert not check(chain_model, extra,
                     {"c1": "u1", "c2": "u4", "c3": "u1"})
    blocks = ch.f_cmps([0, 1, 4], 6, tuple(f"c{i}" for i in range(1, 6)))
    assert check(cycle_model, blocks,
                 {"c1": "u5", "c2": "u1", "c3": "u3", "c4": "u4",
                  "c5": "u6"})


# --------------------------------------------------------------------------
# parameter validation


def test_arity_errors():
    with pytest.raises(ArityMismatch):
        ch.f_k_cf(2, ("c1",))
    with pytest.raises(ArityMismatch):
        ch.f_kn_wcf(3, 2, ("c1", "c2", "c3"))
    with pytest.raises(ArityMismatch):
        ch.f_adm("wide", 1, None, ("c1",))
    with pytest.raises(ArityMismatch):
        ch.f_adm("loose", 1, 3, ("c1",))
    with pytest.raises(ArityMismatch):
        ch.f_cmp("X-CMP", 1, 3, ("c1",))
    with pytest.raises(ArityMismatch):
        ch.f_extension(3, 1, 3, ("c1",))
    with pytest.raises(ArityMismatch):
        ch.f_cmps([1, -1], 3, ("c1",))


def test_size_guardrail():
    with pytest.raises(BoundExceeded):
        ch.f_kn_wcf(1, ch.MAX_GENERATION_SIZE + 1, ("c1",))
    f = ch.f_kn_wcf(1, ch.MAX_GENERATION_SIZE + 1, ("c1",),
                    allow_large=True)
    assert is_well_formed(f)


# --------------------------------------------------------------------------
# std environment shape


def test_std_environment_bindings(chain_model):
    f = ch.f_k_cf(2, ("c1", "c2"))
    env = ch.std_environment(f, {"c1": "u1", "c2": "u4"})
    d = {(name, arity) for (name, arity) in env.predicates}
    assert ("p_A", 2) in d
    assert ("p_D", 2) in d
    consts = {name for (name, arity) in env.functions if arity == 0}
    assert consts == {"c1", "c2"}


def test_std_environment_rejects_missing_constant():
    f = ch.f_k_cf(1, ("c1",))
    with pytest.raises(UnknownSymbol):
        ch.std_environment(f, {"c9": "u1"})


# --------------------------------------------------------------------------
# generated formulas are closed and well-formed


@given(st.sampled_from(ch.FAMILIES), st.integers(0, 3), st.integers(3, 5))
@settings(max_examples=80, deadline=None)
def test_generated_formulas_are_closed(family, k, n):
    consts = ch.const_names(k)
    if family == "CL":
        f = ch.f_kl_cl(k, k, consts)
    elif family == "CF":
        f = ch.f_k_cf(k, consts)
    elif family == "WCF":
        f = ch.f_kn_wcf(k, n, consts)
    elif family == "DF":
        f = ch.f_k_df(k, "c0", consts)
    elif family == "WDF":
        f = ch.f_kn_wdf(k, n, "c0", consts)
    elif family == "ADM":
        f = ch.f_adm("simple", k, None, consts)
    elif family == "WADM":
        f = ch.f_adm("wide", k, n, consts)
    elif family in ch.CMP_VARIANTS:
        f = ch.f_cmp(family, k, n, consts)
    elif family in ("B-CMP", "W-B-CMP"):
        variant = "D-CMP" if family == "B-CMP" else "W-D-CMP"
        f = ch.f_cmp(variant, k, n, consts)
    elif family == "DISTINCT":
        f = ch.f_distinct(k, k, ch.const_names(2 * k))
    elif family == "CMPS":
        f = ch.f_cmps([k], n, consts)
    else:
        f = ch.f_extension(ch._FAMILY_ITEM[family], k, n, consts)
    assert is_well_formed(f)
    assert not free_vars(f)


# --------------------------------------------------------------------------
# schema sanity: the k = N wide form collapses to the simple form


def test_wcf_at_full_width_equals_cf(chain_model):
    nodes = sorted(chain_model.graph.node_set)
    for k in (1, 2):
        consts = ch.const_names(k)
        wide = ch.f_kn_wcf(k, k, consts)
        simple = ch.f_k_cf(k, consts)
        for combo in combinations(nodes, k):
            binding = dict(zip(consts, combo))
            assert (check(chain_model, wide, binding)
                    == check(chain_model, simple, binding))


# --------------------------------------------------------------------------
# the cross-validation harness


def test_cross_validate_worked_models(chain_model, cycle_model):
    r = ch.cross_validate(chain_model, "CF")
    assert r.ok and r.checks == 32 and r.mismatches == []
    assert r.family == "CF" and r.nodes == 5
    r = ch.cross_validate(cycle_model, "W-D-CMP")
    assert r.ok and r.checks == 64


def test_cross_validate_report_dict(chain_model):
    d = ch.cross_validate(chain_model, "CL").to_dict()
    assert sorted(d) == ["checks", "elapsed", "family", "mismatches",
                         "nodes", "ok"]
    assert d["ok"] is True


def test_cross_validate_rejects_unknown_family(chain_model):
    with pytest.raises(ArityMismatch):
        ch.cross_validate(chain_model, "XYZ")


def test_cross_validate_bound(chain_model):
    with pytest.raises(BoundExceeded):
        ch.cross_validate(chain_model, "CF", bound=3)


def test_cross_validate_mutation_is_caught(chain_model):
    r = ch.cross_validate(chain_model, "CF", mutate=True)
    assert not r.ok
    assert r.mismatches
    assert sorted(r.mismatches[0]) == ["expected", "family", "got", "params"]


def test_cross_validate_max_k_limits_checks(chain_model):
    r = ch.cross_validate(chain_model, "D-PRF", max_k=2)
    assert r.ok
    assert r.checks == 16


@pytest.mark.parametrize("family", ch.FAMILIES)
def test_cross_validate_all_families_on_chain(chain_model, family):
    kwargs = {"max_k": 2} if family in ("D-PRF", "W-D-PRF", "E-PRF",
                                        "D-GRD", "W-D-GRD", "E-GRD",
                                        "CMPS") else {}
    r = ch.cross_validate(chain_model, family, **kwargs)
    assert r.ok, r.mismatches[:3]


@given(st.integers(0, 100_000),
       st.sampled_from(["CF", "CL", "WCF", "DF", "WDF", "ADM", "WADM",
                        "D-CMP", "W-D-CMP", "E-CMP", "DISTINCT"]))
@settings(max_examples=40, deadline=None)
def test_cross_validate_random_models(seed, family):
    m = random_model(seed, max_nodes=4)
    r = ch.cross_validate(m, family)
    assert r.ok, r.mismatches[:3]
