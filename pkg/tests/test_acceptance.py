"""End-to-end acceptance suite.

One test per shipped guarantee, in order, so a verbose run reads as a
checklist. Budgeted tests assert their own wall-clock limits. The
propositional sweep (criterion 7) re-walks every formula exercised by
criteria 2 and 3 and compares quantifier expansion against direct model
checking, skipping only formulas whose expansion budget estimate or step
budget is blown (the skip counters are themselves asserted against
coverage floors so the sweep cannot silently degrade).
"""

import json
import time
from itertools import combinations

import pytest

import oracles
from conftest import DATA, load_json
import dglogic.characterise as ch
from dglogic import (BoundExceeded, EquivDungModel, ExtensionSpec, Model,
                     ModelChecker, enumerate_extensions, eval_prop,
                     expansion_bound, graph_from_dict, ground,
                     grounded_via_lfp, induced_valuation,
                     interpretation_from_dict, match_tuples, parse_formula,
                     random_model, satisfies_closed, vars_of)

BASE_FAMILIES = ("CF", "CL", "WCF", "DF", "WDF")
ITEM_FAMILIES = ("D-CMP", "W-D-CMP", "E-CMP",
                 "D-PRF", "W-D-PRF", "E-PRF",
                 "D-GRD", "W-D-GRD", "E-GRD",
                 "D-STB", "W-D-STB", "E-STB")

CRIT2_SEEDS = range(0, 50)      # <= 5 nodes
CRIT3_SEEDS = range(100, 125)   # <= 4 nodes
CRIT4_SEEDS = range(200, 300)   # <= 6 nodes
CRIT5_SEEDS = range(300, 350)   # <= 5 nodes
CRIT6_SEEDS = range(400, 500)   # <= 6 nodes
CRIT8_SEEDS = range(500, 510)   # <= 4 nodes
CRIT10_SEEDS = range(600, 650)  # <= 6 nodes, one id per node

EST_BUDGET = 5_000_000   # expansion-size estimate above which we skip
OPS_BUDGET = 1_000_000   # hard step budget inside ground()


def enum(m, text):
    return [sorted(s) for s in enumerate_extensions(m, ExtensionSpec.parse(text))]


# --------------------------------------------------------------------------
# criterion 1: the twelve recorded extension families of the two worked
# models, exact equality, under one second.
#
# Known divergence: the recorded golden wide defence-complete family of the
# second model additionally lists {u4}. That set wide-defends u1 without
# containing it, so under the closure-by-defence definition used everywhere
# else (and by the characterisation formulas, which agree with the
# enumerator on this model) it is not complete. The assertion below states
# the recorded lists verbatim and is expected to fail on exactly that one
# entry; see README.md, "Known discrepancies".

GOLDEN = {
    "attack_chain": {
        "simple:defence:complete": [["u1", "u3", "u4"]],
        "wide:defence:complete": [["u1", "u4"]],
        "simple:equivalence:complete": [[], ["u1"], ["u4"], ["u1", "u4"]],
        "wide:equivalence:complete": [[], ["u1"], ["u4"], ["u1", "u4"]],
        "simple:both:complete": [],
        "wide:both:complete": [["u1", "u4"]],
    },
    "attack_cycle": {
        "simple:defence:complete": [["u1", "u3"], ["u1", "u3", "u5"],
                                    ["u1", "u3", "u4", "u6"]],
        "wide:defence:complete": [[], ["u4"], ["u5"],
                                  ["u1", "u3", "u4", "u6"]],
        "simple:equivalence:complete": [[], ["u5"], ["u1", "u4"],
                                        ["u1", "u3", "u4", "u6"]],
        "wide:equivalence:complete": [[], ["u5"], ["u1", "u4"],
                                      ["u1", "u3", "u4", "u6"]],
        "simple:both:complete": [["u1", "u3", "u4", "u6"]],
        "wide:both:complete": [[], ["u5"], ["u1", "u3", "u4", "u6"]],
    },
}


def test_criterion_01_worked_model_golden_lists(chain_model, cycle_model):
    models = {"attack_chain": chain_model, "attack_cycle": cycle_model}
    started = time.perf_counter()
    diffs = []
    for name, families in sorted(GOLDEN.items()):
        for spec, want in sorted(families.items()):
            got = enum(models[name], spec)
            if got != want:
                diffs.append(f"{name} {spec}: expected {want}, got {got}")
    elapsed = time.perf_counter() - started
    print(f"criterion 1: 12 family lists, {len(diffs)} divergent, "
          f"{elapsed:.2f}s")
    assert elapsed < 1.0
    assert not diffs, "; ".join(diffs)


# --------------------------------------------------------------------------
# criterion 2: conflict-freeness, closure, and defence formulas agree with
# their direct definitions on every subset of 50 seeded models, under two
# minutes.


def test_criterion_02_base_families_on_random_models():
    started = time.perf_counter()
    checks = 0
    mismatches = []
    for seed in CRIT2_SEEDS:
        m = random_model(seed, max_nodes=5)
        for family in BASE_FAMILIES:
            rep = ch.cross_validate(m, family)
            checks += rep.checks
            mismatches.extend({"seed": seed, **miss}
                              for miss in rep.mismatches)
    elapsed = time.perf_counter() - started
    print(f"criterion 2: {checks} checks over {len(CRIT2_SEEDS)} models, "
          f"{len(mismatches)} mismatches, {elapsed:.1f}s")
    assert not mismatches, mismatches[:3]
    assert elapsed < 120.0


# --------------------------------------------------------------------------
# criterion 3: all twelve extension-characterisation items on the two
# worked models plus 25 random models, under five minutes.


def test_criterion_03_extension_items(chain_model, cycle_model):
    started = time.perf_counter()
    models = [chain_model, cycle_model]
    models += [random_model(seed, max_nodes=4) for seed in CRIT3_SEEDS]
    checks = 0
    mismatches = []
    for i, m in enumerate(models):
        for family in ITEM_FAMILIES:
            rep = ch.cross_validate(m, family)
            checks += rep.checks
            mismatches.extend({"model": i, **miss}
                              for miss in rep.mismatches)
    elapsed = time.perf_counter() - started
    print(f"criterion 3: {checks} checks over {len(models)} models, "
          f"{len(mismatches)} mismatches, {elapsed:.1f}s")
    assert not mismatches, mismatches[:3]
    assert elapsed < 300.0


# --------------------------------------------------------------------------
# criterion 4: with closure by equivalence, the simple and wide readings
# pick out the same extensions.


def test_criterion_04_equivalence_closure_collapse():
    violations = []
    for seed in CRIT4_SEEDS:
        m = random_model(seed, max_nodes=6)
        for mu in ("complete", "preferred", "grounded", "stable"):
            simple = enum(m, f"simple:equivalence:{mu}")
            wide = enum(m, f"wide:equivalence:{mu}")
            if simple != wide:
                violations.append((seed, mu, simple, wide))
    print(f"criterion 4: {len(CRIT4_SEEDS)} models x 4 semantics, "
          f"{len(violations)} violations")
    assert not violations, violations[:2]


# --------------------------------------------------------------------------
# criterion 5: the fixpoint route to wide defence-grounded extensions
# returns exactly the minimal wide defence-complete sets.


def test_criterion_05_lfp_equals_minimal_complete():
    violations = []
    for seed in CRIT5_SEEDS:
        m = random_model(seed, max_nodes=5)
        complete = enumerate_extensions(
            m, ExtensionSpec.parse("wide:defence:complete"))
        minimal = sorted(
            (sorted(s) for s in complete
             if not any(t < s for t in complete)),
            key=lambda s: (len(s), s))
        via_lfp = [sorted(s) for s in grounded_via_lfp(m)]
        if minimal != via_lfp:
            violations.append((seed, minimal, via_lfp))
    print(f"criterion 5: {len(CRIT5_SEEDS)} models, "
          f"{len(violations)} violations")
    assert not violations, violations[:2]


# --------------------------------------------------------------------------
# criterion 6: guaranteed existence. Every defence- or equivalence-closed
# family and every wide both-closures family is nonempty for complete,
# preferred, and grounded semantics; the simple both-closures family can be
# empty, and the seed sweep must actually exhibit that.


def test_criterion_06_existence():
    required = [f"{sigma}:{tau}:" for sigma in ("simple", "wide")
                for tau in ("defence", "equivalence")] + ["wide:both:"]
    empty_families = []
    simple_both_empty_seeds = []
    for seed in CRIT6_SEEDS:
        m = random_model(seed, max_nodes=6)
        for mu in ("complete", "preferred", "grounded"):
            for prefix in required:
                if not enum(m, prefix + mu):
                    empty_families.append((seed, prefix + mu))
        if not enum(m, "simple:both:complete"):
            simple_both_empty_seeds.append(seed)
    print(f"criterion 6: {len(CRIT6_SEEDS)} models, "
          f"{len(empty_families)} required families empty, "
          f"{len(simple_both_empty_seeds)} models with no simple extension "
          f"(earliest seed "
          f"{simple_both_empty_seeds[0] if simple_both_empty_seeds else '-'})")
    assert not empty_families, empty_families[:3]
    assert simple_both_empty_seeds


# --------------------------------------------------------------------------
# criterion 7: propositional grounding agrees with direct model checking on
# every formula from criteria 2 and 3. Formulas whose expansion estimate
# exceeds EST_BUDGET, or whose expansion aborts at OPS_BUDGET steps, are
# skipped and counted; the checked totals are asserted against floors so
# coverage cannot quietly collapse.


def _sweep(model_family_pairs):
    checked = skipped_estimate = skipped_steps = 0
    mismatches = []
    for m, family in model_family_pairs:
        model = m.model
        domain_size = len(model.domain)
        for params, formula, constants, _ in ch._family_checks(m, family, None):
            env = ch.std_environment(formula, constants)
            if expansion_bound(formula, domain_size) > EST_BUDGET:
                skipped_estimate += 1
                continue
            try:
                p = ground(formula, model, env, max_ops=OPS_BUDGET)
            except BoundExceeded:
                skipped_steps += 1
                continue
            direct = ModelChecker(model, env).satisfies(formula)
            expanded = eval_prop(p, induced_valuation(model, env, vars_of(p)))
            checked += 1
            if expanded != direct:
                mismatches.append({"family": family, "params": params,
                                   "direct": direct, "expanded": expanded})
    return checked, skipped_estimate, skipped_steps, mismatches


def test_criterion_07_grounding_agrees_with_model_checking(chain_model,
                                                           cycle_model):
    base_pairs = [(random_model(seed, max_nodes=5), family)
                   for seed in CRIT2_SEEDS for family in BASE_FAMILIES]
    item_models = [chain_model, cycle_model]
    item_models += [random_model(seed, max_nodes=4) for seed in CRIT3_SEEDS]
    item_pairs = [(m, family) for m in item_models
                  for family in ITEM_FAMILIES]

    base = _sweep(base_pairs)
    items = _sweep(item_pairs)
    print(f"criterion 7: base formulas checked={base[0]} "
          f"skipped(est/steps)={base[1]}/{base[2]}; "
          f"item formulas checked={items[0]} "
          f"skipped(est/steps)={items[1]}/{items[2]}; "
          f"mismatches={len(base[3]) + len(items[3])}")
    assert not base[3], base[3][:3]
    assert not items[3], items[3][:3]
    assert base[0] >= 8000
    assert items[0] >= 1500


# --------------------------------------------------------------------------
# criterion 8: the listing formula is true exactly when the block list
# equals the enumerated wide defence-complete family.


def test_criterion_08_listing_formula(chain_model, cycle_model):
    models = [chain_model, cycle_model]
    models += [random_model(seed, max_nodes=4) for seed in CRIT8_SEEDS]
    checks = 0
    mismatches = []
    for i, m in enumerate(models):
        for params, formula, constants, expected in ch._family_checks(
                m, "CMPS", None):
            env = ch.std_environment(formula, constants)
            got = ModelChecker(m.model, env).satisfies(formula)
            checks += 1
            if got != expected:
                mismatches.append((i, params, expected, got))
    print(f"criterion 8: {checks} block-list checks over {len(models)} "
          f"models, {len(mismatches)} mismatches")
    assert not mismatches, mismatches[:3]


# --------------------------------------------------------------------------
# criterion 9: the six-role argument-structure pattern matches the worked
# text graph with a witness, and removing any single role annotation makes
# the query false.


def test_criterion_09_pattern_detection(toulmin_graph, toulmin_skeleton):
    env = interpretation_from_dict(load_json("toulmin_env.json"))
    query = parse_formula((DATA / "toulmin_query.txt").read_text())

    assert satisfies_closed(Model(toulmin_graph), env, query) is True
    witnesses = match_tuples(toulmin_skeleton, toulmin_graph)
    assert witnesses == [tuple(f"txt_{i}" for i in range(1, 7))]

    doc = load_json("toulmin.json")
    anno_flips = 0
    for i, node in enumerate(doc["nodes"]):
        assert len(node["anno"]) == 1
        stripped = json.loads(json.dumps(doc))
        stripped["nodes"][i]["anno"] = []
        weakened = Model(graph_from_dict(stripped))
        if satisfies_closed(weakened, env, query) is False:
            anno_flips += 1
    edge_flips = 0
    for i in range(len(doc["edges"])):
        stripped = json.loads(json.dumps(doc))
        del stripped["edges"][i]
        weakened = Model(graph_from_dict(stripped))
        if satisfies_closed(weakened, env, query) is False:
            edge_flips += 1
    print(f"criterion 9: witness {list(witnesses[0])}, "
          f"{anno_flips}/{len(doc['nodes'])} annotation deletions and "
          f"{edge_flips}/{len(doc['edges'])} edge deletions flip the verdict")
    assert anno_flips == len(doc["nodes"]) == 6
    assert edge_flips == len(doc["edges"]) == 6


# --------------------------------------------------------------------------
# criterion 10: with one id per node the simple defence semantics reduce to
# the textbook argumentation-framework semantics, checked against an
# independent implementation.


def test_criterion_10_dung_degeneration():
    mismatches = []
    for seed in CRIT10_SEEDS:
        m = random_model(seed, max_nodes=6, distinct_ids=True)
        args = frozenset(m.graph.node_set)
        attacks = frozenset(m.graph.edge_set)
        expect = {
            "complete": [sorted(s) for s in oracles.af_complete(args, attacks)],
            "preferred": [sorted(s) for s in oracles.af_preferred(args, attacks)],
            "grounded": [sorted(oracles.af_grounded(args, attacks))],
            "stable": [sorted(s) for s in oracles.af_stable(args, attacks)],
        }
        for mu, want in expect.items():
            got = enum(m, f"simple:defence:{mu}")
            if got != want:
                mismatches.append((seed, mu, want, got))
    print(f"criterion 10: {len(CRIT10_SEEDS)} models x 4 semantics, "
          f"{len(mismatches)} mismatches")
    assert not mismatches, mismatches[:2]
