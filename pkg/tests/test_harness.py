import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inertia_lab._json import dumps
from inertia_lab.errors import ConfigError, SamplingError
from inertia_lab.functions import (
    AdmissibleK,
    Affine,
    Constant,
    Homothety,
    Series,
    apply_entrywise,
)
from inertia_lab.harness import (
    TrialConfig,
    falsify,
    lemma_suite,
    sample_member_tuple,
    sample_with_inertia,
    verify_forward,
)
from inertia_lab.linalg import DomainSpec, TolerancePolicy, inertia, is_member

TOL = TolerancePolicy()


def _rng(seed=0):
    return np.random.Generator(np.random.Philox(key=[seed, 0]))


@pytest.mark.parametrize("kind", ["two_sided", "open_positive", "closed_left"])
@pytest.mark.parametrize("k", [0, 1, 3])
def test_sampler_hits_requested_inertia(kind, k):
    dom = DomainSpec(kind, 1.0)
    rng = _rng(17 * k + len(kind))
    n = k + 2
    for _ in range(10):
        m = sample_with_inertia(n, k, dom, rng, TOL)
        assert m.n == n
        assert inertia(m).n_neg == k
        assert is_member(m, k, dom, TOL, closure=False)


def test_sampler_unbounded_domain():
    m = sample_with_inertia(4, 2, DomainSpec("two_sided", float("inf")), _rng(5), TOL)
    assert inertia(m).n_neg == 2


def test_one_sided_square_case_is_impossible():
    # entries >= 0 force a nonnegative trace, so all-negative spectra are out
    with pytest.raises(SamplingError):
        sample_with_inertia(3, 3, DomainSpec("open_positive", 1.0), _rng(0), TOL)


def test_two_sided_allows_negative_definite():
    m = sample_with_inertia(3, 3, DomainSpec("two_sided", 1.0), _rng(1), TOL)
    assert inertia(m) == inertia(m).__class__(3, 0, 0)


def test_tuple_sampler_respects_each_slot():
    ks = AdmissibleK((0, 1, 2))
    dom = DomainSpec("two_sided", 1.0)
    mats = sample_member_tuple(ks, 4, dom, _rng(2), TOL)
    assert [inertia(m).n_neg for m in mats] == [0, 1, 2]


def test_tuple_sampler_closure_stays_at_or_below():
    ks = AdmissibleK((0, 3))
    dom = DomainSpec("closed_left", 2.0)
    rng = _rng(3)
    seen = set()
    for _ in range(20):
        mats = sample_member_tuple(ks, 5, dom, rng, TOL, closure=True)
        assert inertia(mats[0]).n_neg == 0
        j = inertia(mats[1]).n_neg
        assert 0 <= j <= 3
        seen.add(j)
    assert len(seen) > 1  # closure sampling actually varies the count


def test_trial_config_floor_and_defaults():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((2,)), 2)
    assert cfg.n_range == (3, 8)
    # one-sided with k >= 1 needs one extra dimension
    cfg2 = TrialConfig(DomainSpec("open_positive", 1.0), AdmissibleK((2,)), 2)
    assert cfg2.n_range == (4, 9)
    with pytest.raises(ConfigError):
        TrialConfig(DomainSpec("open_positive", 1.0), AdmissibleK((2,)), 2, n_range=(2, 5))


def test_trial_config_json_round_trip():
    cfg = TrialConfig(
        DomainSpec("closed_left", 3.0),
        AdmissibleK((0, 2)),
        2,
        n_range=(4, 7),
        trials=50,
        seed=11,
    )
    blob = cfg.to_json_dict()
    back = TrialConfig.from_json_dict(blob)
    assert back == cfg


def test_trial_config_rejects_unknown_keys():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1,)), 1)
    blob = cfg.to_json_dict()
    blob["extra"] = 1
    with pytest.raises(ConfigError):
        TrialConfig.from_json_dict(blob)


def test_trial_config_validates_ranges():
    dom = DomainSpec("two_sided", 1.0)
    with pytest.raises(ConfigError):
        TrialConfig(dom, AdmissibleK((1,)), -1)
    with pytest.raises(ConfigError):
        TrialConfig(dom, AdmissibleK((1,)), 1, trials=0)
    with pytest.raises(ConfigError):
        TrialConfig(dom, AdmissibleK((1,)), 1, seed=-1)


def test_verify_homothety_has_no_failures():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((2,)), 2, trials=40, seed=7)
    rep = verify_forward("exact", Homothety(2.0), cfg)
    assert rep.trials == 40
    assert rep.failures == 0
    assert list(rep.witnesses) == []
    assert rep.label.startswith("pass:")


def test_verify_inertia_claim_single_variable_only():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1, 1)), 1, trials=5)
    with pytest.raises(ConfigError):
        verify_forward("inertia", Series(2, {(1, 0): 1.0}), cfg)


def test_verify_is_vacuous_for_a_violating_function():
    # x^2 cannot satisfy an exact claim, so nothing should be sampled
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1,)), 1, trials=30, seed=0)
    rep = verify_forward("exact", Series(1, {(2,): 1.0}), cfg)
    assert rep.trials == 0
    assert "vacuous" in rep.label
    assert "nonlinear-term" in rep.label


def test_verify_lift_claim_on_identity():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1,)), 1, trials=20, seed=3)
    rep = verify_forward("lift", Homothety(1.0), cfg)
    assert rep.failures == 0


def test_falsify_finds_offset_witness_and_it_revalidates():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1,)), 1, trials=50, seed=1)
    rep = falsify("exact", Affine(1.0, 1.0), cfg)
    assert rep.failures >= 1
    w = rep.witnesses[0]
    assert w.clause == "nonzero-offset"
    assert w.revalidate("exact", cfg)
    got = inertia(apply_entrywise(Affine(1.0, 1.0), list(w.mats), cfg.dom))
    assert got.n_neg != 1


def test_falsify_conforming_function_is_vacuous():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((2,)), 2, trials=10, seed=0)
    rep = falsify("exact", Homothety(3.0), cfg)
    assert rep.failures == 0
    assert rep.trials == 0
    assert "conforms" in rep.label


def test_falsify_sum_of_variables_needs_two_negative_directions():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1, 1)), 1, trials=60, seed=4)
    rep = falsify("bounded", Series(2, {(1, 0): 1.0, (0, 1): 1.0}), cfg)
    assert rep.failures >= 1
    w = rep.witnesses[0]
    img = apply_entrywise(Series(2, {(1, 0): 1.0, (0, 1): 1.0}), list(w.mats), cfg.dom)
    assert inertia(img).n_neg >= 2


def test_falsify_random_strategy_skips_recipes():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((2,)), 2, trials=50, seed=9)
    rep = falsify("exact", Constant(-5.0), cfg, strategy="random")
    # a constant map always lands at exactly one negative eigenvalue, never two
    assert rep.failures >= 1
    assert inertia(apply_entrywise(Constant(-5.0), list(rep.witnesses[0].mats), cfg.dom)).n_neg == 1


def test_falsify_rejects_unknown_strategy():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1,)), 1)
    with pytest.raises(ConfigError):
        falsify("exact", Homothety(1.0), cfg, strategy="clever")


def test_witness_json_shape():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1,)), 1, trials=20, seed=2)
    rep = falsify("exact", Affine(0.5, 1.0), cfg)
    blob = rep.to_json_dict()
    assert blob["theorem"] == "exact"
    assert "runtime_ms" not in blob
    assert blob["config"]["fn"]["type"] == "affine"
    w = blob["witnesses"][0]
    assert set(w) == {"matrices", "fn", "observed", "clause"}


def test_report_bytes_identical_across_thread_counts():
    cfg = TrialConfig(DomainSpec("open_positive", 1.0), AdmissibleK((1,)), 1, trials=60, seed=21)
    fn = Homothety(2.0)
    a = dumps(verify_forward("exact", fn, cfg, threads=1).to_json_dict())
    b = dumps(verify_forward("exact", fn, cfg, threads=4).to_json_dict())
    assert a == b


def test_falsify_reports_are_deterministic():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1,)), 1, trials=40, seed=13)
    fn = Affine(0.25, 2.0)
    a = dumps(falsify("exact", fn, cfg, threads=1).to_json_dict())
    b = dumps(falsify("exact", fn, cfg, threads=3).to_json_dict())
    assert a == b


def test_lemma_suite_all_green():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1,)), 1, trials=25, seed=5)
    rep = lemma_suite(cfg)
    assert rep.claim == "lemma-suite"
    assert rep.mode == "suite"
    assert rep.failures == 0, rep.label
    assert rep.trials == 5 * 25
    assert rep.label.count("25/25 ok") == 5


def test_csv_row_has_runtime_column():
    cfg = TrialConfig(DomainSpec("two_sided", 1.0), AdmissibleK((1,)), 1, trials=10, seed=0)
    rep = verify_forward("exact", Homothety(1.0), cfg)
    row = rep.csv_row()
    assert set(row) == {"theorem", "mode", "trials", "failures", "witnesses", "label", "runtime_ms"}
    assert float(row["runtime_ms"]) >= 0.0


@settings(max_examples=25, deadline=None)
@given(
    st.integers(min_value=0, max_value=3),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_sampler_property_two_sided(k, seed):
    dom = DomainSpec("two_sided", 2.0)
    m = sample_with_inertia(k + 2, k, dom, _rng(seed), TOL)
    tri = inertia(m)
    assert tri.n_neg == k
    assert float(np.abs(m.entries).max()) < 2.0
