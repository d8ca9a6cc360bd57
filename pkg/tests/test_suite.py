import json

import pytest

from monocat import (
    FunctorSpec,
    Mat,
    Mode,
    RuleId,
    SearchCaps,
    Slice,
    Term,
    canonical,
    eps,
    equal,
    eta,
    eval_term,
    gen_count,
    gen_term,
    identity,
    rule_instance,
)
from monocat.suite import (
    SuiteConfig,
    check_closedness,
    check_not_rigid_evidence,
    check_r_category,
    check_rule_soundness,
    check_skeletal_and_obstructions,
    run_all,
    snake_term,
    transpose,
    untranspose,
)

FAST_CFG = SuiteConfig(
    caps=SearchCaps(4, 6, 1, 3000),
    hom_caps=SearchCaps(2, 6, 1, 1500),
    hom_merge_caps=SearchCaps(5, 8, 1, 2000),
    control_caps=SearchCaps(4, 6, 1, 2000),
    obstruction_samples=15,
    nonsquare_samples=6,
)


class TestSnakeTerm:
    def test_shape(self):
        s = snake_term()
        assert s == Term(1, (Slice(0, eta(0, 1), 1), Slice(1, eps(0, 1), 0)))
        # generator counts 2 and 0 share parity, so the count invariant
        # alone cannot separate the zig-zag from the identity wire
        assert gen_count(s) == 2
        assert gen_count(identity(1)) == 0
        assert gen_count(s) % 2 == gen_count(identity(1)) % 2

    def test_matrix_image_is_identity(self):
        assert eval_term(FunctorSpec.identity(2), snake_term()) == Mat.identity(2)

    def test_differs_from_triangle_composite(self):
        lhs, _ = rule_instance(RuleId.TRIANGLE_A, i=0, n=1)
        assert snake_term().slices != lhs.slices
        assert snake_term().slices[1] == Slice(1, eps(0, 1), 0)
        assert lhs.slices[1] == Slice(0, eps(1, 1), 0)


class TestTranspose:
    def test_deletion_transposes_to_identity(self):
        t = transpose(gen_term(eps(0, 1)), 1)
        w = equal(t, identity(1), Mode.C, FAST_CFG.caps)
        assert w is not None and len(w) == 1
        assert w.steps[0].rule is RuleId.TRIANGLE_B

    def test_insertion_untransposes_to_identity(self):
        t = untranspose(gen_term(eta(0, 1)), 1)
        w = equal(t, identity(1), Mode.C, FAST_CFG.caps)
        assert w is not None and len(w) == 1
        assert w.steps[0].rule is RuleId.TRIANGLE_A

    @pytest.mark.parametrize("y", [1, 2])
    @pytest.mark.parametrize("x", [1, 2])
    def test_identity_roundtrip(self, y, x):
        rt = untranspose(transpose(identity(y + x), x), x)
        w = equal(rt, identity(y + x), Mode.C, SearchCaps(4, 10, 2, 3000))
        assert w is not None and len(w) <= 2

    def test_width_validation(self):
        with pytest.raises(ValueError):
            transpose(identity(1), 2)
        with pytest.raises(ValueError):
            untranspose(identity(1), 2)


class TestChecks:
    def test_closedness_passes(self):
        res = check_closedness(FAST_CFG)
        assert res.status == "pass"
        assert res.details["max_path_len"] == 1
        assert res.path == ["TriangleA"]

    def test_not_rigid_evidence(self):
        res = check_not_rigid_evidence(FAST_CFG)
        assert res.status == "evidence"
        assert res.details["identity_found"] is False
        assert res.details["control_identity_found"] is True
        assert res.states_visited > 1

    def test_rule_soundness_passes(self):
        cfg = SuiteConfig(dims=(1, 2), phi_seeds=(1,))
        table = [
            (rule, (i, 0, 1, 0, n), *rule_instance(rule, i=i, n=n))
            for rule in (RuleId.TRIANGLE_A, RuleId.TRIANGLE_B)
            for i in (0, 1)
            for n in (1, 2)
        ]
        table = [(r, p, lhs, rhs) for r, p, lhs, rhs in table]
        res = check_rule_soundness(cfg, table)
        assert res.status == "pass"

    def test_corrupted_rule_table_fails(self):
        lhs, _ = rule_instance(RuleId.TRIANGLE_A, i=1, n=1)
        bad_rhs = canonical(
            Term(2, (Slice(1, eta(1, 1), 0), Slice(0, eps(2, 1), 0)))
        )
        res = check_rule_soundness(FAST_CFG, [(RuleId.TRIANGLE_A, (1, 1), lhs, bad_rhs)])
        assert res.status == "fail"
        assert res.details["violations"]

    def test_obstructions_pass(self):
        res = check_skeletal_and_obstructions(FAST_CFG)
        assert res.status == "pass"
        assert res.details["rank_eps01"] == 1

    def test_obstructions_skipped_at_dimension_one(self):
        cfg = SuiteConfig(dims=(1,), obstruction_samples=5, nonsquare_samples=2)
        res = check_skeletal_and_obstructions(cfg)
        assert res.status == "pass"
        assert "skipped" in res.details

    def test_r_category_passes(self):
        res = check_r_category(FAST_CFG)
        assert res.status == "pass"
        by_y = {d["y"]: d for d in res.details["per_y"]}
        assert by_y[0]["source_classes"] == by_y[0]["target_classes"] == 0
        assert by_y[2]["source_classes"] == by_y[2]["target_classes"] == 0
        assert by_y[1]["source_classes"] >= 1
        assert by_y[1]["target_classes"] >= 2


class TestRunAll:
    def test_all_green_and_json_stable(self):
        r1 = run_all(FAST_CFG)
        r2 = run_all(FAST_CFG)
        assert not r1.failed
        assert {c.name for c in r1.checks} == {
            "rule_soundness",
            "closedness",
            "not_rigid_evidence",
            "skeletal_obstructions",
            "r_category",
            "automorphism_evidence",
        }
        assert r1.to_json(zero_timings=True) == r2.to_json(zero_timings=True)

    def test_failure_propagates(self):
        lhs, _ = rule_instance(RuleId.TRIANGLE_A, i=1, n=1)
        bad_rhs = canonical(
            Term(2, (Slice(1, eta(1, 1), 0), Slice(0, eps(2, 1), 0)))
        )
        report = run_all(FAST_CFG, rule_table=[(RuleId.TRIANGLE_A, (1, 1), lhs, bad_rhs)])
        assert report.failed

    def test_json_schema(self):
        report = run_all(FAST_CFG)
        data = json.loads(report.to_json())
        assert set(data) == {"config", "checks"}
        for entry in data["checks"]:
            assert {"name", "status", "details", "elapsed_s"} <= set(entry)
            assert entry["status"] in {"pass", "fail", "evidence"}
        rigid = next(e for e in data["checks"] if e["name"] == "not_rigid_evidence")
        assert "states_visited" in rigid


class TestSuiteConfig:
    def test_dict_roundtrip(self):
        cfg = FAST_CFG
        again = SuiteConfig.from_dict(cfg.to_dict())
        assert again == cfg

    def test_prime_field_config(self):
        cfg = SuiteConfig.from_dict({"field": "p:97"})
        assert cfg.field.p == 97
        assert cfg.to_dict()["field"] == "p:97"

    def test_bad_dims_rejected(self):
        with pytest.raises(ValueError):
            SuiteConfig(dims=(4,))
