"""Evidence suite: orchestrated checks over the rewrite engine and the
matrix semantics.

Each check returns a machine-readable result:

* ``pass`` / ``fail``: a definite expected outcome held or did not;
* ``evidence``: a bounded-search conclusion (sound under its caps, not a
  proof of the unbounded statement).

Checks are independent and deterministic; reports merge by check name in
a fixed order, so the JSON output is stable (timings can be zeroed for
byte-identical runs).
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from . import vect
from .rewrite import (
    DEFAULT_CAPS,
    Direction,
    Mode,
    RuleId,
    SearchCaps,
    TRIANGLE_RULES,
    enum_hom_detailed,
    equal,
    explore,
    rule_instance,
    rule_instances,
)
from .terms import (
    Slice,
    Term,
    compose,
    eps,
    eta,
    gen_count,
    gen_term,
    identity,
    render,
    tensor,
)
from .vect import RATIONALS, FunctorSpec, PrimeField, RationalField


def snake_term() -> Term:
    """The zig-zag composite on one wire: insert on the left, delete on the
    right.  Its image under every matrix semantics is the identity, yet no
    bounded rewrite search reduces it to the identity wire."""
    return Term(1, (Slice(0, eta(0, 1), 1), Slice(1, eps(0, 1), 0)))


def transpose(f: Term, x: int) -> Term:
    """Adjunction transpose: turn f : y + x -> z into y -> z + x.

    Prepends an insertion on the last x wires: (f (x) id_x) . eta(y, x).
    """
    y = f.source - x
    if x < 1 or y < 0:
        raise ValueError(f"cannot transpose a {f.source}-wide source along x={x}")
    return compose(gen_term(eta(y, x)), tensor(f, identity(x)))


def untranspose(g: Term, x: int) -> Term:
    """Inverse transpose: turn g : y -> z + x into y + x -> z.

    Appends a deletion of the last x wires: eps(z, x) . (g (x) id_x).
    """
    z = g.target - x
    if x < 1 or z < 0:
        raise ValueError(f"cannot untranspose a {g.target}-wide target along x={x}")
    return compose(tensor(g, identity(x)), gen_term(eps(z, x)))


# -- configuration ------------------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    caps: SearchCaps = DEFAULT_CAPS
    dims: tuple[int, ...] = (1, 2)
    phi_seeds: tuple[int, ...] = (1,)
    field: RationalField | PrimeField = RATIONALS
    hom_caps: SearchCaps = SearchCaps(3, 8, 1, 4000)
    hom_merge_caps: SearchCaps = SearchCaps(5, 10, 1, 4000)
    control_caps: SearchCaps = SearchCaps(4, 6, 1, 5000)
    sample_seed: int = 2024
    obstruction_samples: int = 100
    nonsquare_samples: int = 20

    def __post_init__(self) -> None:
        if not self.dims or not set(self.dims) <= {1, 2, 3}:
            raise ValueError("dims must be a non-empty subset of {1, 2, 3}")

    def functor_specs(self, d: int) -> list[FunctorSpec]:
        specs = [FunctorSpec.identity(d, self.field)]
        specs += [FunctorSpec.random(d, seed, self.field) for seed in self.phi_seeds]
        return specs

    def to_dict(self) -> dict:
        caps_dict = lambda c: {
            "max_gen_count": c.max_gen_count,
            "max_width": c.max_width,
            "max_index_n": c.max_index_n,
            "max_states": c.max_states,
        }
        field_str = "q" if isinstance(self.field, RationalField) else f"p:{self.field.p}"
        return {
            "caps": caps_dict(self.caps),
            "dims": list(self.dims),
            "phi_seeds": list(self.phi_seeds),
            "field": field_str,
            "hom_caps": caps_dict(self.hom_caps),
            "hom_merge_caps": caps_dict(self.hom_merge_caps),
            "control_caps": caps_dict(self.control_caps),
            "sample_seed": self.sample_seed,
            "obstruction_samples": self.obstruction_samples,
            "nonsquare_samples": self.nonsquare_samples,
        }

    @staticmethod
    def from_dict(data: dict) -> "SuiteConfig":
        def caps_of(d, fallback):
            if d is None:
                return fallback
            return SearchCaps(
                d.get("max_gen_count", fallback.max_gen_count),
                d.get("max_width", fallback.max_width),
                d.get("max_index_n", fallback.max_index_n),
                d.get("max_states", fallback.max_states),
            )

        base = SuiteConfig()
        field_str = data.get("field", "q")
        if field_str == "q":
            fld = RATIONALS
        elif isinstance(field_str, str) and field_str.startswith("p:"):
            fld = PrimeField(int(field_str[2:]))
        else:
            raise ValueError(f"unknown field spec {field_str!r}")
        return SuiteConfig(
            caps=caps_of(data.get("caps"), base.caps),
            dims=tuple(data.get("dims", base.dims)),
            phi_seeds=tuple(data.get("phi_seeds", base.phi_seeds)),
            field=fld,
            hom_caps=caps_of(data.get("hom_caps"), base.hom_caps),
            hom_merge_caps=caps_of(data.get("hom_merge_caps"), base.hom_merge_caps),
            control_caps=caps_of(data.get("control_caps"), base.control_caps),
            sample_seed=data.get("sample_seed", base.sample_seed),
            obstruction_samples=data.get("obstruction_samples", base.obstruction_samples),
            nonsquare_samples=data.get("nonsquare_samples", base.nonsquare_samples),
        )


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "evidence"
    details: dict
    states_visited: int | None = None
    path: list | None = None
    elapsed_s: float = 0.0

    def to_dict(self, zero_timings: bool = False) -> dict:
        out = {"name": self.name, "status": self.status, "details": self.details}
        if self.states_visited is not None:
            out["states_visited"] = self.states_visited
        if self.path is not None:
            out["path"] = self.path
        out["elapsed_s"] = 0.0 if zero_timings else round(self.elapsed_s, 3)
        return out


@dataclass
class SuiteReport:
    config: SuiteConfig
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(c.status == "fail" for c in self.checks)

    def to_dict(self, zero_timings: bool = False) -> dict:
        return {
            "config": self.config.to_dict(),
            "checks": [c.to_dict(zero_timings) for c in self.checks],
        }

    def to_json(self, zero_timings: bool = False) -> str:
        return json.dumps(self.to_dict(zero_timings), indent=2)


# -- individual checks ---------------------------------------------------------


def check_rule_soundness(cfg: SuiteConfig, table=None) -> CheckResult:
    """Every relation instance maps to a matrix identity, for each
    configured dimension and pairing."""
    if table is None:
        table = rule_instances()
    bad = []
    checked = 0
    for d in cfg.dims:
        for spec in cfg.functor_specs(d):
            for rule, params, lhs, rhs in table:
                checked += 1
                if not vect.check_rule_instance(spec, lhs, rhs):
                    bad.append({"rule": rule.value, "params": list(params), "d": d})
    status = "pass" if not bad else "fail"
    return CheckResult(
        "rule_soundness",
        status,
        {"instances": len(table), "checks": checked, "violations": bad},
    )


def check_closedness(cfg: SuiteConfig) -> CheckResult:
    """Both triangle composites reduce to the identity in one step, and the
    transpose round trips on the generator families close within two."""
    problems = []
    rules_used = set()
    max_len = 0
    instances = 0
    first_path = None

    def expect_equal(desc, a, b, limit):
        nonlocal max_len, first_path
        w = equal(a, b, Mode.C, cfg.caps)
        if w is None or len(w) > limit:
            problems.append({"case": desc, "found": None if w is None else len(w)})
            return
        max_len = max(max_len, len(w))
        for st in w.steps:
            rules_used.add(st.rule)
        if first_path is None and len(w) > 0:
            first_path = [st.rule.value for st in w.steps]

    for i in (0, 1, 2):
        for n in (1, 2):
            instances += 2
            lhs_a, rhs_a = rule_instance(RuleId.TRIANGLE_A, i=i, n=n)
            expect_equal(f"triangleA i={i} n={n}", lhs_a, rhs_a, 1)
            lhs_b, rhs_b = rule_instance(RuleId.TRIANGLE_B, i=i, n=n)
            expect_equal(f"triangleB i={i} n={n}", lhs_b, rhs_b, 1)
            # transposing a deletion yields one triangle side, untransposing
            # an insertion the other; both must collapse in one step
            expect_equal(
                f"transpose eps({i},{n})",
                transpose(gen_term(eps(i, n)), n),
                identity(i + n),
                1,
            )
            expect_equal(
                f"untranspose eta({i},{n})",
                untranspose(gen_term(eta(i, n)), n),
                identity(i + n),
                1,
            )
    for y in (1, 2):
        for x in (1, 2):
            expect_equal(
                f"roundtrip id y={y} x={x}",
                untranspose(transpose(identity(y + x), x), x),
                identity(y + x),
                2,
            )
    stray = {r.value for r in rules_used if r not in TRIANGLE_RULES}
    if stray:
        problems.append({"case": "non-triangle rules in closedness paths", "rules": sorted(stray)})
    status = "pass" if not problems else "fail"
    return CheckResult(
        "closedness",
        status,
        {
            "triangle_instances": instances,
            "max_path_len": max_len,
            "problems": problems,
        },
        path=first_path,
    )


def check_not_rigid_evidence(cfg: SuiteConfig) -> CheckResult:
    """Bounded closure of the zig-zag term never reaches the identity wire;
    the same search from a triangle composite does (control)."""
    s = snake_term()
    report = explore(s, Mode.C, cfg.caps)
    control_start, _ = rule_instance(RuleId.TRIANGLE_A, i=0, n=1)
    control = explore(control_start, Mode.C, cfg.control_caps)
    details = {
        "start": render(s),
        "identity_found": report.identity_found,
        "truncated": report.truncated,
        "min_gen_count_seen": report.min_gen_count_seen,
        "control_identity_found": control.identity_found,
        "control_states": control.states_visited,
        "control_min_gen_count": control.min_gen_count_seen,
    }
    if report.identity_found or not control.identity_found:
        status = "fail"
    else:
        status = "evidence"
    return CheckResult(
        "not_rigid_evidence", status, details, states_visited=report.states_visited
    )


def _random_walk_layers(rng: random.Random, source: int, max_len: int, max_width: int):
    lays = []
    width = source
    for _ in range(rng.randint(0, max_len)):
        options = []
        n = 1
        if width + 2 * n <= max_width:
            for m in range(0, width + 1):
                for off in range(0, width - m + 1):
                    options.append((off, eta(m, n)))
        for m in range(0, width - 2 * n + 1):
            for off in range(0, width - m - 2 * n + 1):
                options.append((off, eps(m, n)))
        if not options:
            break
        off, g = rng.choice(options)
        lays.append(Slice(off, g, width - off - g.source))
        width += g.delta
    return lays, width


def _random_term(rng: random.Random, source: int, max_len: int, max_width: int) -> Term:
    lays, _ = _random_walk_layers(rng, source, max_len, max_width)
    return Term(source, tuple(lays))


def _random_term_ending_at(
    rng: random.Random, target: int, max_len: int, max_width: int
) -> Term:
    """Random walk built back to front, so its target width is ``target``."""
    slices: list[Slice] = []
    width = target
    for _ in range(rng.randint(0, max_len)):
        options = []
        n = 1
        for m in range(0, width - 2 * n + 1):
            for off in range(0, width - m - 2 * n + 1):
                options.append((off, eta(m, n)))
        if width + 2 * n <= max_width:
            for m in range(0, width + 1):
                for off in range(0, width - m + 1):
                    options.append((off, eps(m, n)))
        if not options:
            break
        off, g = rng.choice(options)
        slices.insert(0, Slice(off, g, width - off - g.target))
        width -= g.delta
    return Term(width, tuple(slices))


def check_skeletal_and_obstructions(cfg: SuiteConfig) -> CheckResult:
    """Sampled arrows of the two forbidden factorisations are certified
    non-invertible, and arrows between distinct widths always are."""
    if max(cfg.dims) < 2:
        return CheckResult(
            "skeletal_obstructions",
            "pass",
            {"skipped": "needs a configured dimension >= 2"},
        )
    spec = FunctorSpec.identity(2, RATIONALS)
    rng = random.Random(cfg.sample_seed)
    bad = []

    def sample_shape(leading: bool):
        for _ in range(cfg.obstruction_samples):
            while True:
                i1 = rng.randint(0, 2)
                j = rng.randint(0, 1)
                k = rng.randint(1, 2)
                i2 = rng.randint(0, 2)
                if i1 + j + 2 * k + i2 <= 5:
                    break
            if leading:
                del_slice = Slice(i1, eps(j, k), i2)
                g = _random_term(rng, del_slice.target_width, 3, 5)
                t = compose(Term(del_slice.source_width, (del_slice,)), g)
            else:
                ins_slice = Slice(i1, eta(j, k), i2)
                g = _random_term_ending_at(rng, ins_slice.source_width, 3, 5)
                t = compose(g, Term(ins_slice.source_width, (ins_slice,)))
            verdict = vect.iso_obstruction(spec, t)
            if not verdict.not_iso:
                bad.append({"shape": "leading" if leading else "trailing", "term": render(t)})

    sample_shape(leading=True)
    sample_shape(leading=False)

    nonsquare_checked = 0
    attempts = 0
    while nonsquare_checked < cfg.nonsquare_samples and attempts < 10_000:
        attempts += 1
        t = _random_term(rng, rng.randint(0, 4), 3, 6)
        if t.source == t.target:
            continue
        nonsquare_checked += 1
        verdict = vect.iso_obstruction(spec, t)
        if not (verdict.not_iso and "non-square" in (verdict.reason or "")):
            bad.append({"shape": "non-square", "term": render(t)})

    eps_rank = vect.rank(vect.eval_term(spec, gen_term(eps(0, 1))))
    if eps_rank != 1:
        bad.append({"shape": "eps(0,1) rank", "rank": eps_rank})
    status = "pass" if not bad else "fail"
    return CheckResult(
        "skeletal_obstructions",
        status,
        {
            "shape_samples": 2 * cfg.obstruction_samples,
            "nonsquare_samples": nonsquare_checked,
            "rank_eps01": eps_rank,
            "violations": bad,
        },
    )


def check_r_category(cfg: SuiteConfig) -> CheckResult:
    """The transpose maps put enumerated hom classes in bijection.

    For x = 1 and y in {0, 1, 2}: every enumerated class of arrows
    y+1 -> 0 transposes into exactly one enumerated class of arrows
    y -> 1 with the round trip closing, and all enumerated target classes
    below the generator budget are hit (and symmetrically back).
    """
    x = 1
    per_y = []
    problems = []
    specs = (FunctorSpec.identity(2, RATIONALS), FunctorSpec.random(2, 11, RATIONALS))
    image = lambda t: tuple(vect.eval_term(sp, t).entries for sp in specs)

    def match_classes(t, classes, images):
        sig = image(t)
        return [
            ci
            for ci, cls in enumerate(classes)
            if images[ci] == sig and equal(t, cls[0], Mode.C, cfg.hom_merge_caps) is not None
        ]

    for y in (0, 1, 2):
        src = enum_hom_detailed(y + x, 0, Mode.C, cfg.hom_caps, cfg.hom_merge_caps)
        tgt = enum_hom_detailed(y, x, Mode.C, cfg.hom_caps, cfg.hom_merge_caps)
        src_images = [image(cls[0]) for cls in src.classes]
        tgt_images = [image(cls[0]) for cls in tgt.classes]
        budget = cfg.hom_caps.max_gen_count - 1

        # round trips close for every enumerated class, both directions
        for scls in src.classes:
            rep = scls[0]
            if equal(untranspose(transpose(rep, x), x), rep, Mode.C, cfg.hom_merge_caps) is None:
                problems.append({"y": y, "issue": "round trip open", "source": render(rep)})
        for tcls in tgt.classes:
            rep = tcls[0]
            if equal(transpose(untranspose(rep, x), x), rep, Mode.C, cfg.hom_merge_caps) is None:
                problems.append({"y": y, "issue": "round trip open", "target": render(rep)})

        # within the generator budget the transposes land in exactly one
        # enumerated class on the other side: the maps are mutually inverse
        # bijections on that portion, so every budget class is hit
        fwd = {}
        for si, scls in enumerate(src.classes):
            if gen_count(scls[0]) > budget:
                continue
            matches = match_classes(transpose(scls[0], x), tgt.classes, tgt_images)
            if len(matches) != 1:
                problems.append(
                    {"y": y, "issue": "transpose image matched != 1 classes",
                     "source": render(scls[0]), "matches": len(matches)}
                )
            else:
                fwd[si] = matches[0]
        bwd = {}
        for ti, tcls in enumerate(tgt.classes):
            if gen_count(tcls[0]) > budget:
                continue
            matches = match_classes(untranspose(tcls[0], x), src.classes, src_images)
            if len(matches) != 1:
                problems.append(
                    {"y": y, "issue": "untranspose image matched != 1 classes",
                     "target": render(tcls[0]), "matches": len(matches)}
                )
            else:
                bwd[ti] = matches[0]
        for si, ti in fwd.items():
            if ti in bwd and bwd[ti] != si:
                problems.append({"y": y, "issue": "maps not mutually inverse", "source_class": si})
        if len(set(fwd.values())) != len(fwd):
            problems.append({"y": y, "issue": "transpose not injective on budget classes"})
        if len(set(bwd.values())) != len(bwd):
            problems.append({"y": y, "issue": "untranspose not injective on budget classes"})

        per_y.append(
            {
                "y": y,
                "source_classes": len(src.classes),
                "target_classes": len(tgt.classes),
                "budget_pairs": len(fwd) + len(bwd),
                # pairs kept apart although no matrix invariant separates them
                "unresolved_pairs": len(src.unresolved) + len(tgt.unresolved),
            }
        )
    status = "pass" if not problems else "fail"
    return CheckResult("r_category", status, {"per_y": per_y, "problems": problems})


def check_automorphism_evidence(cfg: SuiteConfig) -> CheckResult:
    """Every witnessed automorphism among enumerated endo classes is
    search-equal to the identity.

    A class is witnessed invertible when some enumerated partner composes
    with it to the identity in both orders, provably within caps.  An
    invertible matrix image alone does not qualify (the zig-zag composite
    has image id everywhere); this is bounded support for reading the
    candidate duality maps as plain insertions and deletions.
    """
    specs = [FunctorSpec.identity(2, RATIONALS), FunctorSpec.random(2, 17, RATIONALS)]
    images = lambda t: tuple(vect.eval_term(sp, t).entries for sp in specs)
    id_sigs = {w: images(identity(w)) for w in (1, 2)}
    details = {}
    stray = []
    for w in (1, 2):
        enumeration = enum_hom_detailed(w, w, Mode.C, cfg.hom_caps, cfg.hom_merge_caps)
        reps = [cls[0] for cls in enumeration.classes]
        witnessed = []
        for t in reps:
            found = False
            for u in reps:
                # matrix prefilter: both composite images must be identities
                if images(compose(t, u)) != id_sigs[w]:
                    continue
                if images(compose(u, t)) != id_sigs[w]:
                    continue
                if (
                    equal(compose(t, u), identity(w), Mode.C, cfg.hom_merge_caps)
                    is not None
                    and equal(compose(u, t), identity(w), Mode.C, cfg.hom_merge_caps)
                    is not None
                ):
                    found = True
                    break
            if found:
                witnessed.append(t)
                if equal(t, identity(w), Mode.C, cfg.hom_merge_caps) is None:
                    stray.append({"width": w, "term": render(t)})
        details[f"width_{w}_classes"] = len(reps)
        details[f"width_{w}_witnessed_automorphisms"] = len(witnessed)
    details["non_identity_automorphisms"] = stray
    status = "evidence" if not stray else "fail"
    return CheckResult("automorphism_evidence", status, details)


CHECKS = (
    check_rule_soundness,
    check_closedness,
    check_not_rigid_evidence,
    check_skeletal_and_obstructions,
    check_r_category,
    check_automorphism_evidence,
)


def run_all(cfg: SuiteConfig | None = None, rule_table=None) -> SuiteReport:
    """Run every check; ``rule_table`` overrides the relation instance
    sweep (test hook for deliberately corrupted tables)."""
    cfg = cfg if cfg is not None else SuiteConfig()
    report = SuiteReport(config=cfg)
    for check in CHECKS:
        t0 = time.perf_counter()
        if check is check_rule_soundness:
            result = check(cfg, rule_table)
        else:
            result = check(cfg)
        result.elapsed_s = time.perf_counter() - t0
        report.checks.append(result)
    return report
