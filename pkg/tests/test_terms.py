import random

import pytest

from monocat import (
    FunctorSpec,
    GenKind,
    InvalidGenerator,
    NotComposable,
    Slice,
    Term,
    canonical,
    compose,
    eps,
    eta,
    eval_term,
    gen_count,
    gen_term,
    generator,
    identity,
    render,
    tensor,
    whisker,
)
from oracles import random_term, shuffled


class TestGenerator:
    def test_insertion_arity(self):
        g = generator(GenKind.ETA, 0, 1)
        assert (g.source, g.target) == (0, 2)

    def test_deletion_arity(self):
        g = generator(GenKind.EPS, 1, 1)
        assert (g.source, g.target) == (3, 1)

    def test_zero_index_rejected(self):
        with pytest.raises(InvalidGenerator):
            generator(GenKind.ETA, 2, 0)

    def test_negative_block_rejected(self):
        with pytest.raises(InvalidGenerator):
            eps(-1, 1)


class TestIdentity:
    def test_empty_widths(self):
        assert identity(0).source == identity(0).target == 0
        assert identity(1).slices == ()

    def test_unit_law(self):
        t = whisker(0, eta(0, 1), 1)
        assert compose(identity(1), t) == t
        assert compose(t, identity(3)) == t


class TestWhisker:
    def test_padded_insertion(self):
        t = whisker(0, eta(0, 1), 1)
        assert (t.source, t.target) == (1, 3)
        assert t.slices == (Slice(0, eta(0, 1), 1),)

    def test_padded_deletion(self):
        t = whisker(1, eps(0, 1), 0)
        assert (t.source, t.target) == (3, 1)

    def test_no_padding_is_bare_generator(self):
        assert whisker(0, eta(0, 1), 0) == gen_term(eta(0, 1))


class TestCompose:
    def test_zigzag(self):
        s = compose(whisker(0, eta(0, 1), 1), whisker(1, eps(0, 1), 0))
        assert (s.source, s.target) == (1, 1)
        assert gen_count(s) == 2

    def test_mismatch(self):
        with pytest.raises(NotComposable):
            compose(gen_term(eta(0, 1)), identity(1))

    def test_associative(self):
        rng = random.Random(0)
        for _ in range(50):
            f = random_term(rng, max_source=2, max_len=2)
            x = whisker(0, eta(f.target, 1), 0)
            y = whisker(0, eps(f.target, 1), 0)
            assert compose(compose(f, x), y) == compose(f, compose(x, y))


class TestTensor:
    def test_identity_absorbs(self):
        assert tensor(gen_term(eta(0, 1)), identity(1)) == whisker(0, eta(0, 1), 1)
        assert tensor(identity(1), gen_term(eps(0, 1))) == whisker(1, eps(0, 1), 0)

    def test_unit_object(self):
        t = whisker(1, eta(0, 2), 0)
        assert tensor(identity(0), t) == t
        assert tensor(t, identity(0)) == t

    def test_two_generator_decomposition(self):
        t = tensor(gen_term(eta(0, 1)), gen_term(eps(0, 1)))
        assert t.source == 2 and t.target == 2
        assert t.slices == (Slice(0, eta(0, 1), 2), Slice(2, eps(0, 1), 0))

    def test_counts_add(self):
        rng = random.Random(1)
        for _ in range(50):
            f = random_term(rng)
            g = random_term(rng)
            assert gen_count(tensor(f, g)) == gen_count(f) + gen_count(g)
            h = whisker(0, eta(f.target, 2), 0)
            assert gen_count(compose(f, h)) == gen_count(f) + 1


class TestWidthBookkeeping:
    def test_target_is_source_plus_deltas(self):
        rng = random.Random(2)
        for _ in range(100):
            t = random_term(rng)
            assert t.target == t.source + sum(s.gen.delta for s in t.slices)

    def test_bad_chain_rejected(self):
        with pytest.raises(NotComposable):
            Term(1, (Slice(0, eta(0, 1), 1), Slice(0, eps(1, 1), 1)))


class TestCanonical:
    def test_identity_fixed(self):
        for n in range(4):
            assert canonical(identity(n)) == identity(n)

    def test_leftmost_first(self):
        # a deletion on the right listed before an insertion on the left:
        # the normal form emits the leftmost slice first
        t = Term(4, (Slice(2, eps(0, 1), 0), Slice(0, eta(0, 1), 2)))
        c = canonical(t)
        assert c.slices[0].gen.kind is GenKind.ETA
        assert c.slices[0].left == 0

    def test_idempotent_on_random_terms(self):
        rng = random.Random(3)
        for _ in range(300):
            t = random_term(rng)
            c = canonical(t)
            assert canonical(c) == c

    def test_invariant_under_shuffles(self):
        rng = random.Random(4)
        for _ in range(300):
            t = random_term(rng)
            assert canonical(shuffled(rng, t, moves=8)) == canonical(t)

    def test_matrix_image_preserved(self):
        rng = random.Random(5)
        specs = [FunctorSpec.identity(2), FunctorSpec.random(2, seed=6), FunctorSpec.random(3, seed=7)]
        for _ in range(25):
            t = random_term(rng, max_source=2, max_len=3, max_width=6)
            for sp in specs:
                assert eval_term(sp, canonical(t)) == eval_term(sp, t)


class TestRender:
    def test_zigzag_string(self):
        s = compose(whisker(0, eta(0, 1), 1), whisker(1, eps(0, 1), 0))
        assert render(s) == "(eta(0,1) * id(1)) ; (id(1) * eps(0,1))"

    def test_identity_string(self):
        assert render(identity(0)) == "id(0)"
        assert render(identity(3)) == "id(3)"
