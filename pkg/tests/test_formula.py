"""Formula core: terms, parsing, rendering, free-group interpretation."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from lambekstar import (And, Atom, FragmentError, GroupWord, Or, Over,
                        ParseError, Plus, Prod, Sequent, Star, Under, Unit,
                        VarSupply, atoms_of, curried_division, division_pure,
                        fg_interp, parse_formula, parse_sequent,
                        render_formula, render_sequent, sentinel,
                        sequence_image, split_curried, top_of, type_raise,
                        zero_balanced)

from helpers import random_division_pure

p, q, r = Atom("p"), Atom("q"), Atom("r")


# --------------------------------------------------------------------------
# hash-consed terms

class TestTerms:
    def test_hash_consing_identity(self):
        assert Under(p, q) is Under(Atom("p"), Atom("q"))
        assert Prod(p, Star(q)) is Prod(p, Star(Atom("q")))
        assert Atom("p") is p

    def test_size_counts_nodes(self):
        assert p.size == 1
        assert Under(p, q).size == 3
        assert sentinel("p", "q", "r").size == 11

    def test_kinds_are_distinct(self):
        kinds = {f.kind for f in (p, Unit(), Under(p, q), Over(p, q),
                                  Prod(p, q), Star(p), Plus(p), Or(p, q),
                                  And(p, q))}
        assert len(kinds) == 9


# --------------------------------------------------------------------------
# parse/render

FORMULA_PINS = [
    ("p", p),
    ("1", Unit()),
    ("p \\ q", Under(p, q)),
    ("q / p", Over(q, p)),
    ("p . q", Prod(p, q)),
    ("p^*", Star(p)),
    ("p^+", Plus(p)),
    ("p | q", Or(p, q)),
    ("p & q", And(p, q)),
    ("p\\q\\r", Under(p, Under(q, r))),       # right-assoc under
    ("r/q/p", Over(Over(r, q), p)),           # left-assoc over
    ("p.q.r", Prod(Prod(p, q), r)),
    ("q/(p\\q)", type_raise("p", "q")),
]


@pytest.mark.parametrize("text,expected", FORMULA_PINS)
def test_parse_pins(text, expected):
    assert parse_formula(text) is expected


def test_render_parse_round_trip_pins():
    for text, expected in FORMULA_PINS:
        assert parse_formula(render_formula(expected)) is expected


@st.composite
def formulas(draw, max_depth=4):
    if max_depth == 0:
        return draw(st.sampled_from([p, q, r, Unit()]))
    kind = draw(st.integers(0, 8))
    if kind <= 1:
        return draw(st.sampled_from([p, q, r, Unit()]))
    sub = formulas(max_depth=max_depth - 1)
    a = draw(sub)
    if kind == 2:
        return Star(a)
    if kind == 3:
        return Plus(a)
    b = draw(sub)
    return {4: Under, 5: Over, 6: Prod, 7: Or, 8: And}[kind](a, b)


@given(formulas())
@settings(max_examples=200, deadline=None)
def test_render_parse_round_trip_random(f):
    assert parse_formula(render_formula(f)) is f


@given(st.lists(formulas(), max_size=3), formulas())
@settings(max_examples=100, deadline=None)
def test_sequent_round_trip(ante, succ):
    s = Sequent(tuple(ante), succ)
    assert parse_sequent(render_sequent(s)) == s


def test_parse_sequent_empty_antecedent():
    assert parse_sequent("-> p/p") == Sequent((), Over(p, p))
    assert parse_sequent("p, q -> p.q") == Sequent((p, q), Prod(p, q))


@pytest.mark.parametrize("bad", [
    "", "p ->", "-> ", "p -> q -> r", "(p", "p \\", "p ^ q", "p*",
    "p -> q, r", "2", "p p",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_sequent(bad) if "->" in bad else parse_formula(bad)


# --------------------------------------------------------------------------
# free group interpretation

class TestFreeGroup:
    def test_pinned_images(self):
        assert str(fg_interp(parse_formula("p\\q"))) == "p^-1 q"
        assert str(fg_interp(parse_formula("q/p"))) == "q p^-1"
        assert str(fg_interp(Unit())) == "e"
        assert str(fg_interp(Prod(p, q))) == "p q"

    def test_group_laws(self, rng):
        for _ in range(50):
            a = fg_interp(random_division_pure(rng, rng.randint(1, 8)))
            b = fg_interp(random_division_pure(rng, rng.randint(1, 8)))
            c = fg_interp(random_division_pure(rng, rng.randint(1, 8)))
            assert (a * b) * c == a * (b * c)
            assert a * a.inverse() == GroupWord()
            assert a.inverse().inverse() == a

    def test_sequence_image_concatenates(self):
        assert sequence_image((p, Under(p, q))) == fg_interp(q)

    def test_zero_balanced(self):
        assert zero_balanced(Over(p, p))
        assert zero_balanced(sentinel("p", "q", "r"))
        assert not zero_balanced(p)
        assert not zero_balanced(Under(p, q))

    def test_no_image_for_additives(self):
        for f in (Or(p, q), And(p, q), Star(p), Plus(p)):
            with pytest.raises(FragmentError):
                fg_interp(f)

    @given(formulas())
    @settings(max_examples=120, deadline=None)
    def test_image_is_group_homomorphism_on_products(self, f):
        g = Prod(f, f)
        try:
            img = fg_interp(f)
        except FragmentError:
            return
        assert fg_interp(g) == img * img


# --------------------------------------------------------------------------
# structural helpers

class TestHelpers:
    def test_division_pure(self):
        assert division_pure(Under(p, Over(q, r)))
        for f in (Unit(), Prod(p, q), Star(p), Plus(p), Or(p, q), And(p, q)):
            assert not division_pure(f)

    def test_top_of_follows_numerators(self):
        assert top_of(p) == "p"
        assert top_of(Under(p, q)) == "q"
        assert top_of(Over(q, p)) == "q"
        assert top_of(sentinel("p", "q", "r")) == "r"
        with pytest.raises(FragmentError):
            top_of(Prod(p, q))

    def test_atoms_of(self):
        assert atoms_of(sentinel("p", "q", "r")) == {"p", "q", "r"}

    def test_curried_division_inverts(self, rng):
        for _ in range(30):
            gamma = [random_division_pure(rng, rng.randint(1, 3))
                     for _ in range(rng.randint(0, 3))]
            delta = [random_division_pure(rng, rng.randint(1, 3))
                     for _ in range(rng.randint(0, 3))]
            core = Atom("z")
            f = curried_division(gamma, core, delta)
            gs, c, ds = split_curried(f)
            assert (list(gs), c, list(ds)) == (gamma, core, delta)

    def test_curried_division_orientation(self):
        f = curried_division([p], r, [q])
        assert f is Under(p, Over(r, q))
        assert sequence_image((p, f, q)) == fg_interp(r)

    def test_type_raise_shape(self):
        assert type_raise("p", "q") is Over(q, Under(p, q))

    def test_sentinel_shape_and_guard(self):
        s = sentinel("p", "q", "r")
        assert s is Over(type_raise("p", "r"), type_raise("p", "q"))
        with pytest.raises(ValueError):
            sentinel("p", "p", "r")


class TestVarSupply:
    def test_fresh_avoids_used(self):
        vs = VarSupply()
        assert vs.fresh("d") == "d"
        assert vs.fresh("d") != "d"

    def test_for_formulas_reserves_atoms(self):
        vs = VarSupply.for_formulas([sentinel("p", "q", "r")])
        assert vs.fresh("p") != "p"
        assert {"p", "q", "r"} <= set(vs.used)
