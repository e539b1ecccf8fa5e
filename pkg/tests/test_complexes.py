import random

import pytest
from hypothesis import given, settings, strategies as st

from cellkit.complexes import (ChainComplex, ChainComplexError, ChainMap,
                               ChainMapError, GradedGroup, SupportCapError,
                               cone, cone_les_checks, coproduct, derived_hom,
                               em_complex, fiber, fiber_with_maps,
                               map_on_homology_is_iso, quasi_iso_eq, shift,
                               shift_map, summand_maps, triangle_check)
from cellkit.groups import FgAbGroup, Z, ext_fg, hom_fg
from cellkit.matrices import IntMatrix
from cellkit.sampling import random_complex, random_matrix


def cyc(n):
    return FgAbGroup.cyclic(n)


def two_term(d, lo=0):
    return ChainComplex.build({lo: 1, lo + 1: 1},
                              {lo + 1: IntMatrix.from_rows([[d]])})


class TestConstruction:
    def test_d_squared_rejected(self):
        with pytest.raises(ChainComplexError):
            ChainComplex.build(
                {0: 1, 1: 1, 2: 1},
                {1: IntMatrix.from_rows([[1]]), 2: IntMatrix.from_rows([[1]])})

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ChainComplexError):
            ChainComplex.build({0: 2, 1: 1}, {1: IntMatrix.from_rows([[1]])})

    def test_caps(self):
        with pytest.raises(SupportCapError):
            ChainComplex.build({100: 1})
        with pytest.raises(SupportCapError):
            ChainComplex.build({0: 1000})

    def test_normalization_drops_zeros(self):
        x = ChainComplex.build({0: 1, 1: 0, 5: 0})
        assert x.ranks == ((0, 1),)
        y = ChainComplex.build({0: 1, 1: 1}, {1: IntMatrix.zero(1, 1)})
        assert y.boundaries == ()

    def test_json_round_trip(self):
        x = two_term(4, lo=-2)
        assert ChainComplex.from_json(x.to_json()) == x
        z = ChainComplex.zero_complex()
        assert ChainComplex.from_json(z.to_json()) == z


class TestHomology:
    def test_multiplication_complex(self):
        assert two_term(2).homology == GradedGroup.of({0: cyc(2)})

    def test_zero_complex(self):
        assert ChainComplex.zero_complex().homology.is_zero

    def test_em_complex(self):
        g = FgAbGroup.of_orders([0, 2, 6])
        x = em_complex(g, -1)
        assert x.homology == GradedGroup.of({-1: g})
        assert em_complex(cyc(4), 2).homology == GradedGroup.of({2: cyc(4)})
        assert em_complex(FgAbGroup.zero(), 3).is_zero

    def test_free_rank_bookkeeping(self):
        # Z^3 --[[1,0,0]]--> Z : H_1 = Z^2, H_0 = 0
        x = ChainComplex.build({0: 1, 1: 3},
                               {1: IntMatrix.from_rows([[1, 0, 0]])})
        assert x.homology == GradedGroup.of({1: FgAbGroup.free(2)})


class TestShift:
    def test_identity_and_inverse(self):
        x = two_term(6)
        assert shift(x, 0) == x
        assert shift(shift(x, 3), -3) == x

    def test_homology_shifts(self):
        x = em_complex(cyc(2), 0)
        assert shift(x, 1).homology == GradedGroup.of({1: cyc(2)})

    def test_sign_keeps_chain_condition(self):
        rng = random.Random(5)
        for _ in range(10):
            x = random_complex(rng, max_degrees=5, max_rank=4)
            for k in (-3, -1, 1, 2):
                assert shift(x, k).homology == x.homology.shifted(k)


class TestChainMaps:
    def test_invalid_rejected(self):
        x = two_term(2)
        y = two_term(3)
        with pytest.raises(ChainMapError):
            ChainMap.build(x, y, {0: IntMatrix.from_rows([[1]]),
                                  1: IntMatrix.from_rows([[1]])})

    def test_compose(self):
        x = two_term(2)
        f = ChainMap.scalar(x, 3)
        assert f.compose(f).component(0) == IntMatrix.from_rows([[9]])

    def test_json_round_trip(self):
        x = two_term(2)
        f = ChainMap.scalar(x, 3)
        assert ChainMap.from_json(f.to_json()) == f


class TestCone:
    def test_cone_of_identity_acyclic(self):
        x = two_term(4, lo=-1)
        c, _, _ = cone(ChainMap.identity(x))
        assert c.homology.is_zero

    def test_cone_of_multiplication(self):
        emz = em_complex(Z, 0)
        c, _, _ = cone(ChainMap.scalar(emz, 2))
        assert quasi_iso_eq(c, em_complex(cyc(2), 0))

    def test_cone_of_zero_map(self):
        x = two_term(5)
        c, _, _ = cone(ChainMap.zero_map(ChainComplex.zero_complex(), x))
        assert quasi_iso_eq(c, x)

    def test_fiber(self):
        emz = em_complex(Z, 0)
        assert fiber(ChainMap.identity(emz)).homology.is_zero
        x = two_term(5)
        f = fiber(ChainMap.zero_map(ChainComplex.zero_complex(), x))
        assert quasi_iso_eq(f, shift(x, -1))
        fp = fiber(ChainMap.scalar(emz, 3))
        assert quasi_iso_eq(fp, shift(em_complex(cyc(3), 0), -1))

    def test_structure_maps_are_chain_maps(self):
        rng = random.Random(11)
        for _ in range(10):
            x = random_complex(rng, max_degrees=5, max_rank=4)
            f = ChainMap.scalar(x, rng.randint(-4, 4))
            c, inject, project = cone(f)
            assert inject.source == x or inject.source == f.target
            assert project.target == shift(x, 1)
            fib, to_src, from_tgt = fiber_with_maps(f)
            assert to_src.source == fib and to_src.target == x
            assert from_tgt.target == fib


class TestCoproduct:
    def test_empty_and_singleton(self):
        assert coproduct([]) == ChainComplex.zero_complex()
        x = two_term(2)
        assert coproduct([x]) == x

    def test_homology_adds(self):
        a = em_complex(cyc(2), 0)
        b = em_complex(cyc(3), 0)
        assert coproduct([a, b]).homology == GradedGroup.of({0: cyc(6)})

    def test_commutes_with_homology(self):
        rng = random.Random(3)
        xs = [random_complex(rng, max_degrees=4, max_rank=3) for _ in range(3)]
        total = coproduct(xs)
        summed = xs[0].homology.direct_sum(*(x.homology for x in xs[1:]))
        assert total.homology == summed

    def test_summand_maps(self):
        a = em_complex(cyc(2), 0)
        b = em_complex(cyc(9), 1)
        inc, proj = summand_maps([a, b], 1)
        assert proj.compose(inc) == ChainMap.identity(b)


class TestDerivedHom:
    def test_single_piece_identities(self):
        b, c = FgAbGroup.of_orders([4]), FgAbGroup.of_orders([0, 6])
        eb, ec = em_complex(b, 0), em_complex(c, 0)
        assert derived_hom(eb, ec, 0) == hom_fg(b, c)
        assert derived_hom(eb, shift(ec, 1), 0) == ext_fg(b, c)
        assert derived_hom(shift(eb, 1), ec, 0).is_zero

    def test_shift_invariance(self):
        rng = random.Random(9)
        for _ in range(8):
            x = random_complex(rng, max_degrees=4, max_rank=3)
            y = random_complex(rng, max_degrees=4, max_rank=3)
            for k in range(-3, 4):
                assert derived_hom(x, y, k) == derived_hom(shift(x, k), y, 0)

    def test_ties_to_group_layer(self):
        rng = random.Random(13)
        for _ in range(10):
            b = FgAbGroup.of_orders([rng.randint(2, 9), rng.randint(0, 4)])
            g = FgAbGroup.of_orders([rng.randint(2, 9)])
            n = rng.randint(-2, 2)
            assert derived_hom(em_complex(b, n), em_complex(g, n), 0) == hom_fg(b, g)
            assert derived_hom(em_complex(b, n), em_complex(g, n + 1), 0) == ext_fg(b, g)


class TestTriangleCheck:
    def test_examples(self):
        x = two_term(7)
        assert triangle_check(ChainMap.identity(x),
                              ChainComplex.zero_complex()).verdict
        emz = em_complex(Z, 0)
        f = ChainMap.scalar(emz, 2)
        assert triangle_check(f, em_complex(cyc(2), 0)).verdict
        assert not triangle_check(f, em_complex(cyc(3), 0)).verdict

    def test_report_carries_homology(self):
        emz = em_complex(Z, 0)
        rep = triangle_check(ChainMap.scalar(emz, 2), em_complex(cyc(3), 0))
        assert rep.cone_homology.at(0) == cyc(2)
        assert rep.candidate_homology.at(0) == cyc(3)
        assert [c.degree for c in rep.failures()] == [0]


def _random_chain_map(rng, x):
    """A nontrivial self-map or structure map for LES testing."""
    kind = rng.randrange(3)
    if kind == 0:
        return ChainMap.scalar(x, rng.randint(-3, 3))
    if kind == 1:
        c, inject, project = cone(ChainMap.scalar(x, rng.randint(-2, 2)))
        return inject
    c, inject, project = cone(ChainMap.scalar(x, rng.randint(-2, 2)))
    return project


class TestLongExactSequence:
    def test_cone_les_random(self):
        rng = random.Random(21)
        for i in range(40):
            x = random_complex(rng, max_degrees=5, max_rank=4)
            f = _random_chain_map(rng, x)
            bad = [c.note for c in cone_les_checks(f) if not c.ok]
            assert not bad, (i, bad)

    def test_iso_detection(self):
        x = em_complex(FgAbGroup.of_orders([2, 4]), 0)
        assert map_on_homology_is_iso(ChainMap.identity(x), 0)
        assert not map_on_homology_is_iso(ChainMap.scalar(x, 2), 0)
        assert map_on_homology_is_iso(ChainMap.scalar(x, 3), 0)

    def test_shift_map_consistency(self):
        x = two_term(6)
        f = ChainMap.scalar(x, 2)
        sf = shift_map(f, 2)
        assert sf.source == shift(x, 2)
        assert shift_map(sf, -2) == f
