import json
import random

import pytest

from cellkit.complexes import em_complex
from cellkit.emcell import (AcyclizationCase, CellExact, CellShape, CellZero,
                            ConstraintSet, EMObject, InadmissibleCaseError,
                            acyclization, acyclization_HZ, acyclization_HZpinf,
                            acyclization_HZpk, cell_primary_torsion, cell_shape,
                            chain_homotopy_group, chain_model, constraint_check,
                            em_morphism_group, gem_closure_check, hzp_dichotomy,
                            ring_unit_obstruction, semiexact_counterexample,
                            sphere_homotopy)
from cellkit.groups import FgAbGroup, Z, ext_fg, hom_fg
from cellkit.sampling import random_finite_group
from cellkit.symbolic import (PrimeSet, ProdZpHatModZ, Prufer, PruferSum, Q,
                              QpHat, SymbolicGroup, ZpHat, is_unknown)


def cyc(n):
    return FgAbGroup.cyclic(n)


class TestEMObject:
    def test_merge_and_sort(self):
        x = EMObject.of([(1, cyc(3)), (0, cyc(2)), (1, cyc(5))])
        assert x.shifts == (0, 1)
        assert x.group_at(1) == SymbolicGroup.of(cyc(15))

    def test_zero_groups_dropped(self):
        assert EMObject.of([(0, FgAbGroup.zero())]).is_zero

    def test_json_round_trip(self):
        x = EMObject.of([(-1, SymbolicGroup.of(PruferSum(PrimeSet.complement_of([2])))),
                         (0, cyc(4))])
        assert EMObject.from_json(x.to_json()) == x


class TestMorphismGroups:
    def test_adjacent_degrees_only(self):
        b, g = cyc(4), cyc(6)
        assert em_morphism_group(0, b, 0, g) == SymbolicGroup.of(hom_fg(b, g))
        assert em_morphism_group(-1, b, 0, g) == SymbolicGroup.of(ext_fg(b, g))
        for i in (-3, -2, 1, 2, 5):
            assert em_morphism_group(i, b, 0, g).is_zero

    def test_ext_into_integers(self):
        val = em_morphism_group(-1, cyc(2), 0, Z)
        assert val == SymbolicGroup.of(cyc(2))

    def test_vanishing_across_atom_universe(self):
        atoms = [SymbolicGroup.of(a) for a in
                 (Q(), Prufer(3), ZpHat(2), QpHat(5),
                  PruferSum(PrimeSet.complement_of([2])),
                  ProdZpHatModZ(PrimeSet.of([3])))]
        for src in atoms:
            for tgt in atoms:
                for i in (-4, -2, 2, 4):
                    assert em_morphism_group(i, src, 0, tgt).is_zero

    def test_sphere_homotopy(self):
        x = EMObject.of([(0, cyc(6)), (2, Z)])
        assert sphere_homotopy(0, x) == SymbolicGroup.of(cyc(6))
        assert sphere_homotopy(2, x) == SymbolicGroup.of(Z)
        assert sphere_homotopy(1, x).is_zero


class TestCellShape:
    def test_generic_two_slots(self):
        result = cell_shape(0, cyc(8))
        assert isinstance(result, CellShape)
        assert result.n == 0 and not result.constraints.b_forced_zero

    def test_divisible_forces_single_slot(self):
        result = cell_shape(3, SymbolicGroup.of(Q()))
        assert isinstance(result, CellShape)
        assert result.constraints.b_forced_zero

    def test_zero(self):
        assert isinstance(cell_shape(0, FgAbGroup.zero()), CellZero)

    def test_constraint_set_check(self):
        cs = ConstraintSet(SymbolicGroup.of(cyc(8)))
        assert cs.check(FgAbGroup.zero(), cyc(4))
        forced = ConstraintSet(SymbolicGroup.of(cyc(8)), b_forced_zero=True)
        assert not forced.check(cyc(2), cyc(4))

    def test_constraint_set_symbolic_target(self):
        cs = cell_shape(3, SymbolicGroup.of(Q())).constraints
        assert cs.check(FgAbGroup.zero(), FgAbGroup.zero())
        # a free slot cannot absorb the rationals: Hom(Z, Q) != Hom(Z, Z)
        assert not cs.check(FgAbGroup.zero(), Z)


class TestConstraintCheck:
    def test_examples(self):
        # nested cyclic p-groups satisfy all three identities
        for j, k in ((1, 3), (2, 2), (3, 5)):
            assert constraint_check(FgAbGroup.zero(), cyc(2 ** j), cyc(2 ** k))
        assert constraint_check(FgAbGroup.zero(), FgAbGroup.zero(),
                                FgAbGroup.zero())
        # endomorphisms of C detect a too-large candidate
        assert not constraint_check(FgAbGroup.zero(), cyc(9), cyc(3))

    def test_nontrivial_b(self):
        # B = C = G = Z/p passes: Hom(B,B) + Ext(B,C) = Z/p + Z/p = Ext(B,G)?
        # Ext(Z/p, Z/p) = Z/p only, so this must FAIL.
        p = cyc(3)
        assert not constraint_check(p, p, p)


class TestPrimaryTable:
    def test_spec_rows(self):
        p = 7
        assert cell_primary_torsion(0, 1, 2, p) == EMObject.of([(0, cyc(p))])
        assert cell_primary_torsion(0, 3, 2, p) == EMObject.of([(0, cyc(p * p))])
        assert cell_primary_torsion(7, 4, 4, p) == EMObject.of([(7, cyc(p ** 4))])

    def test_idempotent(self):
        for k, n in ((1, 4), (3, 2), (2, 2)):
            first = cell_primary_torsion(0, k, n, 5)
            j = min(k, n)
            again = cell_primary_torsion(0, k, j, 5)
            assert first == again

    def test_validation(self):
        with pytest.raises(ValueError):
            cell_primary_torsion(0, 0, 1, 2)


class TestDichotomy:
    def test_dead_generator_kills_tower(self):
        for r in (1, 2, 5):
            assert isinstance(hzp_dichotomy(False, r, 2), CellZero)

    def test_alive_rank_one(self):
        result = hzp_dichotomy(True, 1, 3)
        assert isinstance(result, CellExact)
        assert result.obj == EMObject.of([(0, cyc(3))])

    def test_alive_higher_rank_gives_shape(self):
        result = hzp_dichotomy(True, 3, 2)
        assert isinstance(result, CellShape)
        cs = result.constraints
        assert cs.b_forced_zero
        assert cs.c_candidates == (cyc(2), cyc(4), cyc(8))
        # every candidate passes the constraints against G = Z/8
        for c in cs.c_candidates:
            assert cs.check(FgAbGroup.zero(), c)


class TestAcyclization:
    def test_hz_cases(self):
        assert acyclization_HZ(AcyclizationCase("HZ", "zero")) == \
            EMObject.of([(0, Z)])
        assert acyclization_HZ(AcyclizationCase("HZ", "HZ")).is_zero
        got = acyclization_HZ(AcyclizationCase("HZ", "HZ_P",
                                               primes=PrimeSet.of([2, 3])))
        want = EMObject.of([(-1, SymbolicGroup.of(
            PruferSum(PrimeSet.complement_of([2, 3]))))])
        assert got == want
        got = acyclization_HZ(AcyclizationCase("HZ", "ProdZpHat",
                                               primes=PrimeSet.of([2])))
        assert got == EMObject.of([(-1, SymbolicGroup.of(
            ProdZpHatModZ(PrimeSet.of([2]))))])

    def test_hz_cofinite_localization(self):
        # localizing away from finitely many primes leaves a finite sum
        got = acyclization_HZ(AcyclizationCase(
            "HZ", "HZ_P", primes=PrimeSet.complement_of([2, 3])))
        assert got == EMObject.of([(-1, SymbolicGroup.of(Prufer(2), Prufer(3)))])

    def test_hzpk_cases(self):
        assert acyclization_HZpk(AcyclizationCase("HZpk", "zero", p=2, k=3)) \
            == EMObject.of([(0, cyc(8))])
        assert acyclization_HZpk(AcyclizationCase("HZpk", "HZpk", p=2, k=3)).is_zero
        assert acyclization_HZpk(AcyclizationCase("HZpk", "zero", p=5, k=1)) \
            == EMObject.of([(0, cyc(5))])

    def test_hzpinf_cases(self):
        assert acyclization_HZpinf(AcyclizationCase("HZpinf", "zero", p=3)) \
            == EMObject.of([(0, SymbolicGroup.of(Prufer(3)))])
        assert acyclization_HZpinf(
            AcyclizationCase("HZpinf", "HZpinf", p=3)).is_zero
        assert acyclization_HZpinf(
            AcyclizationCase("HZpinf", "SigmaZpHat", p=3)) == \
            EMObject.of([(0, SymbolicGroup.of(QpHat(3)))])

    def test_inadmissible_cases(self):
        with pytest.raises(InadmissibleCaseError):
            AcyclizationCase("HZ", "SigmaZpHat")
        with pytest.raises(InadmissibleCaseError):
            AcyclizationCase("HZ", "HZ_P")  # missing primes
        with pytest.raises(InadmissibleCaseError):
            AcyclizationCase("HZpk", "zero", p=2)  # missing k
        with pytest.raises(InadmissibleCaseError):
            AcyclizationCase("HZ", "ProdZpHat", primes=PrimeSet.of([]))
        with pytest.raises(InadmissibleCaseError):
            acyclization_HZ(AcyclizationCase("HZpk", "zero", p=2, k=1))

    def test_involution_consistency(self):
        pairs = [
            (AcyclizationCase("HZ", "zero"), AcyclizationCase("HZ", "HZ")),
            (AcyclizationCase("HZpk", "zero", p=3, k=2),
             AcyclizationCase("HZpk", "HZpk", p=3, k=2)),
            (AcyclizationCase("HZpinf", "zero", p=2),
             AcyclizationCase("HZpinf", "HZpinf", p=2)),
        ]
        for keep, kill in pairs:
            assert not acyclization(keep).is_zero
            assert acyclization(kill).is_zero

    def test_fg_outputs_satisfy_constraints_and_closure(self):
        # Every exact output with f.g. groups: read B one degree below the
        # surviving piece and C at it, then replay the shape constraints.
        cases = [
            (AcyclizationCase("HZ", "zero"), 0, Z),
            (AcyclizationCase("HZpk", "zero", p=2, k=3), 0, cyc(8)),
            (AcyclizationCase("HZpk", "zero", p=5, k=1), 0, cyc(5)),
        ]
        for case, n, g in cases:
            obj = acyclization(case)
            b = obj.group_at(n - 1).fg
            c = obj.group_at(n).fg
            assert constraint_check(b, c, g)
            assert gem_closure_check(CellExact(obj), "Z")


class TestRingObstruction:
    def test_localized_output_has_no_unit(self):
        for primes in ([2], [2, 3], [5, 7, 11], []):
            obj = acyclization_HZ(AcyclizationCase("HZ", "HZ_P",
                                                   primes=PrimeSet.of(primes)))
            assert ring_unit_obstruction(obj)

    def test_product_output_has_no_unit(self):
        obj = acyclization_HZ(AcyclizationCase("HZ", "ProdZpHat",
                                               primes=PrimeSet.of([2, 5])))
        assert ring_unit_obstruction(obj)

    def test_negatives(self):
        assert not ring_unit_obstruction(EMObject.of([(0, Z)]))
        assert not ring_unit_obstruction(EMObject.of([(0, cyc(8))]))
        assert not ring_unit_obstruction(EMObject.zero())


class TestGemClosure:
    def test_examples(self):
        assert gem_closure_check(CellExact(EMObject.of([(0, cyc(5))])), "Z/5")
        assert not gem_closure_check(CellExact(EMObject.of([(0, cyc(25))])), "Z/5")
        sum_obj = EMObject.of([(-1, SymbolicGroup.of(
            PruferSum(PrimeSet.complement_of([2]))))])
        assert gem_closure_check(CellExact(sum_obj), "Z")
        assert not gem_closure_check(CellExact(sum_obj), "Z/2")
        assert gem_closure_check(CellZero(), "Q")
        assert gem_closure_check(cell_shape(0, cyc(8)), "Z/2")

    def test_rational_ring(self):
        qobj = EMObject.of([(0, SymbolicGroup.of(QpHat(3)))])
        assert gem_closure_check(CellExact(qobj), "Q")
        zobj = EMObject.of([(0, Z)])
        assert not gem_closure_check(CellExact(zobj), "Q")


class TestSemiexactCounterexample:
    def test_report(self):
        rep = semiexact_counterexample(2)
        assert rep.verdict
        assert not rep.extension_closure_holds
        assert rep.cellularization_of_middle == EMObject.of([(0, cyc(2))])
        assert rep.chain_triangle.verdict
        body = rep.to_json()
        assert body["verdict"] and not body["extension_closure_holds"]

    def test_other_primes(self):
        for p in (3, 5):
            assert semiexact_counterexample(p).verdict


class TestChainAgreement:
    def test_chain_model_matches_symbolic(self):
        rng = random.Random(1)
        for _ in range(20):
            b = random_finite_group(rng, 50)
            n = rng.randint(-2, 2)
            obj = EMObject.of([(n, b)])
            model = chain_model(obj)
            for i in range(n - 2, n + 3):
                assert chain_homotopy_group(model, i) == \
                    em_morphism_group(i, Z, n, b).fg

    def test_chain_model_rejects_atoms(self):
        with pytest.raises(ValueError):
            chain_model(EMObject.of([(0, SymbolicGroup.of(Q()))]))
