"""Ulrich predicates, decomposition reporters, Ext dimensions, and the
two-sheaf extension construction.

Synthetic abstract sheaves are used where an impostor is needed: tables
that pass the pointwise criteria but are not what they pretend to be.
Those tests pin down that the reconstruction cross-checks actually run.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ulrich_kit import (
    AbstractSheaf,
    CohomologyTable,
    GlueWitness,
    LineBundle,
    SemistableEC,
    Spinor,
    abstract_ulrich_sheaf,
    default_window,
    direct_sum,
    elliptic_curve,
    euler_char,
    ext_dimension,
    formal_complex,
    is_initialized,
    is_ulrich_object,
    is_ulrich_sheaf,
    line_bundle,
    pn_decompose,
    product_proj,
    proj_space,
    quadric,
    quadric_decompose,
    rank1_surface,
    sheaf_table,
    shift,
    twist_class,
    ulrich_chern_solve,
    yoneda_build,
)
from ulrich_kit.errors import (
    MalformedDescriptor,
    ModeDisagreement,
    NoDualRule,
    NonDivisibleRank,
    NotUlrich,
    NotUlrichInput,
    UnknownSlopeZero,
    ZeroExt,
)


def scaled_entries(table: CohomologyTable, num: int, den: int) -> dict:
    out = {}
    for key, h in table.entries.items():
        assert (h * num) % den == 0
        out[key] = h * num // den
    return out


class TestInitialized:
    def test_structure_sheaf_is_initialized(self):
        report = is_initialized(line_bundle(0), proj_space(2))
        assert report.ok and report.global_verdict
        assert report.witness is None

    def test_negative_twist_has_no_sections_at_zero(self):
        report = is_initialized(line_bundle(-1), proj_space(2))
        assert not report.ok
        assert report.witness == (0, 0, 0)

    def test_positive_twist_has_early_sections(self):
        report = is_initialized(line_bundle(1), proj_space(3))
        assert not report.ok
        assert report.witness == (0, -1, 1)

    def test_probe_depth_is_recorded(self):
        report = is_initialized(line_bundle(0), proj_space(2), probe_depth=3)
        assert report.probed == (-3, 0)
        report = is_initialized(line_bundle(0), proj_space(2))
        assert report.probed == (-9, 0)

    def test_abstract_data_is_window_limited(self):
        model = rank1_surface(4, 0, 2)
        witness = abstract_ulrich_sheaf(model, 1)
        report = is_initialized(witness, model)
        assert report.ok and not report.global_verdict


class TestUlrichSheaf:
    def test_criteria_names_and_order(self):
        verdict = is_ulrich_sheaf(line_bundle(0), proj_space(2))
        assert [c.name for c in verdict.criteria] == [
            "twisted-vanishing",
            "initialized",
            "section-count",
            "acm-window",
        ]
        assert verdict.passed and verdict.mode == "sheaf"
        assert verdict.witness() is None

    def test_structure_sheaf_on_every_projective_space(self):
        for n in range(1, 6):
            verdict = is_ulrich_sheaf(line_bundle(0), proj_space(n))
            assert verdict.passed, n

    def test_twists_fail_with_witnesses(self):
        p2 = proj_space(2)
        down = is_ulrich_sheaf(line_bundle(-1), p2)
        assert not down.passed
        # h^2(O(-1-2)) = 1 is the first nonzero over the probe order
        assert down.witness() is not None
        up = is_ulrich_sheaf(line_bundle(1), p2)
        assert not up.passed
        by_name = {c.name: c for c in up.criteria}
        assert by_name["twisted-vanishing"].witness == (0, -1, 1)

    def test_section_count_note(self):
        verdict = is_ulrich_sheaf(line_bundle(0), proj_space(2))
        by_name = {c.name: c for c in verdict.criteria}
        assert by_name["section-count"].note == "h0 = 1, deg * rank = 1"
        assert by_name["initialized"].note == "global"

    def test_spinor_on_the_threefold(self):
        verdict = is_ulrich_sheaf(Spinor(None), quadric(3))
        assert verdict.passed
        by_name = {c.name: c for c in verdict.criteria}
        assert by_name["section-count"].note == "h0 = 4, deg * rank = 4"

    def test_spinor_lines_on_the_surface(self):
        q2 = quadric(2)
        assert is_ulrich_sheaf(Spinor("+"), q2).passed
        assert is_ulrich_sheaf(Spinor("-"), q2).passed
        assert is_ulrich_sheaf(direct_sum(Spinor("+"), Spinor("-")), q2).passed
        assert not is_ulrich_sheaf(line_bundle(0), q2).passed

    def test_rulings_on_the_product(self):
        p11 = product_proj(1, 1)
        assert is_ulrich_sheaf(LineBundle((1, 0)), p11).passed
        assert is_ulrich_sheaf(LineBundle((0, 1)), p11).passed
        assert not is_ulrich_sheaf(LineBundle((0, 0)), p11).passed
        assert not is_ulrich_sheaf(LineBundle((1, 1)), p11).passed

    def test_elliptic_dichotomy_decides_the_verdict(self):
        model = elliptic_curve(3)
        good = is_ulrich_sheaf(SemistableEC(1, 3, False), model)
        assert good.passed
        # the forced-trivial twist keeps one section at -1
        bad = is_ulrich_sheaf(SemistableEC(1, 3, True), model)
        assert not bad.passed
        by_name = {c.name: c for c in bad.criteria}
        assert by_name["twisted-vanishing"].witness == (0, -1, 1)

    def test_abstract_witness_passes_window_limited(self):
        model = rank1_surface(4, 0, 2)
        for rank in (1, 2, 3):
            witness = abstract_ulrich_sheaf(model, rank)
            verdict = is_ulrich_sheaf(witness, model)
            assert verdict.passed, rank
            by_name = {c.name: c for c in verdict.criteria}
            assert by_name["initialized"].note == "window-limited"

    def test_as_dict_round_trip_shape(self):
        verdict = is_ulrich_sheaf(line_bundle(0), proj_space(2))
        data = verdict.as_dict()
        assert data["passed"] is True
        assert {c["name"] for c in data["criteria"]} == {
            "twisted-vanishing",
            "initialized",
            "section-count",
            "acm-window",
        }


class TestUlrichObject:
    def test_sums_of_shifts_pass_both_modes(self):
        p3 = proj_space(3)
        E = formal_complex(
            p3, {0: direct_sum((line_bundle(0), 2)), -2: line_bundle(0)}
        )
        for mode in ("direct", "sheafwise", "both"):
            verdict = is_ulrich_object(E, mode)
            assert verdict.passed, mode

    def test_modes_agree_on_failures_too(self):
        p2 = proj_space(2)
        E = formal_complex(p2, {0: line_bundle(1)})
        for mode in ("direct", "sheafwise", "both"):
            assert not is_ulrich_object(E, mode).passed, mode

    def test_unknown_mode_is_rejected(self):
        p2 = proj_space(2)
        E = formal_complex(p2, {0: line_bundle(0)})
        with pytest.raises(MalformedDescriptor):
            is_ulrich_object(E, "quick")

    def test_glued_pass_is_certified_by_vanishing(self):
        model = rank1_surface(4, 0, 2)
        F = abstract_ulrich_sheaf(model, 1, label="F")
        G = abstract_ulrich_sheaf(model, 1, label="G")
        E = formal_complex(model, {0: F, -1: G}, (GlueWitness(0, -1),))
        verdict = is_ulrich_object(E, "direct")
        assert verdict.passed
        assert verdict.criteria[0].note == "exact-by-vanishing"

    def test_engineered_disagreement_raises(self):
        # a table that vanishes at the Ulrich twists but miscounts its
        # sections passes the direct check and fails the sheafwise one;
        # the kit must refuse to pick a side
        p2 = proj_space(2)
        window = default_window(p2)
        base = sheaf_table(line_bundle(0), p2, window)
        entries = dict(base.entries)
        entries[(0, 0)] = 2  # wrong section count for rank 1
        impostor = AbstractSheaf(
            rank=1,
            label="miscounted",
            table=CohomologyTable(window=window, entries=entries),
        )
        E = formal_complex(p2, {0: impostor})
        assert is_ulrich_object(E, "direct").passed
        assert not is_ulrich_object(E, "sheafwise").passed
        with pytest.raises(ModeDisagreement):
            is_ulrich_object(E, "both")


class TestPnDecompose:
    def test_single_structure_sheaf(self):
        p2 = proj_space(2)
        E = formal_complex(p2, {0: line_bundle(0)})
        assert pn_decompose(E) == {0: 1}

    def test_shifted_sum(self):
        p3 = proj_space(3)
        E = formal_complex(
            p3, {0: direct_sum((line_bundle(0), 2)), -1: line_bundle(0)}
        )
        assert pn_decompose(E) == {-1: 1, 0: 2}

    def test_shift_moves_the_multiplicities(self):
        p2 = proj_space(2)
        E = formal_complex(p2, {0: direct_sum((line_bundle(0), 3))})
        assert pn_decompose(shift(E, 2)) == {-2: 3}

    def test_rejects_non_ulrich_input(self):
        p2 = proj_space(2)
        with pytest.raises(NotUlrich):
            pn_decompose(formal_complex(p2, {0: line_bundle(2)}))

    def test_rejects_other_models(self):
        q2 = quadric(2)
        with pytest.raises(MalformedDescriptor):
            pn_decompose(formal_complex(q2, {0: Spinor("+")}))

    def test_impostor_table_is_caught_by_reconstruction(self):
        # passes every pointwise criterion, but the table deviates from
        # the structure sheaf away from the probed twists
        p2 = proj_space(2)
        window = default_window(p2)
        base = sheaf_table(line_bundle(0), p2, window)
        entries = dict(base.entries)
        entries[(0, 4)] = base.h(0, 4) + 1
        impostor = AbstractSheaf(
            rank=1,
            label="drifting-tail",
            table=CohomologyTable(window=window, entries=entries),
        )
        E = formal_complex(p2, {0: impostor})
        assert is_ulrich_object(E, "both").passed
        with pytest.raises(NotUlrich):
            pn_decompose(E)


class TestQuadricDecompose:
    def test_spinor_multiplicities_on_q3(self):
        q3 = quadric(3)
        E = formal_complex(q3, {0: direct_sum((Spinor(None), 2)), -1: Spinor(None)})
        assert quadric_decompose(E) == {-1: 1, 0: 2}

    def test_even_split_on_q2(self):
        q2 = quadric(2)
        E = formal_complex(q2, {0: direct_sum(Spinor("+"), (Spinor("-"), 2))})
        assert quadric_decompose(E) == {0: {"+": 1, "-": 2}}

    def test_even_split_on_the_product_model(self):
        p11 = product_proj(1, 1)
        E = formal_complex(p11, {0: LineBundle((1, 0)), -1: LineBundle((0, 1))})
        assert quadric_decompose(E) == {
            -1: {"+": 0, "-": 1},
            0: {"+": 1, "-": 0},
        }

    def test_rejects_non_ulrich_input(self):
        q3 = quadric(3)
        with pytest.raises(NotUlrich):
            quadric_decompose(formal_complex(q3, {0: line_bundle(0)}))

    def test_rejects_other_models(self):
        p2 = proj_space(2)
        with pytest.raises(MalformedDescriptor):
            quadric_decompose(formal_complex(p2, {0: line_bundle(0)}))

    def test_non_divisible_rank_is_reported(self):
        # an abstract table with the section counts of one and a half
        # spinors passes the pointwise criteria but cannot decompose
        q3 = quadric(3)
        window = default_window(q3)
        base = sheaf_table(Spinor(None), q3, window)
        impostor = AbstractSheaf(
            rank=3,
            label="three-halves-spinor",
            table=CohomologyTable(
                window=window, entries=scaled_entries(base, 3, 2)
            ),
        )
        E = formal_complex(q3, {0: impostor})
        assert is_ulrich_object(E, "both").passed
        with pytest.raises(NonDivisibleRank):
            quadric_decompose(E)


class TestExtDimension:
    def test_line_bundle_pairs_on_the_plane(self):
        p2 = proj_space(2)
        assert ext_dimension(line_bundle(0), line_bundle(1), 0, p2) == 3
        assert ext_dimension(line_bundle(0), line_bundle(1), 1, p2) == 0
        assert ext_dimension(line_bundle(1), line_bundle(-2), 2, p2) == 1
        assert ext_dimension(line_bundle(0), line_bundle(0), 0, p2) == 1

    def test_direct_sum_source_is_additive(self):
        p2 = proj_space(2)
        total = ext_dimension(
            direct_sum(line_bundle(0), line_bundle(1)), line_bundle(1), 0, p2
        )
        assert total == 3 + 1

    def test_spinor_orthogonality_on_q2(self):
        q2 = quadric(2)
        for k in range(0, 3):
            assert ext_dimension(Spinor("+"), Spinor("-"), k, q2) == 0
            assert ext_dimension(Spinor("-"), Spinor("+"), k, q2) == 0
        assert ext_dimension(Spinor("+"), Spinor("+"), 0, q2) == 1
        assert ext_dimension(Spinor("-"), line_bundle(1), 0, q2) == 2

    def test_spinor_sections_from_the_structure_sheaf(self):
        q3 = quadric(3)
        assert ext_dimension(line_bundle(0), Spinor(None), 0, q3) == 4
        assert ext_dimension(line_bundle(0), Spinor(None), 1, q3) == 0

    def test_odd_spinor_source_has_no_dual_rule(self):
        q3 = quadric(3)
        with pytest.raises(NoDualRule):
            ext_dimension(Spinor(None), line_bundle(0), 0, q3)

    def test_elliptic_hom_spaces(self):
        model = elliptic_curve(3)
        triv = SemistableEC(1, 0, True)
        nontriv = SemistableEC(1, 0, False)
        assert ext_dimension(triv, triv, 0, model) == 1
        assert ext_dimension(triv, triv, 1, model) == 1
        assert ext_dimension(triv, nontriv, 0, model) == 0
        assert ext_dimension(triv, nontriv, 1, model) == 0
        assert ext_dimension(triv, SemistableEC(1, 3), 0, model) == 3
        assert ext_dimension(triv, SemistableEC(1, 3), 1, model) == 0
        assert ext_dimension(SemistableEC(1, 2, True), triv, 1, model) == 2

    def test_elliptic_unknowns_are_refused(self):
        model = elliptic_curve(3)
        with pytest.raises(UnknownSlopeZero):
            ext_dimension(SemistableEC(1, 0, True), SemistableEC(1, 0), 0, model)
        with pytest.raises(NoDualRule):
            ext_dimension(SemistableEC(2, 0, True), SemistableEC(1, 1), 0, model)

    def test_product_pairs(self):
        p11 = product_proj(1, 1)
        assert ext_dimension(LineBundle((1, 0)), LineBundle((1, 1)), 0, p11) == 2
        assert ext_dimension(LineBundle((0, 0)), LineBundle((-2, -2)), 2, p11) == 1


class TestYonedaBuild:
    def surface_pair(self):
        model = rank1_surface(4, 0, 2)
        F = abstract_ulrich_sheaf(model, 1, label="F")
        G = abstract_ulrich_sheaf(model, 2, label="G")
        return model, F, G

    def test_degree_one_is_a_sheaf_not_a_complex(self):
        model, F, G = self.surface_pair()
        for m in (1, 0, -1):
            with pytest.raises(MalformedDescriptor):
                yoneda_build(F, G, m, model, witness="asserted")

    def test_non_ulrich_input_is_rejected(self):
        p2 = proj_space(2)
        with pytest.raises(NotUlrichInput):
            yoneda_build(line_bundle(1), line_bundle(0), 2, p2)

    def test_computed_witness_fails_on_vanishing_ext(self):
        p2 = proj_space(2)
        with pytest.raises(ZeroExt):
            yoneda_build(line_bundle(0), line_bundle(0), 2, p2)
        model = elliptic_curve(3)
        witness = SemistableEC(1, 3, False)
        with pytest.raises(ZeroExt):
            yoneda_build(witness, witness, 2, model)

    def test_computed_witness_needs_an_ext_oracle(self):
        model, F, G = self.surface_pair()
        with pytest.raises(NoDualRule):
            yoneda_build(F, G, 2, model, witness="computed")

    def test_asserted_glue_in_degree_two(self):
        model, F, G = self.surface_pair()
        E = yoneda_build(F, G, 2, model, witness="asserted")
        assert E.sheaf_map() == {0: F, -1: G}
        assert E.glue == (GlueWitness(0, -1, 2, True),)
        assert E.has_glue()
        verdict = is_ulrich_object(E, "both")
        assert verdict.passed

    def test_higher_degrees_are_formal(self):
        model, F, G = self.surface_pair()
        E = yoneda_build(F, G, 3, model, witness="asserted")
        assert E.support() == [-2, 0]
        assert E.glue == ()

    def test_witness_policy_validation(self):
        model, F, G = self.surface_pair()
        with pytest.raises(MalformedDescriptor):
            yoneda_build(F, G, 2, model, witness="hoped-for")


class TestAbstractUlrichSheaf:
    def test_table_realizes_the_universal_euler_polynomial(self):
        model = rank1_surface(4, 0, 2)
        for rank in (1, 2, 3):
            witness = abstract_ulrich_sheaf(model, rank)
            table = witness.table
            for t in range(table.window[0], table.window[1] + 1):
                want = rank * model.deg * (t + 1) * (t + 2) // 2
                assert table.euler(t) == want, (rank, t)

    def test_class_matches_the_solver(self):
        model = rank1_surface(3, -1, 1)
        witness = abstract_ulrich_sheaf(model, 2)
        solved = ulrich_chern_solve(model, 2)
        assert witness.num_class == solved

    def test_sections_sit_at_the_forced_degrees(self):
        model = rank1_surface(5, 1, 1)
        witness = abstract_ulrich_sheaf(model, 1)
        for (i, t), h in witness.table.entries.items():
            assert h > 0
            assert i == (0 if t >= 0 else 2)
            assert t not in (-1, -2)

    def test_each_instance_is_its_own_sheaf(self):
        model = rank1_surface(4, 0, 2)
        a = abstract_ulrich_sheaf(model, 1)
        b = abstract_ulrich_sheaf(model, 1)
        assert a != b and a == a

    def test_rank_validation(self):
        model = rank1_surface(4, 0, 2)
        with pytest.raises(MalformedDescriptor):
            abstract_ulrich_sheaf(model, 0)


@settings(max_examples=50, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=4),
    mults=st.dictionaries(
        keys=st.integers(min_value=-3, max_value=3),
        values=st.integers(min_value=1, max_value=3),
        min_size=1,
        max_size=3,
    ),
)
def test_every_sum_of_shifts_is_ulrich(n, mults):
    model = proj_space(n)
    E = formal_complex(
        model,
        {degree: direct_sum((line_bundle(0), mult)) for degree, mult in mults.items()},
    )
    assert is_ulrich_object(E, "both").passed
    assert pn_decompose(E) == dict(sorted(mults.items()))


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=4),
    k=st.integers(min_value=-4, max_value=4).filter(lambda k: k != 0),
)
def test_no_nonzero_twist_is_ulrich(n, k):
    model = proj_space(n)
    E = formal_complex(model, {0: line_bundle(k)})
    verdict = is_ulrich_object(E, "both")
    assert not verdict.passed
    assert verdict.witness() is not None
