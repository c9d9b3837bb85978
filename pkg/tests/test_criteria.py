"""The criteria matrix on the reference partitions, plus evidence hygiene.

Each cell asserts both the verdict and, where the verdict is negative, the
kind of obstacle (precondition vs unjoined pairs) so regressions stay loud.
"""
import pytest

from confl.criteria import (
    CRITERIA,
    Partition,
    PreconditionViolation,
    check_criterion,
    check_huet,
    check_linear,
    check_parallel,
    check_pcp,
)
from confl.rewriting import Rule, Trs, empty_trs, replay_steps
from confl.reversibility import replay_reversibility
from confl.termination import replay_certificate

from systems import (
    P5,
    P8,
    P_CA,
    PPRIME_SS2,
    S3,
    S4,
    S6,
    S8,
    SS1,
    plus,
    s,
    x,
    y,
)


def segments_replay(rep):
    """Every evidence segment must chain and replay over its declared rules."""
    tables = {
        "S": rep.s,
        "PP": rep.p.with_inverses(),
        "SP": rep.s.union(rep.p_prime) if rep.p_prime is not None else rep.s,
        "P": rep.p.with_inverses(),
    }
    for ev in rep.evidence:
        cur = ev.pair_left
        for seg in ev.segments:
            assert seg.start == cur
            rules = tables[seg.rules]
            if seg.rel == "parallel":
                src, dst = (seg.end, seg.start) if seg.reverse else (seg.start, seg.end)
                wit = seg.steps[0] if seg.steps else None
                assert wit is not None
                assert wit.source == src and wit.target == dst
            else:
                src, dst = (seg.end, seg.start) if seg.reverse else (seg.start, seg.end)
                assert replay_steps(src, seg.steps, rules) == dst
                if seg.rel == "step":
                    assert len(seg.steps) == 1
                if seg.rel == "opt":
                    assert len(seg.steps) <= 1
                if seg.rel == "plus":
                    assert len(seg.steps) >= 1
            cur = seg.end
        assert cur == ev.pair_right


def assert_certs_replay(rep):
    if rep.term_cert is not None:
        assert replay_certificate(rep.s, empty_trs(), rep.term_cert)
    if rep.relterm_cert is not None:
        # huet proves relative termination against all of P, the others
        # against the (explicit or collected) P'
        rel_part = rep.p if rep.criterion == "huet" else rep.p_prime
        assert replay_certificate(rep.s, rel_part, rep.relterm_cert)
    if rep.reversibility is not None:
        assert replay_reversibility(rep.p, rep.reversibility)


# --- R3: the fully linear add system ------------------------------------------


def test_r3_all_criteria_hold():
    pt = Partition(S3, P_CA)
    for name in CRITERIA:
        rep = check_criterion(name, pt)
        assert rep.holds(), f"{name}: {rep.reason}"
        segments_replay(rep)
        assert_certs_replay(rep)


def test_r3_explicit_empty_p_prime_holds():
    pt = Partition(S3, P_CA, p_prime=empty_trs())
    for name in ("linear", "parallel", "pcp"):
        rep = check_criterion(name, pt)
        assert rep.holds(), f"{name}: {rep.reason}"
        assert rep.p_prime is not None and len(rep.p_prime) == 0
        assert "P'=[]" in rep.tag


# --- R4: duplication forces the parallel route --------------------------------


def test_r4_linear_blocked_by_nonlinearity():
    rep = check_linear(Partition(S4, P_CA))
    assert not rep.holds()
    assert "linear" in rep.reason


def test_r4_parallel_pcp_huet_hold():
    pt = Partition(S4, P_CA)
    for checker in (check_parallel, check_pcp, check_huet):
        rep = checker(pt)
        assert rep.holds(), rep.reason
        segments_replay(rep)
        assert_certs_replay(rep)


# --- R5: successor padding needs a restricted P' ------------------------------


def test_r5_linear_holds():
    rep = check_linear(Partition(S3, P5))
    assert rep.holds(), rep.reason
    segments_replay(rep)
    assert_certs_replay(rep)


def test_r5_pcp_with_empty_p_prime_fails_on_variable_condition():
    rep = check_pcp(Partition(S3, P5, p_prime=empty_trs()))
    assert not rep.holds()
    assert rep.failing
    assert any(f.origin == "pcp_in(PP,S)" for f in rep.failing)


def test_r5_pcp_with_ss2_holds():
    rep = check_pcp(Partition(S3, P5, p_prime=PPRIME_SS2))
    assert rep.holds(), rep.reason
    assert "ss2" in rep.tag
    segments_replay(rep)
    assert_certs_replay(rep)


def test_r5_pcp_auto_collects_a_safe_p_prime():
    rep = check_pcp(Partition(S3, P5))
    assert rep.holds(), rep.reason
    assert rep.p_prime is not None
    # ss1 (padding) can never be part of a relatively terminating P'
    assert not rep.p_prime.contains_variant(SS1)
    assert_certs_replay(rep)


def test_r5_huet_blocked_by_relative_termination():
    rep = check_huet(Partition(S3, P5))
    assert not rep.holds()
    assert "relative termination" in rep.reason


# --- R6: swapped recursion, no safe P' at all ----------------------------------


def test_r6_pcp_and_parallel_hold_s_only():
    # the strong claim: joins exist without any P' help at all
    pt = Partition(S6, P_CA, p_prime=empty_trs())
    for checker in (check_pcp, check_parallel):
        rep = checker(pt)
        assert rep.holds(), rep.reason
        assert rep.p_prime is not None and len(rep.p_prime) == 0
        segments_replay(rep)
        assert_certs_replay(rep)


def test_r6_pcp_auto_mode_also_holds():
    rep = check_pcp(Partition(S6, P_CA))
    assert rep.holds(), rep.reason
    segments_replay(rep)
    assert_certs_replay(rep)


def test_r6_linear_and_huet_blocked():
    rep = check_linear(Partition(S6, P_CA))
    assert not rep.holds() and "linear" in rep.reason
    rep = check_huet(Partition(S6, P_CA))
    assert not rep.holds() and "relative termination" in rep.reason


# --- R7: union of R4 and R5 ----------------------------------------------------


def test_r7_pcp_needs_ss2():
    assert check_pcp(Partition(S4, P5, p_prime=empty_trs())).holds() is False
    rep = check_pcp(Partition(S4, P5, p_prime=PPRIME_SS2))
    assert rep.holds(), rep.reason
    segments_replay(rep)
    assert_certs_replay(rep)
    auto = check_pcp(Partition(S4, P5))
    assert auto.holds(), auto.reason
    assert not auto.p_prime.contains_variant(SS1)


def test_r7_other_criteria_blocked():
    assert not check_linear(Partition(S4, P5)).holds()
    assert not check_huet(Partition(S4, P5)).holds()


# --- R8: the swap system -------------------------------------------------------


def test_r8_linear_holds_s_only():
    rep = check_linear(Partition(S8, P8))
    assert rep.holds(), rep.reason
    assert rep.p_prime is not None and len(rep.p_prime) == 0
    segments_replay(rep)
    assert_certs_replay(rep)


def test_r8_pcp_fails_on_variable_condition():
    rep = check_pcp(Partition(S8, P8))
    assert not rep.holds()
    assert rep.failing
    assert any(f.origin == "pcp_in(PP,S)" for f in rep.failing)


def test_r8_parallel_blocked_by_inner_pairs():
    rep = check_parallel(Partition(S8, P8))
    assert not rep.holds()
    assert "inner critical pairs" in rep.reason


def test_r8_huet_blocked():
    rep = check_huet(Partition(S8, P8))
    assert not rep.holds()
    assert "relative termination" in rep.reason


# --- structural ----------------------------------------------------------------


def test_partition_validation():
    with pytest.raises(PreconditionViolation):
        Partition(S3, Trs([Rule(plus(x, y), x, "proj")]))
    with pytest.raises(PreconditionViolation):
        Partition(S3, P_CA, p_prime=PPRIME_SS2)  # ss2 is not in {C,A} ∪ inverses
    pt = Partition(S3, P5, p_prime=PPRIME_SS2)  # inverse variants are accepted
    assert pt.pp.contains_variant(SS1)


def test_unknown_criterion_rejected():
    with pytest.raises(ValueError):
        check_criterion("magic", Partition(S3, P_CA))


def test_failure_reports_name_the_unjoined_pairs():
    # commutativity alone in S cannot be terminating
    rep = check_linear(Partition(Trs([Rule(plus(x, y), plus(y, x), "swap")]), empty_trs()))
    assert not rep.holds()
    assert "termination" in rep.reason
