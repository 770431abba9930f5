import random

import pytest

from fisengine.kernel import AxiomBase, Wff
from fisengine.representation import (ACTUALLY_TRUE, CONDITIONALLY_TRUE, FALSE, UNDECIDABLE,
                                      HypothesisParseError, Representation, RepresentationError,
                                      Sentence, TeachError, parse_hypothesis)
from oracles import build_base, random_hypothesis, resolve_oracle, teacher_oracle


@pytest.fixture
def rep():
    return build_base(Representation(AxiomBase()))


def verdict(rep, text):
    v = rep.resolve(parse_hypothesis(text))
    return v.status, v.criterion, v.bindings


def test_parse_examples():
    h = parse_hypothesis("left(Michael, home, 14:00)")
    assert h.body.ground and len(h.body.slots) == 3 and not h.negated
    h = parse_hypothesis("left(?who, home, _)")
    assert [s.kind for s in h.body.slots] == ["variable", "ground", "variable"]
    assert parse_hypothesis("not died(Turing, 1954)").negated
    with pytest.raises(HypothesisParseError):
        parse_hypothesis("not left(Michael, !home, _)")
    with pytest.raises(HypothesisParseError) as err:
        parse_hypothesis("left(Michael home)")
    assert err.value.position == 13


def test_criterion_3_actant_conflict(rep):
    assert verdict(rep, "left(Michael, home, 14:00)") == (FALSE, 3, ())


def test_criterion_4_hereditary(rep):
    assert verdict(rep, "lives-eternally(human)") == (FALSE, 4, ())
    assert verdict(rep, "lives-eternally(robot)")[0] == ACTUALLY_TRUE


def test_criterion_1_unknown_symbols(rep):
    assert verdict(rep, "flies(Michael)") == (FALSE, 1, ())
    assert verdict(rep, "left(Zed, home, 8:30)") == (FALSE, 1, ())


def test_criterion_2_outside_locus(rep):
    assert verdict(rep, "lives(Turing, home)") == (FALSE, 2, ())


def test_scheme_2_negation(rep):
    assert verdict(rep, "not lives(Turing, home)")[0] == ACTUALLY_TRUE
    assert verdict(rep, "not left(Michael, work, 8:30)") == (FALSE, 2, ())


def test_scheme_3_negated_actant(rep):
    assert verdict(rep, "lives(Bob, !work)") == (FALSE, 2, ())
    assert verdict(rep, "died(Turing, !8:30)")[0] == ACTUALLY_TRUE


def test_variable_binding(rep):
    status, _, binds = verdict(rep, "died(?x, 1954)")
    assert status == ACTUALLY_TRUE and binds == (("x", "Turing"),)
    assert verdict(rep, "lives-eternally(?k)")[0] == ACTUALLY_TRUE


def test_conditionally_true_when_unbindable():
    rep = Representation(AxiomBase())
    rep.declare("owns", 2, ("person", "thing"))
    rep.fact("owns(Ann,car)")
    rep.sd("bike")
    rep.chain("owns", "bike")
    assert verdict(rep, "owns(?p, bike)")[0] in (ACTUALLY_TRUE, FALSE)
    rep2 = Representation(AxiomBase())
    rep2.declare("owns", 2, ("person", "thing"))
    rep2.sd("x")
    rep2.chain("owns", "x")
    assert verdict(rep2, "owns(?p, ?q)")[0] == CONDITIONALLY_TRUE


def test_isolation(rep):
    rep.link_enabled = False
    assert verdict(rep, "died(?x, 1954)")[0] == UNDECIDABLE
    assert verdict(rep, "died(Turing,1954)")[0] == ACTUALLY_TRUE
    assert verdict(rep, "not died(Turing,1954)") == (FALSE, 2, ())


def test_scheme_duality_on_single_ground_actant(rep):
    for sym in ("human", "robot", "Michael", "Zed"):
        pos = verdict(rep, f"lives-eternally({sym})")[0]
        neg = verdict(rep, f"not lives-eternally({sym})")[0]
        assert (pos == ACTUALLY_TRUE) == (neg == FALSE)


def test_matches_brute_force_oracle(rep):
    rng = random.Random(11)
    for _ in range(300):
        h = parse_hypothesis(random_hypothesis(rng, rep))
        v = rep.resolve(h)
        assert (v.status, v.criterion, v.bindings) == resolve_oracle(rep, h), h.text()


def test_commit(rep):
    h = parse_hypothesis("died(?x, 1954)")
    v = rep.resolve(h)
    a2 = list(rep.A2)
    rep.commit(h, v)
    assert rep.A2 == a2  # the substituted sentence was already there
    h = parse_hypothesis("lives-eternally(robot)")
    rep.commit(h, rep.resolve(h))
    assert rep.A2[-1] == "lives-eternally(robot)"
    rep.commit(h, rep.resolve(h))
    assert rep.A2.count("lives-eternally(robot)") == 1
    bad = parse_hypothesis("left(Michael, home, 14:00)")
    rep.commit(bad, rep.resolve(bad))
    assert rep.R2 == ["left(Michael,home,14:00)"]
    rep.link_enabled = False
    with pytest.raises(RepresentationError):
        rep.commit(bad, rep.resolve(bad))


def test_teach_min_intersection_and_antitone():
    ax = AxiomBase()
    rep = Representation(ax)
    seqs = ["xxabcdyy", "zabcdz", "qqbcdq"]
    ids = [ax.number_axiom(Wff("sbc", tuple(s))) for s in seqs]
    idx, concept = rep.teach(ids[:2], "thing")
    assert concept == teacher_oracle([tuple(s) for s in seqs[:2]])
    idx2, smaller = rep.teach(ids[2:], "thing")
    assert len(smaller) <= len(concept)
    assert idx2 in rep.sds["thing"].bindings
    with pytest.raises(TeachError):
        rep.teach(ids[:1], "fresh")
    other = ax.number_axiom(Wff("sbc", ("m", "n")))
    with pytest.raises(TeachError, match="no common feature"):
        rep.teach([ids[0], other], "odd")
    assert verdict(rep, "is-a(thing)")[0] == ACTUALLY_TRUE


def test_sentence_identification(rep):
    assert rep.resolve_sentence(Sentence("died", ("Turing", "1954")))
    assert not rep.resolve_sentence(Sentence("died", ("Turing", "home")))


def test_closure_and_round_trip(rep):
    assert rep.closure_failures() == []
    lines = rep.dump()
    again = Representation(rep.axioms, builtin=False)
    for line in lines:
        again.load_line(line.split(" "), line)
    assert again.dump() == lines
    assert again.facts == rep.facts
