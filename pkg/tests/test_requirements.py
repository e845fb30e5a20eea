import random
from dataclasses import dataclass, field

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from formation_genius import (
    FilterOutcome,
    Requirement,
    RequirementKind,
    TypeMismatch,
    ValidationError,
    check,
    filter_alternatives,
)
from formation_genius.requirements import parse_requirement, requirement_to_doc


@dataclass
class FakeAlt:
    id: str
    numerical: dict = field(default_factory=dict)
    non_numerical: dict = field(default_factory=dict)

    def numeric_value(self, key):
        return self.numerical.get(key)

    def text_value(self, key):
        return self.non_numerical.get(key)


PRICE = "Hourly License Price"
OS = "Operating System (OS)"


def test_max_is_strict():
    req = Requirement.maximum(PRICE, 0.50)
    assert check(req, FakeAlt("a", {PRICE: 0.30}))
    assert not check(req, FakeAlt("a", {PRICE: 0.50}))
    assert not check(req, FakeAlt("a", {PRICE: 0.51}))


def test_min_is_strict():
    req = Requirement.minimum("Popularity", 40.0)
    assert check(req, FakeAlt("a", {"Popularity": 40.5}))
    assert not check(req, FakeAlt("a", {"Popularity": 40.0}))


def test_equals_and_one_of():
    assert check(Requirement.equals(OS, "Linux"), FakeAlt("a", {}, {OS: "Linux"}))
    assert not check(Requirement.one_of(OS, {"Linux"}), FakeAlt("a", {}, {OS: "Windows"}))
    assert check(Requirement.one_of(OS, {"Linux", "Windows"}), FakeAlt("a", {}, {OS: "Windows"}))


def test_missing_attribute_fails_closed():
    assert not check(Requirement.maximum(PRICE, 1.0), FakeAlt("a"))
    assert not check(Requirement.equals(OS, "Linux"), FakeAlt("a"))


def test_type_mismatch_both_directions():
    with pytest.raises(TypeMismatch):
        check(Requirement.maximum(OS, 1.0), FakeAlt("a", {}, {OS: "Linux"}))
    with pytest.raises(TypeMismatch):
        check(Requirement.equals(PRICE, "cheap"), FakeAlt("a", {PRICE: 1.0}))


def test_requirement_shape_invariants():
    with pytest.raises(ValidationError):
        Requirement(PRICE, RequirementKind.MAX)
    with pytest.raises(ValidationError):
        Requirement(PRICE, RequirementKind.MAX, numeric_bound=1.0, text_value="x")
    with pytest.raises(ValidationError):
        Requirement(OS, RequirementKind.ONE_OF, text_set=frozenset())


def test_filter_level_zero():
    reqs = [Requirement.maximum(PRICE, 0.5), Requirement.equals(OS, "Linux")]
    alts = [
        FakeAlt("a", {PRICE: 0.3}, {OS: "Linux"}),
        FakeAlt("b", {PRICE: 0.9}, {OS: "Linux"}),
        FakeAlt("c", {PRICE: 0.3}, {OS: "Windows"}),
    ]
    outcome = filter_alternatives(reqs, alts)
    assert outcome.survivors == ("a",)
    assert outcome.relaxation_level == 0
    assert outcome.dropped == {"a": ()}


def test_filter_level_one_takes_union_of_single_violators():
    reqs = [Requirement.maximum(PRICE, 0.5), Requirement.equals(OS, "Linux")]
    alts = [
        FakeAlt("a", {PRICE: 0.9}, {OS: "Linux"}),     # violates price only
        FakeAlt("b", {PRICE: 0.3}, {OS: "Windows"}),   # violates OS only
        FakeAlt("c", {PRICE: 0.9}, {OS: "Windows"}),   # violates both
    ]
    outcome = filter_alternatives(reqs, alts)
    assert outcome.survivors == ("a", "b")
    assert outcome.relaxation_level == 1
    assert outcome.dropped == {"a": (0,), "b": (1,)}


def test_filter_terminates_at_requirement_count():
    reqs = [Requirement.maximum(PRICE, 0.1), Requirement.equals(OS, "BeOS")]
    alts = [FakeAlt(f"x{i}", {PRICE: 1.0}, {OS: "Linux"}) for i in range(4)]
    outcome = filter_alternatives(reqs, alts)
    assert outcome.relaxation_level == 2
    assert outcome.survivors == tuple(sorted(a.id for a in alts))
    assert all(set(v) == {0, 1} for v in outcome.dropped.values())


def test_relaxation_can_be_disabled():
    reqs = [Requirement.maximum(PRICE, 0.1)]
    alts = [FakeAlt("a", {PRICE: 1.0})]
    outcome = filter_alternatives(reqs, alts, max_level=0)
    assert outcome.survivors == ()
    assert outcome.relaxation_level == 0


def test_empty_alternatives_survive_nothing():
    outcome = filter_alternatives([Requirement.maximum(PRICE, 1.0)], [])
    assert outcome.survivors == ()
    assert outcome.candidates == ()


def _random_case(rng):
    reqs = []
    for _ in range(rng.randint(0, 6)):
        if rng.random() < 0.7:
            kind = rng.choice(["max", "min"])
            reqs.append({"attr": rng.choice(["p", "q"]), "kind": kind, "value": rng.uniform(0, 10)})
        else:
            reqs.append({"attr": "t", "kind": "equals", "value": rng.choice(["x", "y"])})
    alts = []
    for i in range(rng.randint(1, 20)):
        numerical = {}
        for attr in ("p", "q"):
            if rng.random() < 0.9:
                numerical[attr] = rng.uniform(0, 10)
        non_numerical = {"t": rng.choice(["x", "y"])} if rng.random() < 0.9 else {}
        alts.append({"id": f"a{i:02d}", "numerical": numerical, "nonNumerical": non_numerical})
    return reqs, alts


def _engine_alts(alts):
    return [FakeAlt(a["id"], a["numerical"], a["nonNumerical"]) for a in alts]


def _engine_reqs(req_docs):
    return [parse_requirement(doc) for doc in req_docs]


def test_filter_agrees_with_bruteforce_oracle():
    rng = random.Random(7)
    for _ in range(300):
        req_docs, alt_docs = _random_case(rng)
        outcome = filter_alternatives(_engine_reqs(req_docs), _engine_alts(alt_docs))
        survivors, level = oracle.relaxed_survivors(req_docs, alt_docs)
        assert list(outcome.survivors) == survivors
        assert outcome.relaxation_level == level


def test_monotonicity_of_relaxation_levels():
    rng = random.Random(8)
    for _ in range(100):
        req_docs, alt_docs = _random_case(rng)
        reqs, alts = _engine_reqs(req_docs), _engine_alts(alt_docs)
        previous: set[str] = set()
        for level in range(len(reqs) + 1):
            survivors = {
                a.id
                for a in alts
                if sum(not check(r, a) for r in reqs) <= level
            }
            assert previous <= survivors
            previous = survivors


def test_adding_requirement_never_grows_level_zero_set():
    rng = random.Random(9)
    for _ in range(100):
        req_docs, alt_docs = _random_case(rng)
        alts = _engine_alts(alt_docs)
        reqs = _engine_reqs(req_docs)
        base = {a.id for a in alts if all(check(r, a) for r in reqs)}
        extra = Requirement.maximum("p", rng.uniform(0, 10))
        tightened = {a.id for a in alts if all(check(r, a) for r in [*reqs, extra])}
        assert tightened <= base


@given(
    bound=st.floats(min_value=0, max_value=10, allow_nan=False),
    value=st.floats(min_value=0, max_value=10, allow_nan=False),
)
@settings(max_examples=200)
def test_max_min_strictness_property(bound, value):
    alt = FakeAlt("a", {"p": value})
    assert check(Requirement.maximum("p", bound), alt) == (value < bound)
    assert check(Requirement.minimum("p", bound), alt) == (value > bound)


def test_requirement_doc_round_trip():
    docs = [
        {"attr": PRICE, "kind": "max", "value": 0.5},
        {"attr": "Popularity", "kind": "min", "value": 10.0},
        {"attr": OS, "kind": "equals", "value": "Linux"},
        {"attr": OS, "kind": "oneOf", "values": ["Linux", "Windows"]},
    ]
    for doc in docs:
        req = parse_requirement(doc)
        assert parse_requirement(requirement_to_doc(req)) == req


def test_parse_rejects_malformed_docs():
    from formation_genius import ParseError

    bad = [
        {"kind": "max", "value": 1},
        {"attr": "p", "kind": "between", "value": 1},
        {"attr": "p", "kind": "max", "value": "high"},
        {"attr": "t", "kind": "oneOf", "values": []},
    ]
    for doc in bad:
        with pytest.raises(ParseError):
            parse_requirement(doc)


def test_outcome_invariants_hold():
    reqs = [Requirement.maximum(PRICE, 0.5)]
    alts = [FakeAlt("a", {PRICE: 0.4}), FakeAlt("b", {PRICE: 0.6})]
    outcome = filter_alternatives(reqs, alts)
    assert isinstance(outcome, FilterOutcome)
    assert outcome.relaxation_level == 0
    assert all(len(v) <= outcome.relaxation_level for v in outcome.dropped.values())
