import pytest
from hypothesis import given, strategies as st

from hyjump.model import JumpScenario, ModelError, ModelSpec, ScenarioTag, theoretical_qcov, validate_model


def reference_spec(rho=0.5, jumps=()):
    return ModelSpec((0.1, 0.1), 1.0, 1.0, rho, 1.0, JumpScenario.from_triples(jumps))


def test_valid_spec_returned_unchanged():
    spec = reference_spec()
    assert validate_model(spec) is spec


@pytest.mark.parametrize(
    "kwargs, message",
    [
        (dict(rho=1.5), "rho out of [-1,1]"),
        (dict(vol1=0.0), "vol1 must be positive"),
        (dict(vol2=-1.0), "vol2 must be positive"),
        (dict(horizon=1.5), "horizon out of (0,1]"),
        (dict(jumps=JumpScenario.from_triples([(0.0, 1, 1)])), "jump time must be interior"),
        (dict(jumps=JumpScenario.from_triples([(1.0, 1, 1)])), "jump time must be interior"),
        (dict(jumps=JumpScenario.from_triples([(0.5, 1, 1), (0.4, 1, 0)])), "strictly increasing"),
        (dict(jumps=JumpScenario.from_triples([(0.5, 0, 0)])), "at least one component"),
    ],
)
def test_invalid_specs(kwargs, message):
    with pytest.raises(ModelError, match=message.replace("[", r"\[").replace("(", r"\(")):
        validate_model(ModelSpec(**kwargs))


def test_qcov_with_cojump():
    assert theoretical_qcov(reference_spec(0.5, [(0.3, 1, 1)]), 1.0) == pytest.approx(1.5)


def test_qcov_idiosyncratic_jumps_contribute_nothing():
    spec = reference_spec(0.0, [(0.2, 1, 0), (0.7, 0, 1)])
    assert theoretical_qcov(spec, 1.0) == 0.0


def test_qcov_before_first_jump_is_continuous_part():
    spec = ModelSpec(vol1=2.0, vol2=0.5, rho=0.3, jumps=JumpScenario.from_triples([(0.5, 1, 1)]))
    assert theoretical_qcov(spec, 1e-9) == pytest.approx(0.3 * 2.0 * 0.5 * 1e-9)
    assert theoretical_qcov(spec, 0.4) == pytest.approx(0.3 * 0.4)


@pytest.mark.parametrize("t", [0.0, -0.1, 1.01])
def test_qcov_rejects_t(t):
    with pytest.raises(ModelError):
        theoretical_qcov(reference_spec(), t)


def test_scenario_tag_parse():
    assert ScenarioTag.parse("sc2") is ScenarioTag.SC2
    with pytest.raises(ModelError):
        ScenarioTag.parse("Sc9")


@given(
    rho=st.floats(-1, 1),
    v1=st.floats(0.1, 3),
    v2=st.floats(0.1, 3),
    split=st.floats(0.05, 0.95),
    times=st.lists(st.floats(0.01, 0.99), min_size=0, max_size=4, unique=True),
)
def test_qcov_additive_and_jump_free_reduction(rho, v1, v2, split, times):
    times = sorted(times)
    jumps = JumpScenario.from_triples([(u, 1.0 + k, 0.5 - k) for k, u in enumerate(times)])
    spec = validate_model(ModelSpec((0, 0), v1, v2, rho, 1.0, jumps))
    whole = theoretical_qcov(spec, 1.0)
    left = theoretical_qcov(spec, split)
    right = whole - left
    expected_right = rho * v1 * v2 * (1 - split) + sum(
        j.size1 * j.size2 for j in jumps if j.time > split
    )
    assert right == pytest.approx(expected_right, abs=1e-12)
    assert theoretical_qcov(spec.without_jumps(), 1.0) == pytest.approx(rho * v1 * v2)


def test_spot_covariance_psd():
    spec = reference_spec(rho=-1.0)
    cov = spec.spot_covariance
    assert cov[0, 1] == pytest.approx(-1.0)
    assert cov[1, 1] == pytest.approx(1.0)
