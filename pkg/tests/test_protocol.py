import json

import pytest

from boxtune import (
    ConfigMsg,
    Constraint,
    ErrorMsg,
    EvalFailure,
    EvalReply,
    EvalRequest,
    MalformedJson,
    ResultMsg,
    SchemaViolation,
)
from boxtune.protocol import decode, encode


def sample_config(**overrides):
    fields = dict(
        solver="pso",
        settings={"num_particles": 10},
        space={"x": (0.0, 1.0), "y": (-2.0, 2.0)},
        direction="maximize",
        max_evals=50,
        seed=7,
    )
    fields.update(overrides)
    return ConfigMsg(**fields)


ALL_MESSAGES = [
    sample_config(),
    sample_config(constraints=(Constraint("range", "x", (0.1, 0.9)),)),
    EvalRequest(request_id=0, candidates=({"x": 0.5, "y": 1.0},)),
    EvalReply(request_id=0, values=(1.5, EvalFailure("ValueError: bad"), -2.0)),
    ResultMsg(solution={"x": 0.5}, optimum=1.25, num_evals=50, time=0.75),
    ErrorMsg(error="unexpected message in phase solving"),
]


def test_roundtrip_identity_for_every_message_type():
    for msg in ALL_MESSAGES:
        assert decode(encode(msg)) == msg


def test_encoding_is_canonical_bytes():
    msg = EvalReply(request_id=3, values=(1.0, 2.5))
    line = encode(msg)
    assert line == b'{"request_id":3,"values":[1.0,2.5]}\n'
    assert line == encode(decode(line))


def test_config_encoding_sorts_keys_and_omits_empty_constraints():
    line = encode(sample_config())
    obj = json.loads(line)
    assert "constraints" not in obj
    keys = list(obj)
    assert keys == sorted(keys)
    assert obj["space"] == {"x": [0.0, 1.0], "y": [-2.0, 2.0]}

    with_constraints = encode(sample_config(constraints=(Constraint("lower_open", "x", (0.2,)),)))
    obj = json.loads(with_constraints)
    assert obj["constraints"] == [{"kind": "lower_open", "dim": "x", "bounds": [0.2]}]


def test_result_nests_stats_on_the_wire():
    obj = json.loads(encode(ResultMsg(solution={"x": 1.0}, optimum=2.0, num_evals=9, time=0.5)))
    assert obj == {
        "solution": {"x": 1.0},
        "optimum": 2.0,
        "stats": {"num_evals": 9, "time": 0.5},
    }


def test_eval_failures_travel_as_error_objects():
    obj = json.loads(encode(EvalReply(request_id=1, values=(EvalFailure("boom"), 2.0))))
    assert obj["values"] == [{"error": "boom"}, 2.0]
    back = decode(encode(EvalReply(request_id=1, values=(EvalFailure("boom"), 2.0))))
    assert back.values == (EvalFailure("boom"), 2.0)


def test_decode_rejects_malformed_json():
    with pytest.raises(MalformedJson):
        decode(b"{not json}\n")
    with pytest.raises(MalformedJson):
        decode(b"\xff\xfe\n")
    with pytest.raises(SchemaViolation):
        decode(b"[1, 2, 3]\n")


def test_decode_rejects_non_finite_constants():
    with pytest.raises(MalformedJson):
        decode(b'{"request_id":0,"values":[NaN]}\n')
    with pytest.raises(MalformedJson):
        decode(b'{"request_id":0,"values":[Infinity]}\n')
    with pytest.raises(SchemaViolation):
        EvalReply(request_id=0, values=(float("nan"),))


def test_discrimination_by_top_level_keys():
    assert isinstance(decode(encode(sample_config())), ConfigMsg)
    assert isinstance(
        decode(b'{"candidates":[{"x":1.0}],"request_id":0}\n'), EvalRequest
    )
    assert isinstance(decode(b'{"request_id":0,"values":[1.0]}\n'), EvalReply)
    assert isinstance(
        decode(b'{"optimum":1.0,"solution":{"x":1.0},"stats":{"num_evals":1,"time":0.0}}\n'),
        ResultMsg,
    )
    assert isinstance(decode(b'{"error":"x"}\n'), ErrorMsg)
    with pytest.raises(SchemaViolation):
        decode(b'{"request_id":0}\n')


def test_schema_violations_name_the_field():
    with pytest.raises(SchemaViolation, match="max_evals"):
        sample_config(max_evals=0)
    with pytest.raises(SchemaViolation, match="direction"):
        sample_config(direction="up")
    with pytest.raises(SchemaViolation, match="space"):
        sample_config(space={})
    with pytest.raises(SchemaViolation, match=r"space\['x'\]"):
        sample_config(space={"x": (0.0,)})
    with pytest.raises(SchemaViolation, match="seed"):
        sample_config(seed="zero")
    with pytest.raises(SchemaViolation, match="request_id"):
        EvalRequest(request_id=-1, candidates=({"x": 1.0},))
    with pytest.raises(SchemaViolation, match="candidates"):
        EvalRequest(request_id=0, candidates=())
    with pytest.raises(SchemaViolation, match=r"candidates\[0\]\['x'\]"):
        EvalRequest(request_id=0, candidates=({"x": "big"},))
    with pytest.raises(SchemaViolation, match="values"):
        EvalReply(request_id=0, values=())
    with pytest.raises(SchemaViolation, match="optimum"):
        ResultMsg(solution={"x": 1.0}, optimum=float("inf"), num_evals=1, time=0.0)
    with pytest.raises(SchemaViolation, match="unknown field"):
        decode(
            b'{"junk":1,"optimum":1.0,"solution":{"x":1.0},'
            b'"stats":{"num_evals":1,"time":0.0}}\n'
        )
    with pytest.raises(SchemaViolation, match="missing field"):
        decode(b'{"candidates":[{"x":1.0}]}\n')
    with pytest.raises(SchemaViolation, match="cannot discriminate"):
        decode(b'{"error":"x","extra":1}\n')


def test_booleans_are_not_numbers():
    with pytest.raises(SchemaViolation):
        EvalReply(request_id=0, values=(True,))
    with pytest.raises(SchemaViolation):
        sample_config(max_evals=True)


def test_reply_value_objects_must_be_exactly_error():
    with pytest.raises(SchemaViolation):
        decode(b'{"request_id":0,"values":[{"error":"x","code":2}]}\n')
    with pytest.raises(SchemaViolation):
        decode(b'{"request_id":0,"values":[{"message":"x"}]}\n')


def test_decode_accepts_str_and_bytes():
    line = encode(ErrorMsg(error="boom"))
    assert decode(line) == decode(line.decode("utf-8")) == ErrorMsg(error="boom")
