import json

import pytest

from hdlf.cli import EXIT_PRECISION, EXIT_SCHEMA, EXIT_VIOLATION, main
from hdlf.serial import canonical, dumps

JUMPS = '{"r":1,"ebar":[3],"jumps":[["2"]],"orders":[3,1]}'


def call(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, json.loads(out) if out.strip() else None


def test_from_jumps_and_config_echo(capsys):
    status, art = call(capsys, "herbrand", "from-jumps", JUMPS)
    assert status == 0 and art["pass"]
    assert art["config"]["group"] == "herbrand" and art["config"]["input"] == JUMPS
    assert art["result"]["slopes"] == ["3", "1"]


def test_compose_and_invert(capsys, tmp_path):
    path = tmp_path / "a.json"
    path.write_text(JUMPS)
    status, art = call(capsys, "herbrand", "compose", str(path), str(path))
    assert status == 0 and art["pass"]
    status, art = call(capsys, "herbrand", "invert", json.dumps(art["result"]))
    assert status == 0 and art["pass"]


def test_last_edge(capsys):
    _, art = call(capsys, "herbrand", "last-edge", JUMPS)
    assert art["result"] == {"i": ["2"], "j": ["2"]}


def test_krasner_commands(capsys):
    _, art = call(capsys, "krasner", "locate", JUMPS, "--A", "5/2")
    assert art["result"]["a"] == ["7/2"] and art["result"]["unique"]
    _, art = call(capsys, "krasner", "disc", JUMPS)
    assert art["result"]["v_K"] == ["6"]
    status, art = call(capsys, "krasner", "check", JUMPS, "--samples", "20")
    assert status == 0 and not art["result"]["failures"]


def test_witt_commands(capsys):
    w = '{"p":2,"ring":{"type":"Z"},"comps":["1","0"]}'
    _, art = call(capsys, "witt", "add", w, w)
    assert art["result"]["comps"] == ["2", "-1"]
    _, art = call(capsys, "witt", "ghost", w)
    assert art["result"] == [1, 1]
    status, art = call(capsys, "witt", "artin-hasse", "--p", "3", "--degree", "9")
    assert status == 0 and art["result"]["report"]["congruence"]


def test_epp_run_emits_trace(capsys, tmp_path):
    _, art = call(capsys, "corpus", "gen", "--count", "4", "--seed", "5")
    datum = tmp_path / "d.json"
    datum.write_text(json.dumps(art["result"]["items"][0]))
    trace = tmp_path / "trace.json"
    status, art = call(capsys, "epp", "run", str(datum), "--steps", "50", "--emit", str(trace))
    assert status == 0 and art["result"]["terminated"]
    emitted = json.loads(trace.read_text())
    assert emitted["n_star"] == art["result"]["n_star"]
    status, art = call(capsys, "epp", "check", "--input", str(datum))
    assert status == 0 and art["result"]["within_bound"]


def test_norms_tower_certificate(capsys):
    status, art = call(capsys, "norms", "tower", "--p", "3", "--depth", "4", "--precision", "81")
    assert status == 0
    assert art["config"]["M"] == 4
    assert all(c["pass"] for c in art["result"]["certificates"])
    assert set(art["result"]["certificates"][0]) == {"level", "measured_v1", "threshold", "pass"}


def test_precision_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("HDLF_PRECISION", "6561")
    _, art = call(capsys, "norms", "epsilon", "--p", "3", "--depth", "3")
    assert art["config"]["M"] == 8


def test_norms_descend_and_duality(capsys):
    status, art = call(capsys, "norms", "descend", "--p", "3", "--depth", "4", "-M", "8", "--u", "1")
    assert status == 0 and art["result"]["pass"]
    status, art = call(capsys, "norms", "duality", "--p", "3", "--depth", "4", "-M", "8")
    assert status == 0 and art["result"]["log_arg_valuation"] == "3/2"


def test_schema_error_reports_field_path(capsys):
    status = main(["herbrand", "from-jumps", '{"r":1,"ebar":[1],"jumps":[["x"]],"orders":[3]}'])
    captured = capsys.readouterr()
    assert status == EXIT_SCHEMA
    assert "$.jumps[0][0]" in captured.err


def test_missing_field(capsys):
    status = main(["herbrand", "from-jumps", '{"r":1,"ebar":[1],"orders":[1]}'])
    assert status == EXIT_SCHEMA
    assert "jumps" in capsys.readouterr().err


def test_precision_exhaustion_exit_code(capsys):
    status, art = call(capsys, "norms", "tower", "--p", "3", "--depth", "4", "-M", "3")
    assert status == EXIT_PRECISION and art["kind"] == "PrecisionExhausted"


def test_unfinished_run_fails_the_check(capsys):
    # this datum needs four rounds; two are not enough
    datum = {"case": "c", "c": "1", "e_scale": 1,
             "xi": {"N": 2, "p": 3, "D": 1, "domain": {"type": "Fq", "p": 3, "m": 1},
                    "box": {"lo": ["-12", "-6"], "hi": ["0", "6"], "D": 1},
                    "terms": [{"exp": ["-7", "0"], "coeff": 1}, {"exp": ["-2", "1"], "coeff": 1}]}}
    status, art = call(capsys, "epp", "check", json.dumps(datum), "--steps", "2")
    assert status == EXIT_VIOLATION and art["pass"] is False


def test_schema_flag(capsys):
    assert main(["--schema"]) == 0
    schemas = json.loads(capsys.readouterr().out)
    assert {"RamJumps", "HerbrandMap", "WittVec", "ASDatum", "EisPoly"} <= set(schemas)


def test_deterministic_artifacts(capsys):
    outs = []
    for _ in range(2):
        main(["corpus", "gen", "--count", "6", "--seed", "42"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    main(["corpus", "gen", "--count", "6", "--seed", "43"])
    assert capsys.readouterr().out != outs[0]


@pytest.mark.parametrize("argv", [
    ["herbrand", "from-jumps", JUMPS],
    ["krasner", "disc", JUMPS],
    ["norms", "epsilon", "--p", "2", "--depth", "3", "-M", "4"],
    ["corpus", "gen", "--kind", "herbrand", "--count", "3"],
])
def test_round_trip_is_canonical(capsys, argv):
    main(argv)
    text = capsys.readouterr().out
    assert dumps(json.loads(text)) == text
    assert canonical(json.loads(text)) == json.loads(text)
