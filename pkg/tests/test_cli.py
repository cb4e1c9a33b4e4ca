import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dijoinlat import cli
from dijoinlat.apps import min_dicut_shores


def call(argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin)
    try:
        code = cli.run(argv, out, err)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def cert(argv, **kw):
    code, out, err = call(argv, **kw)
    assert code == 0, err
    return json.loads(out)


def test_verify_fixtures():
    for name in ("p2", "k22"):
        c = cert(["verify", "--fixture", name])
        res = c["result"]
        assert res["slack"] == 0 and res["basic"] and res["robust"]
        assert c["ok"] and all(c["checks"].values())


def test_basis_p2():
    res = cert(["basis", "--fixture", "p2"])["result"]
    assert res["oracle"]["basis"] == [["a1"], ["a2"]]
    assert res["oracle"]["divisors"] == [1, 1] == res["recursive"]["divisors"]


def test_basis_non_bipartite_scr_face():
    text = cli.dump_instance(cli.random_instance("digraph", 4))
    inst = cli.parse_instance(text)
    d = inst.digraph
    _, shores = min_dicut_shores(d)
    fam = "".join(json.dumps({"family": sorted(d.vertex_ids(u), key=d.vindex.get)}) + "\n"
                  for u in shores)
    c = cert(["basis", "--method", "oracle", "-"], stdin=text + fam)
    assert c["result"]["face"] in ("scr", "dij") and c["ok"]


def test_basis_gcd_note():
    text = "\n".join([
        '{"format": "dijoinlat-instance", "version": 1, "kind": "digraph"}',
        '{"vertex": "p"}', '{"vertex": "q"}', '{"vertex": "r"}',
        '{"arc": "a", "tail": "p", "head": "q"}', '{"arc": "b", "tail": "q", "head": "p"}',
        '{"arc": "c", "tail": "q", "head": "p"}', '{"arc": "e", "tail": "q", "head": "p"}',
        '{"arc": "f", "tail": "p", "head": "r"}', '{"arc": "g", "tail": "r", "head": "q"}',
        '{"family": ["p"]}'])
    c = cert(["basis", "-"], stdin=text)
    assert c["result"]["g"] == 2 and "gcd" in c["result"]["note"]


def test_partition_padic_orient():
    res = cert(["partition", "--fixture", "p2"])["result"]
    assert sorted(t["lambda"] for t in res["terms"]) == [1, 1] and res["tau"] == 2
    c = cert(["padic", "--prime", "3", "--fixture", "k22"])
    assert c["result"]["value"] == "2/1" and c["ok"]
    res = cert(["orient", "--fixture", "triangle"])["result"]
    assert len(res["terms"]) == 2 and all(t["lambda"] == 1 for t in res["terms"])


def test_exit_codes():
    code, _, err = call(["verify", "-"], stdin='{"format": "nope"}\n')
    assert code == 2 and json.loads(err)["error"] == "InvalidInput"
    code, _, _ = call(["verify", "--fixture", "missing"])
    assert code == 2
    code, _, err = call(["padic", "--prime", "4", "--fixture", "p2"])
    assert code == 3
    code, _, _ = call(["orient", "--fixture", "p2"])
    assert code == 2
    path = '\n'.join(['{"format": "dijoinlat-instance", "version": 1, "kind": "hypergraph"}',
                      '{"vertex": "1"}', '{"vertex": "2"}', '{"vertex": "3"}',
                      '{"edge": "e0", "vertices": ["1", "2"]}',
                      '{"edge": "e1", "vertices": ["2", "3"]}'])
    code, _, err = call(["orient", "-"], stdin=path)
    assert code == 3 and "X =" in json.loads(err)["message"]


def test_tampered_certificate_fails():
    inst = cli.fixture_instance("p2")
    c = cert(["partition", "--fixture", "p2"])
    res = c["result"]
    res["terms"][0]["lambda"] = 2
    checks = cli.recheck(inst, "partition", res)
    assert not checks["sum_is_ones"] and not checks["lambda_sum_is_tau"]


def test_theorem_violation_exit(monkeypatch):
    def broken(inst, args):
        return {"tau": 2, "min_dicut_shores": [["u"]], "terms": [{"dijoin": ["a1"], "lambda": 2}]}
    monkeypatch.setitem(cli.COMMANDS, "partition", broken)
    code, out, _ = call(["partition", "--fixture", "p2"])
    assert code == 4 and not json.loads(out)["ok"]


@pytest.mark.parametrize("text, msg", [
    ("", "empty"),
    ('{"format": "dijoinlat-instance", "version": 2, "kind": "digraph"}', "version"),
    ('{"format": "dijoinlat-instance", "version": 1, "kind": "digraph"}\n{"vertex": 3}',
     "unrecognised"),
    ('{"format": "dijoinlat-instance", "version": 1, "kind": "digraph"}\n'
     '{"vertex": "u"}\n{"arc": "a", "tail": "u"}', "lacks"),
    ('{"format": "dijoinlat-instance", "version": 1, "kind": "digraph"}\n{oops', "line 2"),
    ('{"format": "dijoinlat-instance", "version": 1, "kind": "digraph"}\n'
     '{"vertex": "u"}\n{"vertex": "v"}\n{"arc": "a", "tail": "u", "head": "v", "weight": 0.5}',
     "rational"),
])
def test_malformed_files(text, msg):
    with pytest.raises(cli.InvalidInput, match=msg):
        cli.parse_instance(text)


def test_parse_dump_round_trip():
    for name in ("p2", "k22", "serial-join", "triangle"):
        inst = cli.fixture_instance(name)
        text = cli.dump_instance(inst)
        again = cli.parse_instance("# comment\n\n" + text)
        assert cli.dump_instance(again) == text


def test_q_format():
    assert cli.q(2) == "2/1" and cli.parse_q("3/9") == cli.parse_q("1/3")


def test_deterministic_output():
    outs = {call(["basis", "--fixture", "serial-join"])[1] for _ in range(2)}
    assert len(outs) == 1


def test_fixtures_commands():
    code, out, _ = call(["fixtures", "list"])
    assert code == 0 and out.splitlines()[0].startswith("p2\t")
    code, out, _ = call(["fixtures", "show", "k22"])
    assert code == 0 and cli.parse_instance(out).digraph.m == 4
    code, _, _ = call(["fixtures", "show", "nope"])
    assert code == 2
    a = call(["fixtures", "random", "--kind", "digraft", "--seed", "7"])[1]
    assert a == call(["fixtures", "random", "--kind", "digraft", "--seed", "7"])[1]


@settings(max_examples=10)
@given(st.integers(0, 10**6), st.sampled_from(["verify", "basis"]))
def test_recheck_reproduces_checks(seed, command):
    text = cli.dump_instance(cli.random_instance("digraft", seed))
    c = cert([command, "-"], stdin=text)
    inst = cli.parse_instance(text)
    assert cli.recheck(inst, command, c["result"]) == c["checks"]
    assert c["instance"]["sha256"] == cli.instance_hash(inst)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dijoinlat.cli", "verify", "--fixture", "p2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["ok"]
