"""CLI exit codes, delimited tables and figure files."""

import json
import os

import pytest

from conftest import DEMO_FIXTURE
from gwflow.cli import main


@pytest.fixture
def data(tmp_path, capsys):
    d = str(tmp_path / "gw")
    assert main(["--data-dir", d, "init"]) == 0
    capsys.readouterr()  # drain the init banner
    return d


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_init_banner_and_reuse_guard(tmp_path, capsys):
    d = str(tmp_path / "gw")
    code, out, err = run(capsys, "--data-dir", d, "init")
    assert code == 0
    assert "initialized" in out
    code, out, err = run(capsys, "--data-dir", d, "init")
    assert code == 4
    assert "InUse" in err


def test_search_shows_only_visible_documents(data, capsys):
    code, out, _ = run(capsys, "--data-dir", data, "load", str(DEMO_FIXTURE))
    assert code == 0
    code, out, _ = run(capsys, "--data-dir", data, "--user", "boris", "search")
    assert code == 0
    assert out.startswith("handle|index|status|")
    assert "Bulletin" in out and "Rates" in out
    assert "Merger" not in out  # boris is not on the Merger acl
    code, out, _ = run(capsys, "--data-dir", data, "--user", "olga", "search")
    assert "Merger" in out


def test_matrix_table_and_heatmap_file(data, tmp_path, capsys):
    run(capsys, "--data-dir", data, "load", str(DEMO_FIXTURE))
    fig = str(tmp_path / "m.png")
    code, out, _ = run(capsys, "--data-dir", data, "matrix",
                       "--users", "boris,greg", "--docs", "@Bulletin,@Merger",
                       "--figure", fig)
    assert code == 0
    assert "boris|Bulletin|Allow" in out
    assert "greg|Bulletin|Deny:FlowViolation" in out
    assert "boris|Merger|Deny:NotOnAcl" in out
    assert f"figure|{fig}" in out
    assert os.path.getsize(fig) > 0


def test_classes_table_and_tree_figure(data, tmp_path, capsys):
    fig = str(tmp_path / "tree.png")
    code, out, _ = run(capsys, "--data-dir", data, "classes", "document",
                       "--figure", fig)
    assert code == 0
    assert out.startswith("id|parent|depth|name")
    assert "Contract" in out and "Other" in out
    assert os.path.getsize(fig) > 0


def test_signers_table_follows_the_role_tree(data, capsys):
    code, out, _ = run(capsys, "--data-dir", data, "signers")
    assert code == 0
    rows = dict(line.split("|") for line in out.strip().splitlines()[1:])
    assert rows["Boss"] == "yes"
    assert rows["VP"] == "yes"  # descends from Boss
    assert rows["Clerk"] == "no"
    assert rows["Secretary"] == "no"


def test_document_lifecycle_via_cli(data, capsys):
    code, out, _ = run(capsys, "--data-dir", data, "--user", "boris",
                       "doc", "create", "Door rota", "--folder", "/FrontDesk",
                       "--class", "Memo", "--level", "FrontOffice",
                       "--content", "v1")
    assert code == 0
    handle = json.loads(out)["handle"]

    code, out, _ = run(capsys, "--data-dir", data, "--user", "boris",
                       "doc", "modify", str(handle), "--content", "v2")
    assert code == 0
    code, out, _ = run(capsys, "--data-dir", data, "--user", "sonya",
                       "doc", "read", "@Door rota")
    assert code == 0
    assert json.loads(out)["content"] == "v2"

    code, out, _ = run(capsys, "--data-dir", data, "--user", "xadm",
                       "doc", "archive", str(handle))
    assert code == 0
    assert json.loads(out)["status"] == "Archived"


def test_route_cycle_and_trace_output(data, capsys):
    run(capsys, "--data-dir", data, "--user", "sonya",
        "doc", "create", "Lease", "--folder", "/FrontDesk",
        "--class", "Contract", "--level", "FrontOffice", "--content", "v1")
    code, _, _ = run(capsys, "--data-dir", data, "--user", "sonya",
                     "route", "start", "@Lease")
    assert code == 0
    code, _, _ = run(capsys, "--data-dir", data, "--user", "sonya",
                     "route", "step", "@Lease", "--action", "Modify",
                     "--content", "v2")
    assert code == 0
    code, out, _ = run(capsys, "--data-dir", data, "--user", "olga",
                       "route", "step", "@Lease", "--action", "Sign")
    assert code == 0
    assert json.loads(out)["run_status"] == "Completed"
    code, out, _ = run(capsys, "--data-dir", data, "--user", "olga",
                       "route", "trace", "@Lease")
    assert code == 0
    assert "status|Completed" in out
    assert out.count("step|") == 2


def test_policy_denial_exits_2(data, capsys):
    run(capsys, "--data-dir", data, "load", str(DEMO_FIXTURE))
    code, _, err = run(capsys, "--data-dir", data, "--user", "boris",
                       "doc", "read", "@Merger")
    assert code == 2
    assert "NotOnAcl" in err


def test_unknown_user_exits_3(data, capsys):
    code, _, err = run(capsys, "--data-dir", data, "--user", "nobody", "search")
    assert code == 3
    assert "UnknownUser" in err


def test_malformed_fixture_exits_4(data, tmp_path, capsys):
    bad = tmp_path / "bad.gwf"
    bad.write_text("bogus.op x=1\n")
    code, _, err = run(capsys, "--data-dir", data, "load", str(bad))
    assert code == 4
    assert "bad.gwf:1" in err


def test_audit_tail_lists_past_denials(data, capsys):
    run(capsys, "--data-dir", data, "load", str(DEMO_FIXTURE))
    run(capsys, "--data-dir", data, "--user", "boris", "doc", "read", "@Merger")
    code, out, _ = run(capsys, "--data-dir", data, "audit", "tail", "-n", "5")
    assert code == 0
    assert out.startswith("seq|user|action|target|reason")
    assert "NotOnAcl" in out


def test_snapshot_compacts_the_event_log(data, capsys):
    code, out, _ = run(capsys, "--data-dir", data, "snapshot")
    assert code == 0
    assert "digest" in out
    assert os.path.getsize(os.path.join(data, "events.log")) == 0
    # the store still opens and serves reads afterwards
    code, out, _ = run(capsys, "--data-dir", data, "classes", "role")
    assert code == 0 and "Boss" in out


def test_env_vars_pick_data_dir_and_user(tmp_path, capsys, monkeypatch):
    d = str(tmp_path / "envgw")
    monkeypatch.setenv("GW_DATA_DIR", d)
    assert main(["init"]) == 0
    monkeypatch.setenv("GW_USER", "boris")
    capsys.readouterr()
    code, out, _ = run(capsys, "search")
    assert code == 0
    assert out.startswith("handle|index|status|")
