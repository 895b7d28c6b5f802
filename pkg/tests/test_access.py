"""Access decisions: role gates, secrecy rules, grants, flow, matrix."""

import pytest

from conftest import GOLDEN, doc_by_title, user_id
from gwflow import report
from gwflow.access import (
    Action,
    REASON_ADMIN_ONLY,
    REASON_FLOW_VIOLATION,
    REASON_NO_SIGN_RIGHT,
    REASON_NOT_IN_WORKGROUP,
    REASON_NOT_ON_ACL,
    REASON_OUTSIDE_GRANT,
    SYSTEM_USER,
    check_access,
)
from gwflow.engine import q_matrix, q_sign_matrix
from gwflow.errors import AccessDenied


def decide(engine, who, action, target):
    return check_access(engine.state, user_id(engine, who), Action(action), target)


def test_system_principal_bypasses_policy(demo):
    doc = doc_by_title(demo, "Merger")
    d = check_access(demo.state, SYSTEM_USER, Action.DELETE, doc.handle)
    assert d.allowed


def test_public_document_needs_attached_workgroup(demo):
    doc = doc_by_title(demo, "Bulletin")
    assert decide(demo, "boris", "Read", doc.handle).allowed
    # xadm belongs to no workgroup: attached-chain rule denies
    d = decide(demo, "xadm", "Read", doc.handle)
    assert (d.allowed, d.reason) == (False, REASON_NOT_IN_WORKGROUP)


def test_private_document_needs_owning_workgroup(demo):
    doc = doc_by_title(demo, "Rates")
    assert doc.label.groups == {1}  # front-office owns it
    assert decide(demo, "sonya", "Read", doc.handle).allowed
    d = decide(demo, "vera", "Read", doc.handle)  # accounting only
    assert (d.allowed, d.reason) == (False, REASON_NOT_IN_WORKGROUP)


def test_confidential_document_is_acl_only(demo):
    doc = doc_by_title(demo, "Merger")
    assert decide(demo, "olga", "Read", doc.handle).allowed   # on the ACL
    assert decide(demo, "greg", "Read", doc.handle).allowed   # owner, auto ACL
    d = decide(demo, "boris", "Read", doc.handle)
    assert (d.allowed, d.reason) == (False, REASON_NOT_ON_ACL)
    # membership in the attached workgroups does not rescue Confidential
    d = decide(demo, "sonya", "Read", doc.handle)
    assert d.reason == REASON_NOT_ON_ACL


def test_acl_pass_still_hits_the_flow_gate(demo):
    doc = doc_by_title(demo, "Merger")
    seq, _ = demo.execute("acl.add", SYSTEM_USER,
                          {"doc": doc.handle, "user": "boyan"})
    # boyan holds Public clearance at the Reception level: the label
    # (Accounting, Confidential) cannot flow to him
    d = decide(demo, "boyan", "Read", doc.handle)
    assert (d.allowed, d.reason) == (False, REASON_FLOW_VIOLATION)


def test_level_component_blocks_cross_unit_reads(demo):
    # Bulletin sits at FrontOffice; greg's level is Accounting, a sibling
    doc = doc_by_title(demo, "Bulletin")
    d = decide(demo, "greg", "Read", doc.handle)
    assert (d.allowed, d.reason) == (False, REASON_FLOW_VIOLATION)
    # olga sits at Organization, the common ancestor, and reads it fine
    assert decide(demo, "olga", "Read", doc.handle).allowed


def test_sign_needs_a_boss_descendant(demo):
    doc = doc_by_title(demo, "Bulletin")
    d = decide(demo, "sonya", "Sign", doc.handle)
    assert (d.allowed, d.reason) == (False, REASON_NO_SIGN_RIGHT)
    assert decide(demo, "olga", "Sign", doc.handle).allowed
    # the sign gate fires before secrecy and flow: boyan is a Boss, so his
    # denial comes from his Public clearance, not from the sign right
    d = decide(demo, "boyan", "Sign", doc.handle)
    assert (d.allowed, d.reason) == (False, REASON_FLOW_VIOLATION)


def test_admin_actions_are_role_gated(demo):
    doc = doc_by_title(demo, "Bulletin")
    d = decide(demo, "boris", "Archive", doc.handle)
    assert (d.allowed, d.reason) == (False, REASON_ADMIN_ONLY)
    assert decide(demo, "xadm", "Archive", doc.handle).allowed
    assert check_access(demo.state, user_id(demo, "sadm"),
                        Action.MANAGE_USERS).allowed
    d = check_access(demo.state, user_id(demo, "xadm"), Action.MANAGE_USERS)
    assert (d.allowed, d.reason) == (False, REASON_ADMIN_ONLY)


def test_owner_may_delete_own_draft_only(demo):
    doc = doc_by_title(demo, "Bulletin")
    assert decide(demo, "boris", "Delete", doc.handle).allowed  # owner, draft
    d = decide(demo, "sonya", "Delete", doc.handle)
    assert (d.allowed, d.reason) == (False, REASON_ADMIN_ONLY)
    assert decide(demo, "xadm", "Delete", doc.handle).allowed


def test_create_requires_membership_and_flow(office):
    shared = 2  # /Shared
    lat = office.state.lattice()
    ok = lat.label("FrontOffice", "Private", [1])
    d = check_access(office.state, user_id(office, "boris"), Action.CREATE,
                     shared, ok)
    assert d.allowed
    # xadm is in no workgroup anywhere on the chain
    d = check_access(office.state, user_id(office, "xadm"), Action.CREATE,
                     shared, lat.label("Organization", "Public", []))
    assert (d.allowed, d.reason) == (False, REASON_NOT_IN_WORKGROUP)
    # boris cannot plant a label above his own clearance
    too_high = lat.label("Organization", "Confidential", [])
    d = check_access(office.state, user_id(office, "boris"), Action.CREATE,
                     shared, too_high)
    assert (d.allowed, d.reason) == (False, REASON_FLOW_VIOLATION)


def test_grant_window_rescues_read_and_bounds_it(demo):
    bulletin = doc_by_title(demo, "Bulletin")
    # guestg holds a grant on /Shared levels 2..3 from the demo fixture
    assert decide(demo, "guestg", "Read", bulletin.handle).allowed
    # a document deeper than the window reports OutsideGrant
    seq, created = demo.execute("doc.create", SYSTEM_USER, {
        "title": "Deep", "folder": 3, "doc_class": "Report",
        "level": "FrontOffice", "secrecy": "Public", "content": "x"})
    d = decide(demo, "guestg", "Read", created["handle"])  # /Shared/Reports, level 4
    assert (d.allowed, d.reason) == (False, REASON_OUTSIDE_GRANT)
    # staff without any grant keeps its own reason
    d = decide(demo, "guestg", "Modify", bulletin.handle)
    assert (d.allowed, d.reason) == (False, REASON_NOT_IN_WORKGROUP)


def test_grants_do_not_open_confidential(demo):
    merger = doc_by_title(demo, "Merger")
    demo.execute("grant.add", SYSTEM_USER,
                 {"user": "guestg", "folder": 2, "lo": 1, "hi": 9})
    d = decide(demo, "guestg", "Read", merger.handle)
    assert (d.allowed, d.reason) == (False, REASON_NOT_ON_ACL)


def test_guest_sees_folders_on_the_grant_path_only(demo):
    gid = user_id(demo, "guestg")
    assert check_access(demo.state, gid, Action.READ, 1).allowed  # root, on path
    assert check_access(demo.state, gid, Action.READ, 2).allowed  # /Shared
    d = check_access(demo.state, gid, Action.READ, 4)             # /FrontDesk
    assert not d.allowed


def test_decision_matrix_matches_golden_table(demo):
    uids = [user_id(demo, u) for u in ("boris", "sonya", "greg", "xadm")]
    handles = [doc_by_title(demo, t).handle
               for t in ("Bulletin", "Rates", "Merger")]
    rows = q_matrix(demo, SYSTEM_USER, uids, handles)
    got = report.matrix_table(rows)
    want = (GOLDEN / "matrix.txt").read_text()
    assert got == want


def test_sign_matrix_against_reachability_oracle(office):
    roles = office.state.roles
    boss = roles.find("Boss")

    # oracle: transitive closure of parent edges via repeated squaring
    ids = sorted(roles.nodes)
    reach = {a: {a} for a in ids}
    for a in ids:
        cur = a
        while roles.nodes[cur].parent != 0:
            cur = roles.nodes[cur].parent
            reach[a].add(cur)
    want = {roles.nodes[a].name: (boss in reach[a]) for a in ids}

    got = {row["role"]: row["can_sign"] for row in q_sign_matrix(office)}
    assert got == want
    assert got["Boss"] and got["VP"] and got["DeptChief"]
    assert not got["Secretary"] and not got["Clerk"] and not got["Guest"]


def test_denied_read_is_audited(demo):
    from gwflow.engine import q_read_doc
    merger = doc_by_title(demo, "Merger")
    before = demo.audit.last_seq
    with pytest.raises(AccessDenied) as err:
        q_read_doc(demo, user_id(demo, "boris"), merger.handle)
    assert err.value.reason == REASON_NOT_ON_ACL
    assert demo.audit.last_seq == before + 1
    assert demo.audit.tail(1)[0]["reason"] == REASON_NOT_ON_ACL
