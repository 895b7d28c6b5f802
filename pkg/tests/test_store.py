"""Tree store semantics: handles, derived positions, cascade, blobs."""

import hashlib
import random

import pytest

from gwflow.errors import (
    DuplicateSibling,
    MalformedInput,
    ParentNotFolder,
    RootRemoval,
    UnknownHandle,
    UnknownTarget,
)
from gwflow.lattice import Label, Secrecy
from gwflow.store import NO_PARENT, ROOT_HANDLE, BlobStore, DocStatus, Tree


def label():
    return Label(1, Secrecy.PUBLIC, frozenset())


def test_root_is_handle_one_with_sentinel_parent():
    t = Tree()
    assert t.root == ROOT_HANDLE == 1
    assert t.nodes[t.root].parent == NO_PARENT == 0
    assert t.level(t.root) == 1
    assert t.index(t.root) == 1


def test_handles_are_dense_and_typed():
    t = Tree()
    f = t.add_folder("A", t.root)
    d = t.add_document("doc", f.handle, 2, label(), owner=1)
    assert (f.handle, d.handle) == (2, 3)
    assert t.folder(f.handle) is f
    assert t.document(d.handle) is d
    with pytest.raises(UnknownTarget):
        t.document(f.handle)
    with pytest.raises(UnknownTarget):
        t.folder(d.handle)
    with pytest.raises(UnknownHandle):
        t.node(99)


def test_documents_cannot_hold_children():
    t = Tree()
    d = t.add_document("doc", t.root, 2, label(), owner=1)
    with pytest.raises(ParentNotFolder):
        t.add_folder("X", d.handle)
    with pytest.raises(ParentNotFolder):
        t.add_document("Y", d.handle, 2, label(), owner=1)


def test_sibling_folder_names_unique_doc_titles_free():
    t = Tree()
    t.add_folder("A", t.root)
    with pytest.raises(DuplicateSibling):
        t.add_folder("A", t.root)
    t.add_document("same", t.root, 2, label(), owner=1)
    t.add_document("same", t.root, 2, label(), owner=1)  # allowed


def test_preorder_index_is_one_based_and_dense():
    t = Tree()
    a = t.add_folder("A", t.root)       # 2
    b = t.add_folder("B", t.root)       # 3
    c = t.add_folder("C", a.handle)     # 4
    order = t.preorder()
    assert order == [1, 2, 4, 3]
    assert [t.index(h) for h in order] == [1, 2, 3, 4]
    assert t.level(c.handle) == 3
    assert t.path(c.handle) == "Root/A/C"


def test_random_trees_match_dfs_oracle():
    """Derived positions agree with a DFS done straight on the records,
    across 100 random 50-node trees."""
    rng = random.Random(20260814)
    for _ in range(100):
        t = Tree()
        folders = [t.root]
        for i in range(49):
            parent = rng.choice(folders)
            if rng.random() < 0.3:
                t.add_document(f"d{i}", parent, 2, label(), owner=1)
            else:
                folders.append(t.add_folder(f"f{i}", parent).handle)

        children = {}
        for h, n in t.nodes.items():
            if n.parent != NO_PARENT:
                children.setdefault(n.parent, []).append(h)
        for v in children.values():
            v.sort()

        # oracle: recursive numbering in handle order
        index, level = {}, {}
        counter = [0]

        def walk(h, depth):
            counter[0] += 1
            index[h] = counter[0]
            level[h] = depth
            for k in children.get(h, []):
                walk(k, depth + 1)

        walk(t.root, 1)
        assert index[t.root] == 1
        for h in t.nodes:
            assert t.index(h) == index[h]
            assert t.level(h) == level[h]

        # cascade removal equals the oracle's subtree
        victim = rng.choice([h for h in t.nodes if h != t.root])

        def collect(h):
            out = {h}
            for k in children.get(h, []):
                out |= collect(k)
            return out

        expected = collect(victim)
        survivors = set(t.nodes) - expected
        assert set(t.remove(victim)) == expected
        assert set(t.nodes) == survivors


def test_removed_handles_are_never_reused():
    t = Tree()
    a = t.add_folder("A", t.root)
    b = t.add_folder("B", a.handle)
    t.remove(a.handle)
    c = t.add_folder("C", t.root)
    assert c.handle > b.handle


def test_root_cannot_be_removed_or_moved():
    t = Tree()
    with pytest.raises(RootRemoval):
        t.remove(t.root)
    a = t.add_folder("A", t.root)
    with pytest.raises(RootRemoval):
        t.move(t.root, a.handle)


def test_move_rejects_own_subtree():
    t = Tree()
    a = t.add_folder("A", t.root)
    b = t.add_folder("B", a.handle)
    with pytest.raises(MalformedInput):
        t.move(a.handle, b.handle)
    c = t.add_folder("C", t.root)
    t.move(b.handle, c.handle)
    assert t.nodes[b.handle].parent == c.handle
    assert t.path(b.handle) == "Root/C/B"


def test_tree_text_round_trip():
    t = Tree()
    a = t.add_folder("A", t.root)
    a.groups.add(3)
    d = t.add_document("deal, final", a.handle, 4,
                       Label(2, Secrecy.CONFIDENTIAL, frozenset()), owner=7)
    d.acl = {7, 9}
    d.status = DocStatus.SIGNED
    d.signed_by = {9}
    d.digest = "ab" * 32
    text = t.to_text()
    again = Tree.from_text(text)
    assert again.to_text() == text
    doc = again.document(d.handle)
    assert doc.acl == {7, 9}
    assert doc.status is DocStatus.SIGNED
    assert doc.label.secrecy is Secrecy.CONFIDENTIAL
    # counter carried over: no handle reuse after reload
    assert again.add_folder("B", again.root).handle == 4


def test_blob_store_is_content_addressed():
    bs = BlobStore()
    d1 = bs.put("hello")
    d2 = bs.put("hello")
    assert d1 == d2 == hashlib.sha256(b"hello").hexdigest()
    assert bs.get(d1) == "hello"
    with pytest.raises(UnknownTarget):
        bs.get("00" * 32)


def test_blob_sweep_and_round_trip():
    bs = BlobStore()
    keep = bs.put("keep\nme|safe")
    drop = bs.put("drop me")
    assert bs.sweep({keep}) == 1
    assert not bs.has(drop)
    text = bs.to_text()
    again = BlobStore.from_text(text)
    assert again.get(keep) == "keep\nme|safe"
    assert again.to_text() == text
