import os
import tempfile
import unittest
from scispace.backend.storage import (
    bk_put,
    bk_get,
    bk_mkdir,
    bk_stat,
    bk_exists,
    bk_list_children,
    bk_scan_entries,
    missing_dirs,
)
from scispace.core import KIND_DIRECTORY, KIND_FILE
from scispace.utils.errors import EscapesRoot, NotFound


class Test_storage(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.root = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def test_put_then_get(self):
        entry = bk_put(self.root, "a/b/c.sdf", b"hello")
        self.assertEqual(entry.size, 5)
        self.assertEqual(entry.kind, KIND_FILE)
        self.assertEqual(bk_get(self.root, "a/b/c.sdf"), b"hello")
        self.assertTrue(os.path.isdir(os.path.join(self.root, "a", "b")))

    def test_empty_file(self):
        bk_put(self.root, "e", b"")
        self.assertEqual(bk_get(self.root, "e"), b"")

    def test_escapes(self):
        for rel in ("../x", "a/../../x", "a\x00b"):
            with self.assertRaises(EscapesRoot):
                bk_put(self.root, rel, b"")

    def test_missing(self):
        with self.assertRaises(NotFound):
            bk_get(self.root, "nope")
        with self.assertRaises(NotFound):
            bk_stat(self.root, "nope")
        self.assertFalse(bk_exists(self.root, "nope"))

    def test_mkdir_and_stat(self):
        bk_mkdir(self.root, "d/e")
        self.assertEqual(bk_stat(self.root, "d/e").kind, KIND_DIRECTORY)
        self.assertEqual(bk_stat(self.root, "d/e").size, 0)

    def test_missing_dirs_shallowest_first(self):
        bk_mkdir(self.root, "a")
        self.assertEqual(missing_dirs(self.root, "a/b/c"), ["a/b", "a/b/c"])
        self.assertEqual(missing_dirs(self.root, "a"), [])
        self.assertEqual(missing_dirs(self.root, ""), [])

    def test_scan_empty_root(self):
        self.assertEqual(list(bk_scan_entries(self.root)), [])

    # directories come before their contents, siblings in byte order
    def test_scan_order(self):
        bk_put(self.root, "b", b"1")
        bk_put(self.root, "a/x", b"22")
        bk_put(self.root, "a/B", b"")
        bk_put(self.root, ".scispace/shard/metadata.log", b"internal")
        order = [e.rel_path for e in bk_scan_entries(self.root)]
        self.assertEqual(order, ["a", "a/B", "a/x", "b"])

    def test_scan_prune(self):
        bk_put(self.root, "a/x", b"")
        bk_put(self.root, "b/y", b"")
        order = [e.rel_path for e in bk_scan_entries(self.root, "", prune=lambda e: e.rel_path == "a")]
        self.assertEqual(order, ["a", "b", "b/y"])

    def test_scan_missing_start(self):
        with self.assertRaises(NotFound):
            list(bk_scan_entries(self.root, "missing"))

    @unittest.skipUnless(hasattr(os, "symlink"), "needs symlinks")
    def test_scan_skips_symlinks(self):
        bk_put(self.root, "a/x", b"")
        os.symlink(os.path.join(self.root, "a"), os.path.join(self.root, "link"))
        order = [e.rel_path for e in bk_scan_entries(self.root)]
        self.assertEqual(order, ["a", "a/x"])

    def test_list_children(self):
        bk_put(self.root, "a/x", b"")
        bk_mkdir(self.root, "a/sub")
        bk_put(self.root, ".scispace/meu.lock", b"")
        self.assertEqual(bk_list_children(self.root, "a"), [("sub", True), ("x", False)])
        self.assertEqual(bk_list_children(self.root, ""), [("a", True)])


if __name__ == "__main__":
    unittest.main()
