import os
import tempfile
import unittest
from scispace.backend import MODE_MARKER, MODE_XATTR
from scispace.backend.flags import SyncFlagStore, clear_tree, native_xattr_supported
from scispace.backend.storage import bk_put
from scispace.utils.errors import NotFound


class Test_marker_flags(unittest.TestCase):
    mode = MODE_MARKER

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.root = self._tmp.name
        self.flags = SyncFlagStore(self.root, self.mode)

    def tearDown(self):
        self._tmp.cleanup()

    def test_set_get_clear(self):
        bk_put(self.root, "public/a.sdf", b"")
        self.assertFalse(self.flags.get("public/a.sdf"))
        self.flags.set("public/a.sdf", True)
        self.flags.set("public/a.sdf", True)
        self.assertTrue(self.flags.get("public/a.sdf"))
        self.flags.set("public/a.sdf", False)
        self.assertFalse(self.flags.get("public/a.sdf"))

    def test_set_on_missing_path(self):
        with self.assertRaises(NotFound):
            self.flags.set("public/none", True)

    # parent chain is cleared until an already-unsynced ancestor
    def test_invalidate_stops_at_unsynced_ancestor(self):
        bk_put(self.root, "public/run/deep/a", b"")
        for rel in ("", "public", "public/run", "public/run/deep", "public/run/deep/a"):
            self.flags.set(rel, True)
        self.flags.set("public", False)
        self.flags.invalidate("public/run/deep/a")
        self.assertFalse(self.flags.get("public/run/deep/a"))
        self.assertFalse(self.flags.get("public/run/deep"))
        self.assertFalse(self.flags.get("public/run"))
        self.assertTrue(self.flags.get(""))

    def test_invalidate_passes_created_directories(self):
        bk_put(self.root, "public/a", b"")
        self.flags.set("", True)
        self.flags.set("public", True)
        bk_put(self.root, "public/new/b", b"")
        self.flags.invalidate("public/new/b", created=["public/new"])
        self.assertFalse(self.flags.get("public"))
        self.assertFalse(self.flags.get(""))

    def test_clear_tree(self):
        bk_put(self.root, "public/d/a", b"")
        bk_put(self.root, "public/d/e/b", b"")
        for rel in ("public/d", "public/d/a", "public/d/e", "public/d/e/b"):
            self.flags.set(rel, True)
        clear_tree(self.flags, "public/d")
        for rel in ("public/d", "public/d/a", "public/d/e", "public/d/e/b"):
            self.assertFalse(self.flags.get(rel))


class Test_marker_layout(unittest.TestCase):
    def test_marker_tree_paths(self):
        with tempfile.TemporaryDirectory() as root:
            flags = SyncFlagStore(root, MODE_MARKER)
            bk_put(root, "public/run/a.sdf", b"data")
            flags.set("public/run/a.sdf", True)
            flags.set("public/run", True)
            flags.set("", True)
            sync = os.path.join(root, ".scispace", "sync")
            self.assertTrue(os.path.isfile(os.path.join(sync, "public", "run", "a.sdf.mark")))
            self.assertTrue(os.path.isfile(os.path.join(sync, "public", "run.dmark")))
            self.assertTrue(os.path.isfile(os.path.join(sync, ".dmark")))
            self.assertEqual(os.path.getsize(os.path.join(sync, "public", "run", "a.sdf.mark")), 0)
            flags.set("public/run/a.sdf", False)
            self.assertFalse(os.path.exists(os.path.join(sync, "public", "run", "a.sdf.mark")))


def _xattr_available():
    with tempfile.TemporaryDirectory() as root:
        return native_xattr_supported(root)


@unittest.skipUnless(_xattr_available(), "file system without user extended attributes")
class Test_xattr_flags(Test_marker_flags):
    mode = MODE_XATTR


if __name__ == "__main__":
    unittest.main()
