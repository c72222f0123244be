import tempfile
import unittest
from scispace.backend.flags import SyncFlagStore
from scispace.backend.storage import bk_put, bk_exists, bk_get
from scispace.workspace.local_writes import lw_write, lw_mkdir, lw_rename, lw_unlink
from scispace.utils.errors import NotFound

SYNCED = ("", "public", "public/run", "public/run/a", "public/other", "public/other/b")


class Test_local_writes(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.root = self._tmp.name
        self.flags = SyncFlagStore(self.root)
        bk_put(self.root, "public/run/a", b"a")
        bk_put(self.root, "public/other/b", b"b")
        for rel in SYNCED:
            self.flags.set(rel, True)

    def tearDown(self):
        self._tmp.cleanup()

    def _synced(self):
        return {rel for rel in SYNCED if bk_exists(self.root, rel) and self.flags.get(rel)}

    def test_write_clears_chain_only(self):
        lw_write(self.root, self.flags, "public/run/new", b"n")
        self.assertFalse(self.flags.get("public/run/new"))
        self.assertEqual(self._synced(), {"public/run/a", "public/other", "public/other/b"})

    def test_overwrite_clears_own_flag(self):
        lw_write(self.root, self.flags, "public/run/a", b"changed")
        self.assertFalse(self.flags.get("public/run/a"))
        self.assertEqual(bk_get(self.root, "public/run/a"), b"changed")

    def test_new_directories_start_unsynced(self):
        lw_write(self.root, self.flags, "public/run/x/y/z", b"")
        for rel in ("public/run/x", "public/run/x/y", "public/run", "public", ""):
            self.assertFalse(self.flags.get(rel))

    def test_mkdir(self):
        lw_mkdir(self.root, self.flags, "public/other/sub")
        self.assertFalse(self.flags.get("public/other"))
        self.assertTrue(self.flags.get("public/other/b"))

    def test_rename(self):
        lw_rename(self.root, self.flags, "public/run/a", "public/other/a2")
        self.assertFalse(bk_exists(self.root, "public/run/a"))
        self.assertFalse(self.flags.get("public/other/a2"))
        self.assertFalse(self.flags.get("public/run"))
        self.assertFalse(self.flags.get("public/other"))
        self.assertTrue(self.flags.get("public/other/b"))
        with self.assertRaises(NotFound):
            lw_rename(self.root, self.flags, "public/run/a", "public/x")

    def test_unlink(self):
        lw_unlink(self.root, self.flags, "public/other/b")
        self.assertFalse(bk_exists(self.root, "public/other/b"))
        self.assertFalse(self.flags.get("public/other"))
        self.assertTrue(self.flags.get("public/run"))
        with self.assertRaises(NotFound):
            lw_unlink(self.root, self.flags, "public/other/b")


if __name__ == "__main__":
    unittest.main()
