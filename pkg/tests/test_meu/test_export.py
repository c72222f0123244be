import os
import tempfile
import unittest
from scispace.core.paths import normalize_path
from scispace.core.placement import place
from scispace.meu.export import meu_export, meu_scan
from scispace.meu.lock import MeuLock
from scispace.protocol import BATCH_EXPORT, ENQUEUE_INDEX
from scispace.sdf import TAG_INT
from scispace.sdf.codec import SdfDocument, sdf_encode
from scispace.sdf.values import AttributeValue
from scispace.sds.specs import AttributeSpec
from scispace.workspace.cluster import LocalCluster
from scispace.workspace.local_writes import lw_write
from scispace.workspace.ops import ws_readdir, ws_read
from scispace.utils.errors import LockHeld, NotFound


def _populate(root, flags, n_dirs=4, per_dir=5):
    rels = []
    for d in range(n_dirs):
        for f in range(per_dir):
            rel = "public/d{:d}/f{:d}.dat".format(d, f)
            lw_write(root, flags, rel, rel.encode())
            rels.append(rel)
    return rels


class Test_meu_single_dtn(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.cluster = LocalCluster.in_directory(self._tmp.name, 1, fsync=False, drain_worker=False)
        self.frames = []
        self.alice = self.cluster.session("alice", observer=self.frames.append)
        self.bob = self.cluster.session("bob")
        self.root = self.cluster.roots[0]
        self.flags = self.alice.flags[0]

    def tearDown(self):
        self.cluster.close()
        self._tmp.cleanup()

    def test_one_frame_per_shard(self):
        rels = _populate(self.root, self.flags)
        report = meu_export(self.root, "", self.alice)
        self.assertEqual(report.exported, len(rels))
        self.assertEqual(report.per_shard, {0: len(rels)})
        self.assertFalse(report.partial)
        self.assertEqual([f.msg_type for f in self.frames], [BATCH_EXPORT])
        self.assertEqual(ws_readdir(self.bob, "/public"), ["d0", "d1", "d2", "d3"])
        self.assertEqual(ws_read(self.bob, "/public/d2/f3.dat"), b"public/d2/f3.dat")

    def test_rerun_is_idempotent(self):
        _populate(self.root, self.flags)
        meu_export(self.root, "", self.alice)
        state = self.cluster.services[0].metadata.state()
        self.frames.clear()
        again = meu_export(self.root, "", self.alice)
        self.assertEqual(again.exported, 0)
        self.assertEqual(again.scan.dirs_visited, 0)
        self.assertEqual(again.scan.dirs_skipped, 1)
        self.assertEqual(self.frames, [])
        self.assertEqual(self.cluster.services[0].metadata.state(), state)

    # only the directories on the path to a new write are walked
    def test_skip_scan_visits_dirty_chain(self):
        _populate(self.root, self.flags)
        meu_export(self.root, "", self.alice)
        lw_write(self.root, self.flags, "public/d1/new.dat", b"n")
        report = meu_export(self.root, "", self.alice)
        self.assertEqual(report.exported, 1)
        self.assertEqual(report.scan.dirs_visited, 3)
        self.assertEqual(report.scan.dirs_skipped, 3)
        self.assertEqual(report.scan.files_unsynced, ["public/d1/new.dat"])

    def test_skip_scan_over_thousand_files(self):
        _populate(self.root, self.flags, 20, 50)
        self.assertEqual(meu_export(self.root, "", self.alice).exported, 1000)
        lw_write(self.root, self.flags, "public/d7/late.dat", b"late")
        report = meu_export(self.root, "", self.alice)
        self.assertEqual(report.scan.files_unsynced, ["public/d7/late.dat"])
        self.assertEqual(report.exported, 1)
        self.assertEqual(report.scan.dirs_visited, 3)
        self.assertEqual(report.scan.dirs_skipped, 19)
        self.assertEqual(ws_read(self.bob, "/public/d7/late.dat"), b"late")

    def test_no_unsynced_file_missed(self):
        rels = _populate(self.root, self.flags, 3, 3)
        meu_export(self.root, "public/d0", self.alice)
        report = meu_export(self.root, "", self.alice)
        self.assertEqual(report.exported, len(rels) - 3)
        for rel in rels:
            self.assertTrue(self.flags.get(rel))

    # a crash after the ack but before the flags were set only resends records
    def test_crash_between_ack_and_flags(self):
        rels = _populate(self.root, self.flags, 2, 2)
        meu_export(self.root, "", self.alice)
        state = self.cluster.services[0].metadata.state()
        for rel in rels:
            self.flags.invalidate(rel)
        report = meu_export(self.root, "", self.alice)
        self.assertEqual(report.exported, len(rels))
        self.assertEqual(self.cluster.services[0].metadata.state(), state)

    def test_root_level_files_are_misplaced(self):
        lw_write(self.root, self.flags, "stray.dat", b"x")
        lw_write(self.root, self.flags, "public/ok.dat", b"y")
        report = meu_export(self.root, "", self.alice)
        self.assertEqual(report.exported, 1)
        self.assertEqual(report.misplaced, ["stray.dat"])
        self.assertFalse(self.flags.get("", is_directory=True))

    def test_empty_directories_are_sealed(self):
        lw_write(self.root, self.flags, "public/a.dat", b"")
        os.makedirs(os.path.join(self.root, "public", "empty"))
        meu_export(self.root, "", self.alice)
        self.assertTrue(self.flags.get("public/empty", is_directory=True))
        self.assertTrue(self.flags.get("", is_directory=True))

    def test_scan_needs_lock(self):
        _populate(self.root, self.flags, 1, 1)
        with MeuLock(self.root, holder="other"):
            with self.assertRaises(LockHeld):
                meu_export(self.root, "", self.alice)
            with self.assertRaises(LockHeld):
                meu_scan(self.root, "", self.flags)
        self.assertEqual(len(meu_scan(self.root, "", self.flags).files_unsynced), 1)

    def test_missing_start(self):
        with self.assertRaises(NotFound):
            meu_export(self.root, "public/none", self.alice)

    def test_export_with_index(self):
        specs = frozenset([AttributeSpec("DayNight", TAG_INT)])
        session = self.cluster.session("alice", specs=specs, observer=self.frames.append)
        data = sdf_encode(SdfDocument([("DayNight", AttributeValue.of_int(1))]))
        lw_write(self.root, self.flags, "public/g.sdf", data)
        report = meu_export(self.root, "public", session, index=True)
        self.assertEqual(report.indexed, 1)
        self.assertEqual([f.msg_type for f in self.frames], [BATCH_EXPORT, ENQUEUE_INDEX])
        triples = self.cluster.services[0].discovery.triples_of("/public/g.sdf")
        self.assertIn("DayNight", [t.attribute for t in triples])


class Test_meu_two_dtns(unittest.TestCase):
    def test_partial_and_misplaced(self):
        with tempfile.TemporaryDirectory() as d:
            with LocalCluster.in_directory(d, 2, fsync=False, drain_worker=False) as cluster:
                alice = cluster.session("alice")
                root, flags = cluster.roots[0], alice.flags[0]
                here, there = [], []
                for i in range(40):
                    display = "/public/f{:02d}".format(i)
                    (here if place(normalize_path(display), 2) == 0 else there).append(display[1:])
                for rel in here + there:
                    lw_write(root, flags, rel, b"x")
                report = meu_export(root, "", alice)
                self.assertEqual(report.exported, len(here))
                self.assertEqual(sorted(report.misplaced), sorted(there))
                self.assertFalse(flags.get("public", is_directory=True))

                lw_write(root, flags, here[0], b"again")
                cluster.services[0].stop()
                report = meu_export(root, "", alice)
                self.assertTrue(report.partial)
                self.assertEqual(report.failed_shards, [0])
                self.assertFalse(flags.get(here[0]))


if __name__ == "__main__":
    unittest.main()
