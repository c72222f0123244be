import os
import tempfile
import unittest
from scispace.core.paths import normalize_path
from scispace.core.placement import place
from scispace.sdf import TAG_TEXT
from scispace.sdf.codec import SdfDocument, sdf_encode
from scispace.sdf.values import AttributeValue
from scispace.sds.specs import AttributeSpec
from scispace.queryql.executor import execute_query
from scispace.workspace.cluster import LocalCluster
from scispace.workspace.ops import ws_write, ws_read, ws_readdir, ws_tag
from scispace.utils.errors import NotFound

SPECS = frozenset([AttributeSpec("Location", TAG_TEXT)])


class Test_shard_service(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.cluster = LocalCluster.in_directory(self._tmp.name, 2, specs=SPECS, fsync=False, drain_worker=False)
        self.alice = self.cluster.session("alice")

    def tearDown(self):
        self.cluster.close()
        self._tmp.cleanup()

    def test_restart_recovers_records_and_triples(self):
        granule = sdf_encode(SdfDocument([("Location", AttributeValue.of_text("Arctic"))]))
        for i in range(10):
            ws_write(self.alice, "/public/g{:d}.sdf".format(i), granule)
        ws_tag(self.alice, "/public/g3.sdf", "Project", AttributeValue.of_text("ice"))
        before = self.cluster.triple_set()
        for i in range(2):
            self.cluster.restart(i)
        bob = self.cluster.session("bob")
        self.assertEqual(self.cluster.triple_set(), before)
        self.assertEqual(len(ws_readdir(bob, "/public")), 10)
        self.assertEqual(execute_query(bob, 'Project = "ice"')[0], ["/public/g3.sdf"])

    def test_tag_unknown_file(self):
        with self.assertRaises(NotFound):
            ws_tag(self.alice, "/public/none", "Project", AttributeValue.of_text("ice"))

    def test_scrub_drops_stale_records(self):
        ws_write(self.alice, "/public/keep", b"k")
        ws_write(self.alice, "/public/gone.sdf", sdf_encode(SdfDocument([("Location", AttributeValue.of_text("x"))])))
        dtn = place(normalize_path("/public/gone.sdf"), 2)
        os.remove(os.path.join(self.cluster.roots[dtn], "public", "gone.sdf"))
        service = self.cluster.services[dtn]
        self.assertEqual(service.scrub(), ["/public/gone.sdf"])
        self.assertEqual(service.discovery.triples_of("/public/gone.sdf"), [])
        self.assertEqual(service.scrub(), [])
        self.assertEqual(ws_readdir(self.alice, "/public"), ["keep"])
        self.assertEqual(ws_read(self.alice, "/public/keep"), b"k")


if __name__ == "__main__":
    unittest.main()
