import tempfile
import unittest
from scispace.queryql import OP_EQ, OP_GT
from scispace.queryql.predicate import Clause, Predicate
from scispace.sdf.values import AttributeValue
from scispace.sds import SOURCE_MANUAL
from scispace.sds.discovery import AttributeTriple, DiscoveryShard

PACIFIC = AttributeValue.of_text("Pacific")
ARCTIC = AttributeValue.of_text("Arctic")


def _t(attribute, file, value, source="extracted"):
    return AttributeTriple(attribute, file, value, source)


class Test_discovery_shard(unittest.TestCase):
    def test_replace_is_per_file(self):
        shard = DiscoveryShard()
        shard.replace_extracted({"/public/a": [_t("Location", "/public/a", PACIFIC), _t("Night", "/public/a", AttributeValue.of_int(1))]})
        shard.replace_extracted({"/public/a": [_t("Location", "/public/a", ARCTIC)]})
        self.assertEqual(shard.triple_set(), {("Location", "/public/a", ARCTIC)})

    # re-extraction never drops or overrides a manual tag
    def test_manual_tags_survive(self):
        shard = DiscoveryShard()
        shard.tag(_t("Location", "/public/a", ARCTIC, SOURCE_MANUAL))
        shard.tag(_t("Project", "/public/a", AttributeValue.of_text("x"), SOURCE_MANUAL))
        shard.replace_extracted({"/public/a": [_t("Location", "/public/a", PACIFIC)]})
        shard.replace_extracted({"/public/a": []})
        triples = {t.attribute: t for t in shard.triples_of("/public/a")}
        self.assertEqual(triples["Location"].value, ARCTIC)
        self.assertEqual(triples["Location"].source, SOURCE_MANUAL)
        self.assertIn("Project", triples)

    def test_evaluate_is_conjunctive(self):
        shard = DiscoveryShard()
        shard.replace_extracted(
            {
                "/public/a": [_t("Location", "/public/a", PACIFIC), _t("n", "/public/a", AttributeValue.of_int(5))],
                "/public/b": [_t("Location", "/public/b", PACIFIC), _t("n", "/public/b", AttributeValue.of_int(1))],
                "/public/c": [_t("Location", "/public/c", ARCTIC), _t("n", "/public/c", AttributeValue.of_int(9))],
            }
        )
        pred = Predicate((Clause("Location", OP_EQ, PACIFIC), Clause("n", OP_GT, AttributeValue.of_int(2))))
        self.assertEqual(shard.evaluate(pred), {"/public/a"})
        self.assertEqual(shard.evaluate(Predicate((Clause("missing", OP_EQ, PACIFIC),))), set())
        self.assertEqual(shard.count(), 6)

    def test_drop_file(self):
        shard = DiscoveryShard()
        shard.replace_extracted({"/public/a": [_t("Location", "/public/a", PACIFIC)]})
        shard.tag(_t("Project", "/public/a", AttributeValue.of_text("x"), SOURCE_MANUAL))
        shard.drop_file("/public/a")
        shard.drop_file("/public/never")
        self.assertEqual(shard.triples(), [])

    def test_replay_with_snapshot(self):
        with tempfile.TemporaryDirectory() as d:
            shard = DiscoveryShard(d, fsync=False, snapshot_every=2)
            for i in range(5):
                file = "/public/f{:d}".format(i)
                shard.replace_extracted({file: [_t("n", file, AttributeValue.of_int(i))]})
            shard.tag(_t("Location", "/public/f0", ARCTIC, SOURCE_MANUAL))
            shard.drop_file("/public/f4")
            expected = sorted(shard.triples(), key=lambda t: (t.attribute, t.file))
            shard.close()
            reopened = DiscoveryShard(d, fsync=False)
            self.assertEqual(sorted(reopened.triples(), key=lambda t: (t.attribute, t.file)), expected)


if __name__ == "__main__":
    unittest.main()
