import unittest
from scispace.sdf import TAG_FLOAT, TAG_TEXT
from scispace.sdf.codec import SdfDocument, sdf_encode
from scispace.sdf.values import AttributeValue
from scispace.sds import FS_SIZE, FS_MTIME
from scispace.sds.extraction import extract_attributes, extractor_for, register_extractor, EXTRACTORS
from scispace.sds.specs import AttributeSpec
from scispace.backend.storage import BackendEntry

SPECS = frozenset(
    [
        AttributeSpec("Location", TAG_TEXT),
        AttributeSpec("DayNight", TAG_FLOAT),
        AttributeSpec("Temp", TAG_FLOAT),
    ]
)

GRANULE = sdf_encode(
    SdfDocument(
        [
            ("Location", AttributeValue.of_text("Pacific")),
            ("DayNight", AttributeValue.of_int(1)),
            ("Temp", AttributeValue.of_float(2.5)),
            ("Extra", AttributeValue.of_int(9)),
        ],
        b"payload",
    )
)


class Test_extraction(unittest.TestCase):
    def test_only_matching_name_and_type(self):
        triples = extract_attributes("/public/g.sdf", GRANULE, SPECS)
        self.assertEqual(
            {(t.attribute, t.value) for t in triples},
            {("Location", AttributeValue.of_text("Pacific")), ("Temp", AttributeValue.of_float(2.5))},
        )
        self.assertTrue(all(t.file == "/public/g.sdf" for t in triples))

    def test_stat_pseudo_attributes(self):
        stat = BackendEntry("public/g.sdf", "file", len(GRANULE), 1700000000123)
        values = {t.attribute: t.value for t in extract_attributes("/public/g.sdf", GRANULE, SPECS, stat)}
        self.assertEqual(values[FS_SIZE], AttributeValue.of_int(len(GRANULE)))
        self.assertEqual(values[FS_MTIME], AttributeValue.of_int(1700000000123))

    def test_undecodable_and_foreign_files(self):
        stat = BackendEntry("public/x", "file", 3, 0)
        self.assertEqual(extract_attributes("/public/broken.sdf", b"SSD", SPECS), [])
        self.assertEqual([t.attribute for t in extract_attributes("/public/notes.txt", GRANULE, SPECS, stat)], [FS_SIZE, FS_MTIME])

    def test_extractor_lookup(self):
        self.assertIsNotNone(extractor_for("/public/a.SDF"))
        self.assertIsNone(extractor_for("/public/.sdf"))
        self.assertIsNone(extractor_for("/public/noext"))

    def test_register_extractor(self):
        register_extractor(".kv", lambda raw: [("Location", AttributeValue.of_text(raw.decode()))])
        try:
            triples = extract_attributes("/public/a.kv", b"Arctic", SPECS)
            self.assertEqual([t.value for t in triples], [AttributeValue.of_text("Arctic")])
        finally:
            EXTRACTORS.pop(".kv")


if __name__ == "__main__":
    unittest.main()
