import unittest
from scispace.bench.corpus import (
    BASE_SPECS,
    HIT_QUERIES,
    generate_corpus,
    hit_count,
    hitratio_corpus,
    make_specs,
)
from scispace.queryql.parser import parse_query
from scispace.queryql.predicate import predicate_holds
from scispace.sdf import TAG_INT, TAG_FLOAT, TAG_TEXT
from scispace.sds.extraction import extract_attributes
from scispace.sds.specs import spec_set


class Test_corpus(unittest.TestCase):
    def test_make_specs(self):
        self.assertEqual(make_specs(0), frozenset())
        self.assertEqual(make_specs(2), frozenset(BASE_SPECS[:2]))
        tags = {s.name: s.tag for s in make_specs(7)}
        self.assertEqual((tags["attr_004"], tags["attr_005"], tags["attr_006"]), (TAG_FLOAT, TAG_TEXT, TAG_INT))
        with self.assertRaises(ValueError):
            make_specs(-1)

    def test_deterministic(self):
        specs = make_specs(6)
        first = generate_corpus(4, 20, specs, 8)
        self.assertEqual(first, generate_corpus(4, 20, specs, 8))
        self.assertNotEqual(first, generate_corpus(5, 20, specs, 8))
        self.assertEqual(first[17][0], "/public/granules/d01/g000017.sdf")
        triples = extract_attributes(first[0][0], first[0][1], specs)
        self.assertEqual(len(triples), 6)

    def test_hit_count(self):
        self.assertEqual(hit_count(0.75, 400), 300)
        self.assertEqual(hit_count(0.25, 3), 1)
        self.assertEqual(hit_count(0.0, 10), 0)
        self.assertEqual(hit_count(1.0, 10), 10)
        with self.assertRaises(ValueError):
            hit_count(1.5, 10)

    # every attribute's hit query matches exactly the requested share
    def test_hitratio_corpus(self):
        specs = spec_set(BASE_SPECS)
        for ratio in (0.0, 0.3, 1.0):
            files, n_hits = hitratio_corpus(9, 50, ratio, payload_size=4)
            self.assertEqual(n_hits, hit_count(ratio, 50))
            values = [{t.attribute: t.value for t in extract_attributes(p, d, specs)} for p, d in files]
            for query in HIT_QUERIES.values():
                pred = parse_query(query)
                self.assertEqual(sum(predicate_holds(v, pred) for v in values), n_hits, (query, ratio))


if __name__ == "__main__":
    unittest.main()
