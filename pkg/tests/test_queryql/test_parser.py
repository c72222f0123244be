import unittest
from scispace.queryql import OP_EQ, OP_GT, OP_LT, OP_LIKE
from scispace.queryql.parser import parse_query, tokenize
from scispace.queryql.predicate import Clause, Predicate, matches, predicate_holds, like_to_regex
from scispace.sdf.values import AttributeValue
from scispace.utils.errors import QuerySyntaxError, QueryTypeError

I = AttributeValue.of_int
F = AttributeValue.of_float
T = AttributeValue.of_text


class Test_parser(unittest.TestCase):
    def test_single_clauses(self):
        self.assertEqual(parse_query('Location = "Pacific"'), Predicate((Clause("Location", OP_EQ, T("Pacific")),)))
        self.assertEqual(parse_query("DayNight=1").clauses[0], Clause("DayNight", OP_EQ, I(1)))
        self.assertEqual(parse_query("fs.size > 1e3").clauses[0], Clause("fs.size", OP_GT, F(1000.0)))
        self.assertEqual(parse_query("t < -2.5").clauses[0], Clause("t", OP_LT, F(-2.5)))
        self.assertEqual(parse_query('Date LIKE "2016%"').clauses[0], Clause("Date", OP_LIKE, T("2016%")))

    def test_conjunction_and_quoting(self):
        pred = parse_query('"Day Night" = 0 and Location = "say \\"hi\\""')
        self.assertEqual(pred.clauses, (Clause("Day Night", OP_EQ, I(0)), Clause("Location", OP_EQ, T('say "hi"'))))
        self.assertEqual(parse_query(str(pred)), pred)

    def test_syntax_errors(self):
        for query, position in (
            ("", 0),
            ("Location", 8),
            ('Location = "open', 11),
            ("a = 1 b = 2", 6),
            ("a = 1 AND", 9),
            ("a ! 1", 2),
            ("= 1", 0),
        ):
            with self.assertRaises(QuerySyntaxError) as ctx:
                parse_query(query)
            self.assertEqual(ctx.exception.position, position, query)

    def test_type_errors(self):
        with self.assertRaises(QueryTypeError):
            parse_query("a like 3")
        with self.assertRaises(QueryTypeError):
            parse_query('a > "x"')
        with self.assertRaises(QueryTypeError):
            parse_query("a = 99999999999999999999")

    def test_tokens(self):
        kinds = [t.kind for t in tokenize('x.y = -3 AND "z" like "a_"')]
        self.assertEqual(kinds, ["word", "op", "int", "word", "string", "op", "string", "end"])


class Test_matching(unittest.TestCase):
    def test_equality_is_type_strict(self):
        self.assertTrue(matches(I(1), OP_EQ, I(1)))
        self.assertFalse(matches(F(1.0), OP_EQ, I(1)))
        self.assertFalse(matches(T("1"), OP_EQ, I(1)))

    def test_ordering(self):
        self.assertTrue(matches(I(5), OP_GT, I(3)))
        self.assertFalse(matches(F(5.0), OP_GT, I(3)))
        self.assertTrue(matches(I(5), OP_GT, F(4.5)))
        self.assertTrue(matches(F(-1.0), OP_LT, F(0.0)))
        self.assertFalse(matches(T("9"), OP_GT, F(1.0)))

    def test_like(self):
        self.assertTrue(matches(T("2016-03-01"), OP_LIKE, T("2016%")))
        self.assertTrue(matches(T("ab"), OP_LIKE, T("a_")))
        self.assertFalse(matches(T("abc"), OP_LIKE, T("a_")))
        self.assertFalse(matches(T("Abc"), OP_LIKE, T("a%")))
        self.assertTrue(matches(T("a.c"), OP_LIKE, T("a.c")))
        self.assertFalse(matches(T("abc"), OP_LIKE, T("a.c")))
        self.assertTrue(matches(T("line\nbreak"), OP_LIKE, T("line%")))
        self.assertIsNotNone(like_to_regex("100%").fullmatch("100 percent"))

    def test_predicate_holds(self):
        pred = parse_query('Location = "Pacific" AND DayNight = 1')
        self.assertTrue(predicate_holds({"Location": T("Pacific"), "DayNight": I(1)}, pred))
        self.assertFalse(predicate_holds({"Location": T("Pacific")}, pred))

    def test_empty_predicate_rejected(self):
        with self.assertRaises(QueryTypeError):
            Predicate(())


if __name__ == "__main__":
    unittest.main()
