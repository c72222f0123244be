import io
import os
import tempfile
import unittest
from scispace.cli import EXIT_OK, EXIT_USER
from scispace.cli.main import cli_dispatch
from scispace.sdf.codec import SdfDocument, sdf_encode
from scispace.sdf.values import AttributeValue

CONFIG = """
[collaboration]
collaborator = alice

[dtn.a]
backend_root = dtn-a

[dtn.b]
backend_root = dtn-b

[sds]
spec_file = attrs.spec

[namespaces]
climate = alice:global

[shard]
fsync = false
"""


class Test_cli(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = self._tmp.name
        self.config = os.path.join(self.dir, "collab.conf")
        with open(self.config, "w") as f:
            f.write(CONFIG)
        with open(os.path.join(self.dir, "attrs.spec"), "w") as f:
            f.write("Location:text\n")

    def tearDown(self):
        self._tmp.cleanup()

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        code = cli_dispatch(["--config", self.config, "--embedded"] + list(argv), out, err)
        return code, out.getvalue(), err.getvalue()

    def _local(self, name, data):
        path = os.path.join(self.dir, name)
        with open(path, "wb") as f:
            f.write(data)
        return path

    def test_usage_errors(self):
        self.assertEqual(cli_dispatch(["frobnicate"], io.StringIO(), io.StringIO()), EXIT_USER)
        self.assertEqual(cli_dispatch([], io.StringIO(), io.StringIO()), EXIT_USER)
        self.assertEqual(cli_dispatch(["--version"], io.StringIO(), io.StringIO()), EXIT_OK)
        code, _, err = self.run_cli("tag", "/climate/x", "novalue")
        self.assertEqual(code, EXIT_USER)
        self.assertIn("NAME=VALUE", err)

    def test_missing_config_is_user_error(self):
        code = cli_dispatch(["--config", os.path.join(self.dir, "none.conf"), "ls"], io.StringIO(), io.StringIO())
        self.assertEqual(code, EXIT_USER)

    def test_empty_listing(self):
        self.assertEqual(self.run_cli("ls", "/public"), (EXIT_OK, "", ""))
        self.assertEqual(self.run_cli("ls")[1], "")

    def test_put_get_stat(self):
        source = self._local("in.dat", b"\x00\x01bytes")
        code, out, _ = self.run_cli("put", "/climate/run/in.dat", source)
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("/climate/run/in.dat\t7\tdtn="))
        dest = os.path.join(self.dir, "out.dat")
        self.assertEqual(self.run_cli("get", "/climate/run/in.dat", dest)[0], EXIT_OK)
        with open(dest, "rb") as f:
            self.assertEqual(f.read(), b"\x00\x01bytes")
        code, out, _ = self.run_cli("stat", "/climate/run/in.dat")
        self.assertEqual(out.split("\t")[:4], ["/climate/run/in.dat", "file", "7", "alice"])
        self.assertEqual(self.run_cli("ls", "/")[1], "climate\n")
        self.assertEqual(self.run_cli("ls", "/climate/run")[1], "in.dat\n")

    def test_not_found_is_user_error(self):
        code, _, err = self.run_cli("get", "/climate/none", os.path.join(self.dir, "x"))
        self.assertEqual(code, EXIT_USER)
        self.assertIn("NotFound", err)

    def test_query_and_tag(self):
        granule = sdf_encode(SdfDocument([("Location", AttributeValue.of_text("Pacific"))]))
        self.run_cli("put", "/climate/g1.sdf", self._local("g1.sdf", granule))
        self.run_cli("put", "/climate/g2.sdf", self._local("g2.sdf", b"plain"))
        code, out, _ = self.run_cli("query", 'Location = "Pacific"')
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(lines[:-1], ["/climate/g1.sdf"])
        self.assertTrue(lines[-1].startswith("# elapsed_ms="))

        self.assertEqual(self.run_cli("tag", "/climate/g2.sdf", "Project=ice")[0], EXIT_OK)
        self.assertEqual(self.run_cli("query", 'Project = "ice"')[1].splitlines()[:-1], ["/climate/g2.sdf"])
        self.assertEqual(self.run_cli("query", "Location =")[0], EXIT_USER)

    def test_mkdir_and_register(self):
        self.assertEqual(self.run_cli("mkdir", "/climate/empty")[0], EXIT_OK)
        self.assertEqual(self.run_cli("mkdir", "/climate/empty")[0], EXIT_USER)
        self.assertEqual(self.run_cli("register-ns", "scratch", "--scope", "local")[0], EXIT_OK)
        self.assertEqual(self.run_cli("register-ns", "scratch", "--owner", "bob")[0], EXIT_USER)

    def test_export_and_scrub(self):
        root = os.path.join(self.dir, "dtn-a")
        os.makedirs(os.path.join(root, "climate", "run"))
        for i in range(30):
            with open(os.path.join(root, "climate", "run", "f{:02d}".format(i)), "wb") as f:
                f.write(b"x")
        code, out, _ = self.run_cli("export", "--root", root)
        self.assertEqual(code, EXIT_OK)
        fields = dict(item.split("=") for item in out.split())
        self.assertEqual(int(fields["exported"]) + int(fields["misplaced"]), 30)
        self.assertEqual(fields["partial"], "0")

        listed = self.run_cli("ls", "/climate/run")[1].split()
        self.assertEqual(len(listed), int(fields["exported"]))
        os.remove(os.path.join(root, "climate", "run", listed[0]))
        code, out, _ = self.run_cli("scrub", "--dtn", "a")
        self.assertEqual((code, out), (EXIT_OK, "/climate/run/{}\n".format(listed[0])))

    def test_flush(self):
        self.assertEqual(self.run_cli("flush"), (EXIT_OK, "0\n", ""))


if __name__ == "__main__":
    unittest.main()
