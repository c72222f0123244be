import argparse
import contextlib
import logging
import sys
from . import EXIT_OK, EXIT_USER, EXIT_INTERNAL
from .config import CollabConfig, load_config
from .. import __version__
from ..bench import EXPERIMENTS, DEFAULT_SEED
from ..bench.experiments import run_experiment
from ..core import SCOPE_GLOBAL, SCOPE_LOCAL
from ..metashard.service import ShardService
from ..meu.export import meu_export
from ..protocol.server import ShardServer
from ..queryql.executor import execute_query
from ..sdf.values import parse_typed_literal
from ..utils.errors import ScispaceError, Conflict, INTERNAL
from ..utils.logs import configure_logging
from ..workspace.cluster import LocalCluster
from ..workspace.ops import (
    ws_write,
    ws_read,
    ws_readdir,
    ws_stat,
    ws_mkdir,
    ws_tag,
    ws_flush,
    ws_register_namespace,
)
from ..workspace.session import WorkspaceSession

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("{}\n{}".format(self.format_usage().rstrip(), message))


def _csv(cast):
    def parse(text):
        try:
            return [cast(item) for item in text.split(",") if item.strip()]
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e))

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scispace", description="Collaboration workspace over data transfer nodes.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("--config", help="collaboration config file (default: $SCISPACE_CONFIG)")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default) or ERROR")
    parser.add_argument(
        "--embedded",
        action="store_true",
        help="run the shard services in this process instead of connecting to serve-shard processes",
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("serve-shard", help="serve the shards of one DTN")
    p.add_argument("--dtn", required=True, help="DTN id or index")
    p.add_argument("--no-drain", action="store_true", help="do not start the background indexing worker")

    p = sub.add_parser("put", help="write a local file into the workspace")
    p.add_argument("path")
    p.add_argument("source")

    p = sub.add_parser("get", help="read a workspace file")
    p.add_argument("path")
    p.add_argument("dest", nargs="?", help="output file (default: standard output)")

    p = sub.add_parser("ls", help="list a workspace directory")
    p.add_argument("path", nargs="?", default="/")

    p = sub.add_parser("stat", help="show the record of a workspace entry")
    p.add_argument("path")

    p = sub.add_parser("mkdir", help="create a workspace directory")
    p.add_argument("path")

    p = sub.add_parser("export", help="commit locally written entries of a backend")
    p.add_argument("--root", required=True, help="backend root of one of the configured DTNs")
    p.add_argument("--path", default="", help="subtree below the root (default: everything)")
    p.add_argument("--index", action="store_true", help="index the exported subtree offline afterwards")

    p = sub.add_parser("tag", help="attach a custom attribute to a file")
    p.add_argument("path")
    p.add_argument("assignment", metavar="NAME=VALUE[:type]")

    p = sub.add_parser("query", help="search the discovery shards")
    p.add_argument("query")

    sub.add_parser("flush", help="drain every shard's indexing queue")

    p = sub.add_parser("scrub", help="drop shard records whose bytes are gone (service must be stopped)")
    p.add_argument("--dtn", required=True, help="DTN id or index")

    p = sub.add_parser("register-ns", help="register a namespace on every shard")
    p.add_argument("name")
    p.add_argument("--scope", choices=(SCOPE_GLOBAL, SCOPE_LOCAL), default=SCOPE_GLOBAL)
    p.add_argument("--owner", default=None, help="owning collaborator (default: this one)")

    p = sub.add_parser("bench", help="run a benchmark and print its rows")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", help="write rows to this file instead of standard output")
    p.add_argument("--human", action="store_true", help="print aligned text instead of rows")
    p.add_argument("--base-dir", default=None, help="where throwaway backends are created")
    p.add_argument("--counts", type=_csv(int), help="meu: file counts")
    p.add_argument("--attrs", type=_csv(int), help="modes: attribute counts")
    p.add_argument("--ratios", type=_csv(float), help="hitratio: hit ratios")
    p.add_argument("--blocks", type=_csv(int), help="io: block sizes in bytes")
    p.add_argument("--sessions", type=_csv(int), help="collab: session counts")
    p.add_argument("--files", type=int, help="modes/hitratio/collab: files per run or session")
    p.add_argument("--file-size", type=int, help="modes/collab: bytes per file")
    p.add_argument("--queries", type=int, help="hitratio: queries per attribute and ratio")
    p.add_argument("--reps", type=int, help="modes: repetitions")
    return parser


@contextlib.contextmanager
def open_session(config: CollabConfig, embedded: bool = False):
    cluster = None
    if embedded:
        cluster = LocalCluster(config.dtns, config.specs, config.thresholds, config.fsync, config.snapshot_every)
        session = cluster.session(config.collaborator, config.mode, flag_mode=config.flag_mode)
    else:
        session = WorkspaceSession.tcp(
            config.collaborator, config.dtns, mode=config.mode, specs=config.specs, flag_mode=config.flag_mode
        )
    try:
        for template in config.namespaces:
            try:
                ws_register_namespace(session, template.name, template.scope, template.owner)
            except Conflict as e:
                logger.warning("Namespace %s from the config conflicts with the shards: %s", template.name, e)
        yield session
    finally:
        if cluster is not None:
            cluster.close()
        else:
            session.close()


def _serve_shard(args, config):
    dtn = config.dtn(args.dtn)
    service = ShardService(
        dtn, len(config.dtns), config.fsync, config.snapshot_every, config.thresholds, config.specs
    ).start(drain_worker=not args.no_drain)
    server = ShardServer(service, dtn.host, dtn.port)
    logger.warning("Serving DTN %s (index %d) on %s:%d", dtn.id, dtn.index, dtn.host, server.port)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
        service.stop()
    return EXIT_OK


def _scrub(args, config, out):
    dtn = config.dtn(args.dtn)
    service = ShardService(dtn, len(config.dtns), config.fsync, config.snapshot_every, config.thresholds)
    try:
        for display in service.scrub():
            print(display, file=out)
    finally:
        service.stop()
    return EXIT_OK


def _bench(args, out):
    options = {"seed": args.seed, "base_dir": args.base_dir}
    by_experiment = {
        "meu": {"file_counts": args.counts},
        "modes": {"attr_counts": args.attrs, "n_files": args.files, "file_size": args.file_size, "reps": args.reps},
        "hitratio": {"ratios": args.ratios, "n_files": args.files, "queries": args.queries},
        "io": {"block_sizes": args.blocks},
        "collab": {"session_counts": args.sessions, "files_per_session": args.files, "file_size": args.file_size},
    }
    options.update({k: v for k, v in by_experiment[args.experiment].items() if v is not None})
    report = run_experiment(args.experiment, **options)
    text = "".join(line + "\n" for line in report.lines()) if args.human else report.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _workspace_command(args, session, out):
    cmd = args.command
    if cmd == "put":
        with open(args.source, "rb") as f:
            record = ws_write(session, args.path, f.read())
        print("{}\t{:d}\tdtn={:d}".format(record.path.display, record.size, record.dtn_index), file=out)
    elif cmd == "get":
        data = ws_read(session, args.path)
        if args.dest:
            with open(args.dest, "wb") as f:
                f.write(data)
        else:
            out.flush()
            getattr(out, "buffer", sys.stdout.buffer).write(data)
    elif cmd == "ls":
        for name in ws_readdir(session, args.path):
            print(name, file=out)
    elif cmd == "stat":
        r = ws_stat(session, args.path)
        print("\t".join((r.path.display, r.kind, str(r.size), r.owner, str(r.mtime), "dtn={:d}".format(r.dtn_index))), file=out)
    elif cmd == "mkdir":
        ws_mkdir(session, args.path)
    elif cmd == "export":
        report = meu_export(args.root, args.path, session, index=args.index)
        print(
            "exported={:d} partial={:d} misplaced={:d} indexed={:d}".format(
                report.exported, int(report.partial), len(report.misplaced), report.indexed
            ),
            file=out,
        )
        if report.partial:
            logger.error("Shards %s were unreachable; rerun export to finish", report.failed_shards)
            return EXIT_INTERNAL
    elif cmd == "tag":
        name, sep, literal = args.assignment.partition("=")
        if not sep or not name:
            raise UsageError("tag expects NAME=VALUE[:type], got {!r}".format(args.assignment))
        ws_tag(session, args.path, name, parse_typed_literal(literal))
    elif cmd == "query":
        paths, elapsed_ms = execute_query(session, args.query)
        for path in paths:
            print(path, file=out)
        print("# elapsed_ms={:d}".format(int(round(elapsed_ms))), file=out)
    elif cmd == "flush":
        print(ws_flush(session), file=out)
    elif cmd == "register-ns":
        ws_register_namespace(session, args.name, args.scope, args.owner)
    return EXIT_OK


def cli_dispatch(argv=None, out=None, err=None) -> int:
    """Run one command; returns 0 on success, 1 on user errors and 2 on internal failures."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            # --help and --version
            return e.code or EXIT_OK
        if args.command is None:
            raise UsageError(parser.format_usage().rstrip())
        configure_logging(args.log_level)
        if args.command == "bench":
            return _bench(args, out)
        config = load_config(args.config)
        if args.command == "serve-shard":
            return _serve_shard(args, config)
        if args.command == "scrub":
            return _scrub(args, config, out)
        with open_session(config, args.embedded) as session:
            return _workspace_command(args, session, out)
    except UsageError as e:
        print(e, file=err)
        return EXIT_USER
    except ScispaceError as e:
        print("scispace: {}: {}".format(type(e).__name__, e), file=err)
        return EXIT_INTERNAL if e.code == INTERNAL else EXIT_USER
    except (ValueError, OSError) as e:
        print("scispace: {}".format(e), file=err)
        return EXIT_USER
    except Exception as e:
        logger.exception("Unexpected failure")
        print("scispace: internal error: {}".format(e), file=err)
        return EXIT_INTERNAL


def main():
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
