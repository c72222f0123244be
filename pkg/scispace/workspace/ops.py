"""Remote workspace surface: every call routes by placement or fans out to all shards."""
import logging
import os
from typing import Dict, List, Optional
from .local_writes import lw_write, lw_mkdir
from .session import WorkspaceSession
from ..backend.storage import bk_get, bk_exists, resolve
from ..core import KIND_DIRECTORY, SCOPE_GLOBAL
from ..core.paths import WorkspacePath, normalize_path
from ..core.placement import place
from ..core.records import FileRecord, NamespaceTemplate
from ..protocol import (
    PUT_FILE,
    GET_FILE,
    LIST_VISIBLE,
    ENQUEUE_INDEX,
    TAG,
    REGISTER_NS,
    INDEX_ENQUEUE,
    INDEX_NOW,
    INDEX_OFFLINE,
    INDEX_FLUSH,
)
from ..protocol import messages as m
from ..protocol.fields import pack_text, pack_u8, pack_u64
from ..sds import MODE_INLINE_SYNC, MODE_INLINE_ASYNC
from ..sds.specs import spec_lines
from ..sdf.values import AttributeValue
from ..utils.errors import BadRequest, Exists, NotFound, NotVisible, UnknownNamespace

logger = logging.getLogger(__name__)


def _spec_fields(session: WorkspaceSession):
    return [(m.F_SPEC, pack_text(line)) for line in spec_lines(session.specs)]


def _request(session: WorkspaceSession, *fields) -> bytes:
    return m.request_payload(session.collaborator, *fields)


def _index_hook(session: WorkspaceSession, dtn: int, path: WorkspacePath, size: int):
    if session.mode == MODE_INLINE_SYNC:
        mode_fields = [(m.F_INDEX_MODE, pack_u8(INDEX_NOW))]
    elif session.mode == MODE_INLINE_ASYNC:
        mode_fields = [(m.F_INDEX_MODE, pack_u8(INDEX_ENQUEUE)), (m.F_SIZE, pack_u64(size))]
    else:
        return
    payload = _request(session, (m.F_PATH, pack_text(path.display)), *mode_fields, *_spec_fields(session))
    session.call(dtn, ENQUEUE_INDEX, payload)


def ws_write(session: WorkspaceSession, raw_path: str, data: bytes) -> FileRecord:
    path = normalize_path(raw_path)
    if not path.rel:
        raise BadRequest("Cannot write a file over namespace root {}".format(path.display))
    dtn = place(path, session.dtn_count)
    root, flags = session.root(dtn), session.flags[dtn]
    fresh = not bk_exists(root, path.backend_rel)

    entry = lw_write(root, flags, path.backend_rel, data)
    record = FileRecord(path, entry.size, session.collaborator, entry.mtime, dtn, True)
    try:
        session.call(dtn, PUT_FILE, _request(session, (m.F_RECORD, m.pack_record(record))))
    except (BadRequest, UnknownNamespace):
        # rejected outright, so there is nothing for an export to repair
        if fresh:
            os.remove(resolve(root, path.backend_rel))
            flags.drop(path.backend_rel)
        raise
    flags.set(path.backend_rel, True, is_directory=False)
    _index_hook(session, dtn, path, entry.size)
    logger.debug("Wrote %s (%d bytes) to DTN %d", path.display, entry.size, dtn)
    return record


def _visible_record(session: WorkspaceSession, path: WorkspacePath):
    dtn = place(path, session.dtn_count)
    reader = session.call(dtn, GET_FILE, _request(session, (m.F_PATH, pack_text(path.display))))
    record = m.unpack_record(reader.require(m.F_RES_RECORD))
    scope = m.unpack_scope(reader.require(m.F_RES_SCOPE))
    if not record.synced:
        raise NotVisible("{} is not exported yet".format(path.display))
    if scope != SCOPE_GLOBAL and record.owner != session.collaborator:
        raise NotVisible("{} lives in a local namespace owned by someone else".format(path.display))
    return record


def ws_stat(session: WorkspaceSession, raw_path: str) -> FileRecord:
    return _visible_record(session, normalize_path(raw_path))


def ws_read(session: WorkspaceSession, raw_path: str) -> bytes:
    path = normalize_path(raw_path)
    record = _visible_record(session, path)
    if record.is_directory:
        raise BadRequest("{} is a directory".format(path.display))
    return bk_get(session.root(record.dtn_index), path.backend_rel)


def ws_readdir(session: WorkspaceSession, raw_dir: str) -> List[str]:
    """Immediate child names under a directory, merged over all shards.

    The root `/` lists namespaces holding at least one visible entry.
    """
    stripped = raw_dir.strip("/")
    directory = normalize_path(raw_dir) if stripped else None
    prefix = (m.F_PREFIX, pack_text(directory.display)) if directory is not None else None
    replies = session.fanout(LIST_VISIBLE, _request(session, prefix))
    names = set()
    for reader in replies:
        for record in m.records_of(reader):
            if directory is None:
                names.add(record.namespace)
            elif record.path.is_within(directory) and len(record.path.rel) > len(directory.rel):
                names.add(record.path.rel[len(directory.rel)])
    return sorted(names)


def ws_mkdir(session: WorkspaceSession, raw_dir: str) -> FileRecord:
    path = normalize_path(raw_dir)
    if not path.rel:
        raise BadRequest("Namespaces are created with register-ns, not mkdir")
    dtn = place(path, session.dtn_count)
    try:
        session.call(dtn, GET_FILE, _request(session, (m.F_PATH, pack_text(path.display))))
    except NotFound as e:
        if isinstance(e, UnknownNamespace):
            raise
    else:
        raise Exists("{} already exists".format(path.display))

    entry = lw_mkdir(session.root(dtn), session.flags[dtn], path.backend_rel)
    record = FileRecord(path, 0, session.collaborator, entry.mtime, dtn, True, KIND_DIRECTORY)
    session.call(dtn, PUT_FILE, _request(session, (m.F_RECORD, m.pack_record(record))))
    session.flags[dtn].set(path.backend_rel, True, is_directory=True)
    return record


def ws_register_namespace(session: WorkspaceSession, name: str, scope: str = SCOPE_GLOBAL, owner: Optional[str] = None):
    """Register a namespace on every shard; all shards must acknowledge."""
    template = NamespaceTemplate(name, owner or session.collaborator, scope)
    session.fanout(REGISTER_NS, _request(session, (m.F_NAMESPACE, m.pack_namespace(template))))
    logger.info("Registered namespace %s (%s, owner %s)", template.name, template.scope, template.owner)
    return template


def ws_tag(session: WorkspaceSession, raw_path: str, name: str, value: AttributeValue):
    path = normalize_path(raw_path)
    payload = _request(
        session,
        (m.F_PATH, pack_text(path.display)),
        (m.F_ATTRIBUTE, pack_text(name)),
        (m.F_VALUE, m.pack_value(value)),
    )
    session.call(place(path, session.dtn_count), TAG, payload)


def ws_flush(session: WorkspaceSession) -> int:
    """Drain every shard's indexing queue; returns the number of files indexed."""
    replies = session.fanout(ENQUEUE_INDEX, _request(session, (m.F_INDEX_MODE, pack_u8(INDEX_FLUSH)), *_spec_fields(session)))
    return sum(r.uint(m.F_RES_COUNT, 0) for r in replies)


def ws_index_offline(session: WorkspaceSession, selector: str = "") -> Dict[str, int]:
    fields = [(m.F_INDEX_MODE, pack_u8(INDEX_OFFLINE)), *_spec_fields(session)]
    if selector:
        fields.append((m.F_PATH, pack_text(selector)))
    replies = session.fanout(ENQUEUE_INDEX, _request(session, *fields))
    return {
        "files_indexed": sum(r.uint(m.F_RES_COUNT, 0) for r in replies),
        "triples_written": sum(r.uint(m.F_RES_TRIPLES_WRITTEN, 0) for r in replies),
    }


def audit_routing(session: WorkspaceSession) -> List[str]:
    """Visible records whose bytes are not on the backend their path places to."""
    broken = []
    for reader in session.fanout(LIST_VISIBLE, _request(session)):
        for record in m.records_of(reader):
            expected = place(record.path, session.dtn_count)
            if record.dtn_index != expected or not bk_exists(session.root(expected), record.path.backend_rel):
                broken.append(record.path.display)
    return sorted(broken)
