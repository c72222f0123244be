NOT_FOUND = 1
BAD_REQUEST = 2
CONFLICT = 3
INTERNAL = 4
UNSUPPORTED = 5


class ScispaceError(RuntimeError):
    code = INTERNAL


# ------------- paths and placement -------------


class MalformedPath(ScispaceError):
    code = BAD_REQUEST

    def __init__(self, raw, reason, *args, **kwargs):
        super().__init__("Malformed path {!r}: {}".format(raw, reason), *args, **kwargs)


class ZeroDtnCount(ScispaceError):
    code = BAD_REQUEST

    def __init__(self, *args, **kwargs):
        super().__init__("The number of DTNs should be at least 1", *args, **kwargs)


# ------------- sdf format -------------


class SdfError(ScispaceError):
    code = BAD_REQUEST


class BadMagic(SdfError):
    def __init__(self, magic, *args, **kwargs):
        super().__init__("Bad SDF magic {!r}".format(magic), *args, **kwargs)


class UnsupportedVersion(SdfError):
    code = UNSUPPORTED

    def __init__(self, version, *args, **kwargs):
        super().__init__("Unsupported SDF version {:d}".format(version), *args, **kwargs)


class Truncated(SdfError):
    def __init__(self, what, needed, available, *args, **kwargs):
        super().__init__(
            "Truncated input while reading {}: needed {:d} bytes, {:d} available".format(
                what, needed, available
            ),
            *args,
            **kwargs
        )


class TrailingBytes(SdfError):
    def __init__(self, n_bytes, *args, **kwargs):
        super().__init__("{:d} trailing bytes after SDF payload".format(n_bytes), *args, **kwargs)


class MalformedUtf8(SdfError):
    def __init__(self, what, *args, **kwargs):
        super().__init__("Invalid UTF-8 in {}".format(what), *args, **kwargs)


class TooManyAttributes(SdfError):
    def __init__(self, n_attributes, *args, **kwargs):
        super().__init__(
            "An SDF document holds at most 65535 attributes, got {:d}".format(n_attributes),
            *args,
            **kwargs
        )


class NameTooLong(SdfError):
    def __init__(self, n_bytes, *args, **kwargs):
        super().__init__(
            "Attribute names are at most 65535 bytes, got {:d}".format(n_bytes), *args, **kwargs
        )


class TextTooLong(SdfError):
    def __init__(self, n_bytes, *args, **kwargs):
        super().__init__(
            "Text values are at most 65535 bytes, got {:d}".format(n_bytes), *args, **kwargs
        )


class DuplicateAttribute(SdfError):
    def __init__(self, name, *args, **kwargs):
        super().__init__("Duplicate attribute name {!r}".format(name), *args, **kwargs)


# ------------- backend -------------


class EscapesRoot(ScispaceError):
    code = BAD_REQUEST

    def __init__(self, rel_path, *args, **kwargs):
        super().__init__("Path {!r} escapes the backend root".format(rel_path), *args, **kwargs)


class NotFound(ScispaceError):
    code = NOT_FOUND


class IoFailure(ScispaceError):
    code = INTERNAL


# ------------- wire protocol -------------


class ProtocolError(ScispaceError):
    code = BAD_REQUEST


class PayloadTooLarge(ProtocolError):
    def __init__(self, n_bytes, *args, **kwargs):
        super().__init__("Payload of {:d} bytes exceeds the frame bound".format(n_bytes), *args, **kwargs)


class OversizedFrame(ProtocolError):
    def __init__(self, length, *args, **kwargs):
        super().__init__("Declared frame length {:d} exceeds the frame bound".format(length), *args, **kwargs)


class FrameTruncated(ProtocolError):
    def __init__(self, received, expected, *args, **kwargs):
        super().__init__(
            "Connection closed mid-frame after {:d} of {:d} bytes".format(received, expected),
            *args,
            **kwargs
        )


class UnsupportedMessage(ProtocolError):
    code = UNSUPPORTED


# ------------- shards -------------


class BadRequest(ScispaceError):
    code = BAD_REQUEST


class WrongShard(BadRequest):
    pass


class UnknownNamespace(NotFound):
    pass


class BadName(BadRequest):
    pass


class Conflict(ScispaceError):
    code = CONFLICT


class Exists(Conflict):
    pass


class NotVisible(ScispaceError):
    code = NOT_FOUND


class ShardUnavailable(ScispaceError):
    code = INTERNAL


class QueueFull(ScispaceError):
    code = CONFLICT


# ------------- meu -------------


class LockHeld(ScispaceError):
    code = CONFLICT

    def __init__(self, lock_path, holder, age_s, *args, **kwargs):
        super().__init__(
            "The export lock {} is held by {} since {:.1f} s".format(lock_path, holder, age_s),
            *args,
            **kwargs
        )


# ------------- queries -------------


class QuerySyntaxError(ScispaceError):
    code = BAD_REQUEST

    def __init__(self, query, position, expected, *args, **kwargs):
        self.position = position
        super().__init__(
            "Syntax error at position {:d} of {!r}: expected {}".format(position, query, expected),
            *args,
            **kwargs
        )


class QueryTypeError(ScispaceError):
    code = BAD_REQUEST


# ------------- configuration -------------


class ConfigError(ScispaceError):
    code = BAD_REQUEST


def _all_error_classes(base=ScispaceError):
    classes = {base.__name__: base}
    for sub in base.__subclasses__():
        classes.update(_all_error_classes(sub))
    return classes


_GENERIC_BY_CODE = {
    NOT_FOUND: NotFound,
    BAD_REQUEST: BadRequest,
    CONFLICT: Conflict,
    INTERNAL: ScispaceError,
    UNSUPPORTED: UnsupportedMessage,
}


def rebuild_error(code, message, name=None):
    """Re-create the exception a shard reported in an ERROR frame."""
    cls = _all_error_classes().get(name) if name else None
    if cls is None:
        cls = _GENERIC_BY_CODE.get(code, ScispaceError)
    exc = cls.__new__(cls)
    RuntimeError.__init__(exc, message)
    return exc
