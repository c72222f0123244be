import logging
from typing import Callable, Dict, Iterable, List, Optional
from . import FS_SIZE, FS_MTIME
from .discovery import AttributeTriple
from .specs import AttributeSpec
from ..sdf import SDF_SUFFIX
from ..sdf.codec import sdf_decode
from ..sdf.values import AttributeValue
from ..utils.errors import SdfError

logger = logging.getLogger(__name__)


def sdf_attributes(file_bytes: bytes):
    return sdf_decode(file_bytes).attributes


# suffix -> callable(bytes) -> [(name, AttributeValue)]; raises on undecodable input
EXTRACTORS: Dict[str, Callable] = {SDF_SUFFIX: sdf_attributes}


def register_extractor(suffix: str, extractor: Callable):
    EXTRACTORS[suffix.lower()] = extractor


def extractor_for(file: str) -> Optional[Callable]:
    name = file.rsplit("/", 1)[-1]
    dot = name.rfind(".")
    if dot <= 0:
        return None
    return EXTRACTORS.get(name[dot:].lower())


def extract_attributes(file: str, file_bytes: bytes, specs: Iterable[AttributeSpec], stat=None) -> List[AttributeTriple]:
    """Triples for every header attribute matching a spec by name and type.

    With a stat context (anything with `size` and `mtime`), the fs.size and
    fs.mtime pseudo-attributes are added as well.
    """
    wanted = {s.name: s.tag for s in specs}
    triples = []
    extractor = extractor_for(file)
    if extractor is not None:
        try:
            attributes = extractor(file_bytes)
        except SdfError as e:
            logger.debug("No attributes in %s: %s", file, e)
            attributes = []
        for name, value in attributes:
            if wanted.get(name) == value.tag:
                triples.append(AttributeTriple(name, file, value))
    if stat is not None:
        triples.append(AttributeTriple(FS_SIZE, file, AttributeValue.of_int(int(stat.size))))
        triples.append(AttributeTriple(FS_MTIME, file, AttributeValue.of_int(int(stat.mtime))))
    return triples
