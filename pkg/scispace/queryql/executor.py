import logging
import time
from typing import List, Tuple, Union
from .parser import parse_query
from .predicate import Predicate
from ..protocol import QUERY
from ..protocol import messages as m

logger = logging.getLogger(__name__)


def query_payload(requester: str, pred: Predicate) -> bytes:
    return m.request_payload(
        requester, *[(m.F_CLAUSE, m.pack_clause(c.attribute, c.op, c.literal)) for c in pred.clauses]
    )


def execute_query(session, pred: Union[Predicate, str]) -> Tuple[List[str], float]:
    """Scatter a predicate to every discovery shard and merge the visible hits."""
    if isinstance(pred, str):
        pred = parse_query(pred)
    t0 = time.perf_counter()
    replies = session.fanout(QUERY, query_payload(session.collaborator, pred))
    hits = set()
    for reader in replies:
        hits.update(raw.decode("utf-8") for raw in reader.all(m.F_RES_PATH))
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    logger.debug("Query %s matched %d files in %.2f ms", pred, len(hits), elapsed_ms)
    return sorted(hits), elapsed_ms
