"""Seeded SDF corpora shaped like satellite observation granules."""
import math
from typing import List, Tuple
import numpy as np
from ..sdf import TAG_INT, TAG_FLOAT, TAG_TEXT
from ..sdf.codec import SdfDocument, sdf_encode
from ..sdf.values import AttributeValue
from ..sds.specs import AttributeSpec, spec_set

LOCATIONS = ["Pacific", "Atlantic", "Indian", "Arctic", "Southern", "Mediterranean"]
INSTRUMENTS = ["MODIS", "VIIRS", "CALIOP", "AIRS", "MISR"]
YEARS = [2014, 2015, 2016, 2017]

BASE_SPECS = [
    AttributeSpec("Location", TAG_TEXT),
    AttributeSpec("Instrument", TAG_TEXT),
    AttributeSpec("Date", TAG_TEXT),
    AttributeSpec("DayNight", TAG_INT),
]
_EXTRA_TAGS = (TAG_INT, TAG_FLOAT, TAG_TEXT)

# attribute shape -> query selecting its hit set
HIT_QUERIES = {
    "Location": 'Location = "Pacific"',
    "Instrument": 'Instrument = "MODIS"',
    "Date": 'Date like "2016%"',
    "DayNight": "DayNight = 1",
}


def make_specs(n_attrs: int):
    """The four observation attributes first, then synthetic ones cycling int/float/text."""
    if n_attrs < 0:
        raise ValueError("The attribute count should be non-negative, got {:d}".format(n_attrs))
    specs = BASE_SPECS[:n_attrs]
    for k in range(len(specs), n_attrs):
        specs.append(AttributeSpec("attr_{:03d}".format(k), _EXTRA_TAGS[k % len(_EXTRA_TAGS)]))
    return spec_set(specs)


def _date(rng, year: int) -> str:
    return "{:d}-{:02d}-{:02d}".format(year, int(rng.integers(1, 13)), int(rng.integers(1, 29)))


def _random_value(rng, spec: AttributeSpec) -> AttributeValue:
    if spec.name == "Location":
        return AttributeValue.of_text(LOCATIONS[int(rng.integers(len(LOCATIONS)))])
    if spec.name == "Instrument":
        return AttributeValue.of_text(INSTRUMENTS[int(rng.integers(len(INSTRUMENTS)))])
    if spec.name == "Date":
        return AttributeValue.of_text(_date(rng, YEARS[int(rng.integers(len(YEARS)))]))
    if spec.name == "DayNight":
        return AttributeValue.of_int(int(rng.integers(2)))
    if spec.tag == TAG_INT:
        return AttributeValue.of_int(int(rng.integers(-1000, 1000)))
    if spec.tag == TAG_FLOAT:
        return AttributeValue.of_float(float(np.round(rng.normal(0.0, 100.0), 3)))
    return AttributeValue.of_text("v{:d}".format(int(rng.integers(50))))


def granule(rng, specs, payload_size: int) -> bytes:
    attributes = [(s.name, _random_value(rng, s)) for s in sorted(specs)]
    payload = rng.integers(0, 256, size=payload_size, dtype=np.uint8).tobytes()
    return sdf_encode(SdfDocument(attributes, payload))


def generate_corpus(seed: int, n_files: int, specs, payload_size: int, prefix: str = "/public/granules") -> List[Tuple[str, bytes]]:
    """(path, bytes) pairs; identical for identical arguments."""
    rng = np.random.default_rng(seed)
    files = []
    for i in range(n_files):
        path = "{}/d{:02d}/g{:06d}.sdf".format(prefix, i % 16, i)
        files.append((path, granule(rng, specs, payload_size)))
    return files


def _miss(rng, attribute: str) -> AttributeValue:
    if attribute == "Location":
        return AttributeValue.of_text(LOCATIONS[1 + int(rng.integers(len(LOCATIONS) - 1))])
    if attribute == "Instrument":
        return AttributeValue.of_text(INSTRUMENTS[1 + int(rng.integers(len(INSTRUMENTS) - 1))])
    if attribute == "Date":
        return AttributeValue.of_text(_date(rng, 2015))
    return AttributeValue.of_int(0)


def _hit(rng, attribute: str) -> AttributeValue:
    if attribute == "Location":
        return AttributeValue.of_text("Pacific")
    if attribute == "Instrument":
        return AttributeValue.of_text("MODIS")
    if attribute == "Date":
        return AttributeValue.of_text(_date(rng, 2016))
    return AttributeValue.of_int(1)


def hit_count(ratio: float, total: int) -> int:
    if not 0.0 <= ratio <= 1.0:
        raise ValueError("Hit ratios lie in [0, 1], got {}".format(ratio))
    # guard against 0.75 * 400 landing a hair above an integer
    return min(total, int(math.ceil(round(ratio * total, 9))))


def hitratio_corpus(seed: int, n_files: int, ratio: float, payload_size: int = 256, prefix: str = "/public/hits"):
    """Each of the four attributes matches its hit query on exactly ceil(ratio * n_files) files.

    The hit sets are drawn independently per attribute.
    """
    rng = np.random.default_rng(seed)
    n_hits = hit_count(ratio, n_files)
    hit_sets = {a: set(rng.permutation(n_files)[:n_hits].tolist()) for a in HIT_QUERIES}
    files = []
    for i in range(n_files):
        attributes = []
        for spec in sorted(BASE_SPECS):
            if i in hit_sets[spec.name]:
                attributes.append((spec.name, _hit(rng, spec.name)))
            else:
                attributes.append((spec.name, _miss(rng, spec.name)))
        payload = rng.integers(0, 256, size=payload_size, dtype=np.uint8).tobytes()
        files.append(("{}/h{:06d}.sdf".format(prefix, i), sdf_encode(SdfDocument(attributes, payload))))
    return files, n_hits
