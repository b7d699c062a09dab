"""On-disk JSON cache of per-(discriminant, p) field data."""

from __future__ import annotations

import json
import logging
import os
import time
from pathlib import Path

from .classgroup import class_group, unit_group
from .fields import parse_place
from .virtual_units import basis_from_json, virtual_unit_basis

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
ENV_VAR = "GOVERNING_CACHE"


def cache_dir(explicit=None):
    path = explicit or os.environ.get(ENV_VAR)
    return Path(path) if path else None


def _entry_path(directory, F, p):
    return directory / f"disc{F.disc}_p{p}.json"


def load_entry(directory, F, p):
    path = _entry_path(directory, F, p)
    if not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
        if data.get("format") != FORMAT_VERSION or data.get("disc") != F.disc or data.get("p") != p:
            raise ValueError("key mismatch")
        return data
    except (ValueError, KeyError, OSError) as exc:
        log.warning("discarding corrupt cache entry %s: %s", path, exc)
        return None


def store_entry(directory, F, p, basis):
    directory.mkdir(parents=True, exist_ok=True)
    now = time.time()
    data = {
        "format": FORMAT_VERSION,
        "disc": F.disc,
        "p": p,
        "field": F.spec_string(),
        "class_group": class_group(F).to_json(),
        "units": unit_group(F).to_json(),
        "basis": basis.to_json(),
        "created": now,
        "updated": now,
    }
    path = _entry_path(directory, F, p)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data, indent=1))
    tmp.replace(path)


def cached_basis(F, p, places, directory=None):
    """Virtual-unit basis covering ``places``, read from or written to the cache."""
    directory = cache_dir(directory)
    if directory is None:
        return virtual_unit_basis(F, p, places)
    entry = load_entry(directory, F, p)
    if entry is not None:
        try:
            B = basis_from_json(F, p, entry["basis"], parse_place)
        except Exception as exc:  # corrupt payload
            log.warning("discarding unreadable cached basis: %s", exc)
            B = None
        if B is not None and B.covers(places):
            return B
    B = virtual_unit_basis(F, p, places)
    store_entry(directory, F, p, B)
    return B
