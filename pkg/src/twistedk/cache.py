"""Optional on-disk cache for Smith decompositions.

Keyed by a hash of the matrix; writes are atomic (temp file + rename).
In verify mode every hit is recomputed and compared, so a corrupt cache
can only slow things down, never change an answer.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

from .exact_linalg import Mat, SNF


class SnfCache:
    def __init__(self, directory, verify=False):
        self.directory = directory
        self.verify = verify
        os.makedirs(directory, exist_ok=True)
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(M: Mat) -> str:
        payload = json.dumps([M.m, M.n, M.rows]).encode()
        return hashlib.sha256(payload).hexdigest()

    def _path(self, key):
        return os.path.join(self.directory, key + ".json")

    def fetch(self, M: Mat, compute) -> SNF:
        key = self.key(M)
        path = self._path(key)
        cached = None
        if os.path.exists(path):
            try:
                with open(path) as fh:
                    data = json.load(fh)
                cached = SNF(*(Mat(*entry) for entry in data["parts"]))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                cached = None
        if cached is not None and not self.verify:
            self.hits += 1
            return cached
        result = compute(M)
        if cached is not None and self.verify:
            assert all(getattr(cached, f) == getattr(result, f)
                       for f in ("U", "D", "V", "U_inv", "V_inv")), \
                "cache verification mismatch"
            self.hits += 1
            return result
        self.misses += 1
        data = {"parts": [[p.m, p.n, p.rows] for p in
                          (result.U, result.D, result.V,
                           result.U_inv, result.V_inv)]}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(data, fh)
            os.replace(tmp, path)
        except OSError:
            if os.path.exists(tmp):
                os.unlink(tmp)
        return result
