"""Run configuration: numerical knobs, worker count, output paths, seed.

A config can be loaded from a flat key=value text file; command-line flags
override file values.  The worker count may additionally be overridden by
the ISOBIF_WORKERS environment variable (that variable only; all other
settings come from file or flags so runs stay reproducible).
"""

from __future__ import annotations

import dataclasses
import hashlib
import os
from dataclasses import dataclass


@dataclass(frozen=True)
class RunConfig:
    tol_ode: float = 1e-10
    tol_newton: float = 1e-8
    delta_endpoint_factor: float = 1e-4
    grid_n: int = 40
    fine_n: int = 400
    overflow_cap: float = 1e12
    dedup_eps: float = 1e-4
    worker_count: int = 1
    output_dir: str = "runs"
    seed: int = 2024

    def __post_init__(self):
        for name in ("tol_ode", "tol_newton", "delta_endpoint_factor", "overflow_cap", "dedup_eps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.grid_n < 8:
            raise ValueError("grid_n must be at least 8")
        if self.fine_n < 8:
            raise ValueError("fine_n must be at least 8")
        if self.worker_count < 1:
            raise ValueError("worker_count must be positive")

    def hash(self) -> str:
        """Short digest identifying the numeric configuration.

        output_dir and worker_count are excluded: neither changes any
        computed number, and the digest must stay stable when the same
        run is written somewhere else or on a different core count.
        """
        parts = []
        for f in dataclasses.fields(self):
            if f.name in ("output_dir", "worker_count"):
                continue
            v = getattr(self, f.name)
            if isinstance(v, float):
                parts.append(f"{f.name}={v!r}")
            else:
                parts.append(f"{f.name}={v}")
        blob = "\n".join(parts).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


DEFAULT_CONFIG = RunConfig()

_INT_KEYS = {"grid_n", "fine_n", "worker_count", "seed"}
_FLOAT_KEYS = {
    "tol_ode",
    "tol_newton",
    "delta_endpoint_factor",
    "overflow_cap",
    "dedup_eps",
}
_STR_KEYS = {"output_dir"}


def _coerce(key: str, val):
    """Typed value for a known key; strings from files or --set get parsed."""
    if key in _INT_KEYS:
        return int(val)
    if key in _FLOAT_KEYS:
        return float(val)
    if key in _STR_KEYS:
        return str(val)
    raise ValueError(f"unknown config key {key!r}")


def parse_config_file(path: str) -> dict:
    """Read key=value lines; '#' starts a comment, blank lines ignored."""
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            key, _, val = line.partition("=")
            try:
                values[key.strip()] = _coerce(key.strip(), val.strip())
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return values


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from an optional file, overrides, and environment."""
    values: dict = {}
    if path is not None:
        values.update(parse_config_file(path))
    if overrides:
        values.update(
            {k: _coerce(k, v) for k, v in overrides.items() if v is not None}
        )
    env_workers = os.environ.get("ISOBIF_WORKERS")
    if env_workers is not None and "worker_count" not in (overrides or {}):
        values["worker_count"] = int(env_workers)
    return RunConfig(**values)


def apply_worker_count(cfg: RunConfig) -> None:
    """Point numba's thread pool at the configured worker count."""
    import numba

    try:
        numba.set_num_threads(min(cfg.worker_count, numba.config.NUMBA_NUM_THREADS))
    except ValueError:
        pass
