"""Run configuration: defaults, "key = value" config files, flag overrides.

Precedence is defaults < config file < command-line flags.  Unknown keys in
a config file are rejected, and every command echoes its fully-resolved
configuration (as one JSON line on stderr) so a run can be reproduced from
its log alone.
"""

from __future__ import annotations

import json
import sys
from dataclasses import asdict, dataclass, fields

from .errors import ConfigError


@dataclass
class RunConfig:
    # ingestion
    input: str | None = None
    directed: bool = False
    weighted: bool = False
    comment_prefix: str = "#"
    dedupe: bool = True
    node_map: str | None = None
    # sampling
    num: int | None = None  # None = max(8, ceil(avg degree))
    n_sample: int = 10
    strategy: str = "no-walk"  # or "random-walk" (baseline)
    walk_len: int = 40
    walks_per_node: int = 10
    # skip-gram training
    dim: int = 128
    window: str = "full"  # "full" or an integer
    negatives: int = 5
    alpha: float = 0.025
    min_alpha: float | None = None  # None = alpha * 0.004
    fixed_alpha: bool = False
    epochs: int = 5
    noise_exponent: float = 0.75
    # propagation
    rate: float = 0.1
    iterations: int = 1
    method: str = "average"
    # node-classification task files
    labels: str | None = None
    train_split: str | None = None
    valid_split: str | None = None
    test_split: str | None = None
    num_classes: int | None = None
    # link-prediction task files
    train_edges: str | None = None
    valid_pos: str | None = None
    valid_neg: str | None = None
    test_pos: str | None = None
    test_neg: str | None = None
    metric: str = "roc_auc"
    combiner: str = "hadamard"
    # classifier
    hidden: str = "256,256"
    dropout: float = 0.5
    mlp_epochs: int = 100
    lr: float = 1e-3
    batch: int = 1024
    runs: int = 10
    # i/o
    embeddings: str | None = None
    output: str | None = None
    binary: bool = False
    report: str | None = None
    # sweep
    param: str | None = None
    values: str | None = None
    task: str = "node"
    # bench
    thread_list: str = "1,2,4"
    backends: str = "numba"
    repeats: int = 3
    # reproducibility
    seed: int = 0
    threads: int | None = None  # None = NEIGHBOR2VEC_THREADS or 1

    def resolved_window(self) -> int | None:
        if self.window == "full":
            return None
        try:
            w = int(self.window)
        except ValueError:
            raise ConfigError(f"window must be an integer or 'full', got {self.window!r}") from None
        if w < 1:
            raise ConfigError("window must be >= 1")
        return w

    def resolved_hidden(self) -> tuple:
        try:
            dims = tuple(int(x) for x in str(self.hidden).split(","))
        except ValueError:
            raise ConfigError(f"hidden must be 'h1,h2', got {self.hidden!r}") from None
        if len(dims) != 2:
            raise ConfigError("hidden must name exactly two layer widths")
        return dims

    def echo(self, command: str, stream=None) -> None:
        payload = {"command": command, **asdict(self)}
        print("config: " + json.dumps(payload, sort_keys=True), file=stream or sys.stderr)


_FIELDS = {f.name: f for f in fields(RunConfig)}

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _coerce(name: str, raw: str):
    f = _FIELDS[name]
    t = f.type
    if t.startswith("bool"):
        low = raw.strip().lower()
        if low in _BOOL_TRUE:
            return True
        if low in _BOOL_FALSE:
            return False
        raise ConfigError(f"{name}: expected a boolean, got {raw!r}")
    if t.startswith("int"):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{name}: expected an integer, got {raw!r}") from None
    if t.startswith("float"):
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{name}: expected a number, got {raw!r}") from None
    return raw


def load_config_file(path) -> dict:
    """Parse "key = value" lines; '#' starts a comment; keys use - or _."""
    values = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _FIELDS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _coerce(key, raw)
    return values


def resolve(file_values: dict, cli_values: dict) -> RunConfig:
    """Defaults, then config-file values, then explicitly-set CLI flags."""
    cfg = RunConfig()
    for key, value in file_values.items():
        setattr(cfg, key, value)
    for key, value in cli_values.items():
        if value is not None:
            setattr(cfg, key, value)
    return cfg
