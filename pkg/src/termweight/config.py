"""Flat dotted-key configuration: defaults < config file < command-line flags."""
from __future__ import annotations

from dataclasses import dataclass

from .evaluation import DEFAULT_B0_GRID, METRICS, ExperimentConfig
from .weighting import GLOBAL_SCHEMES, LOCAL_SCHEMES, SCALINGS


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Key:
    default: str
    help: str


KEYS = {
    "data.train": Key("", "training corpus (TSV file or pos/neg directory)"),
    "data.test": Key("", "test corpus; empty means cross-validation"),
    "data.min_count": Key("3", "minimum total occurrences for a vocabulary feature"),
    "data.ngram_max": Key("1", "1 = unigrams, 2 = unigrams + bigrams"),
    "labels.positive": Key("pos", "positive label token / directory name"),
    "labels.negative": Key("neg", "negative label token / directory name"),
    "weighting.local": Key("tp", "local scheme: " + ", ".join(LOCAL_SCHEMES)),
    "weighting.global": Key("re", "global scheme: " + ", ".join(GLOBAL_SCHEMES)),
    "weighting.b0": Key("0:1:0.1", "b0 value or grid for 're' (v | a,b,c | start:stop:step)"),
    "weighting.scaling": Key("f5", "scaling function for 'scaled_x': " + ", ".join(SCALINGS)),
    "weighting.normalize": Key("true", "cosine-normalize document vectors"),
    "weighting.k": Key("0.5", "atf constant k"),
    "weighting.k1": Key("1.2", "btf parameter k1"),
    "weighting.b": Key("0.95", "btf parameter b"),
    "svm.C": Key("1.0", "SVM regularization trade-off C"),
    "svm.tol": Key("0.1", "stopping tolerance on the projected gradient"),
    "svm.max_iter": Key("1000", "maximum passes over the data"),
    "eval.folds": Key("10", "cross-validation folds"),
    "eval.holdout": Key("0.2", "held-out fraction of the training data for b0 tuning"),
    "eval.metric": Key("accuracy", "metric for reporting and tuning: " + ", ".join(METRICS)),
    "model.dir": Key("", "directory with trained model files (default: run.out_dir)"),
    "run.seed": Key("0", "seed for folds, holdout splits and SVM coordinate order"),
    "run.out_dir": Key("out", "output directory"),
}


def defaults():
    return {k: v.default for k, v in KEYS.items()}


def parse_text(text, source="<config>"):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown config key {key!r}")
        values[key] = value
    return values


def parse_bool(text, key):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


def parse_grid(text):
    """Parse ``0.3``, ``0,0.5,1`` or inclusive ``start:stop:step``."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            if step <= 0:
                raise ConfigError("grid step must be positive")
            n = int(round((stop - start) / step))
            values = [round(start + i * step, 10) for i in range(n + 1)]
        else:
            values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"malformed grid {text!r}") from None
    if not values:
        raise ConfigError("empty grid")
    return tuple(values)


def parse_list(text, allowed=None):
    """Comma list, with ``f0..f7`` style ranges expanded."""
    out = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..")
            prefix = lo.rstrip("0123456789")
            if not prefix or hi.rstrip("0123456789") not in ("", prefix):
                raise ConfigError(f"malformed range {part!r}")
            a = int(lo[len(prefix):])
            b = int(hi[len(hi.rstrip("0123456789")):])
            out.extend(f"{prefix}{i}" for i in range(a, b + 1))
        else:
            out.append(part)
    if allowed is not None:
        bad = [v for v in out if v not in allowed]
        if bad:
            raise ConfigError(f"unknown value(s): {', '.join(bad)}")
    if not out:
        raise ConfigError("empty list")
    return out


def _num(values, key, kind):
    try:
        return kind(values[key])
    except ValueError:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {values[key]!r}") from None


def experiment_config(values):
    """Build an :class:`ExperimentConfig` from resolved string values."""
    try:
        return ExperimentConfig(
            train_path=values["data.train"] or None,
            test_path=values["data.test"] or None,
            positive=values["labels.positive"],
            negative=values["labels.negative"],
            ngram_max=_num(values, "data.ngram_max", int),
            min_count=_num(values, "data.min_count", int),
            local=values["weighting.local"],
            atf_k=_num(values, "weighting.k", float),
            bm25_k1=_num(values, "weighting.k1", float),
            bm25_b=_num(values, "weighting.b", float),
            scheme=values["weighting.global"],
            b0_grid=parse_grid(values["weighting.b0"]) if values["weighting.b0"] else DEFAULT_B0_GRID,
            scaling=values["weighting.scaling"],
            normalize=parse_bool(values["weighting.normalize"], "weighting.normalize"),
            C=_num(values, "svm.C", float),
            tol=_num(values, "svm.tol", float),
            max_iter=_num(values, "svm.max_iter", int),
            folds=_num(values, "eval.folds", int),
            holdout=_num(values, "eval.holdout", float),
            metric=values["eval.metric"],
            seed=_num(values, "run.seed", int),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
