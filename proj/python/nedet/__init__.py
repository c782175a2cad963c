"""Detector networks whose units fire on learned sets of input addresses."""

import json

from . import _nedet
from ._nedet import (
    Address,
    ComparisonRule,
    Detector,
    LevelBand,
    NedetError,
    PatternSet,
    compete,
    frequency_from_level,
    level_from_frequency,
    load_patterns,
    membership,
    normalize,
    parse_patterns,
    recompute_thresholds,
)

__all__ = [
    "Address",
    "ComparisonRule",
    "Detector",
    "Experiment",
    "LevelBand",
    "NedetError",
    "Network",
    "PatternSet",
    "compete",
    "frequency_from_level",
    "level_from_frequency",
    "load_patterns",
    "membership",
    "normalize",
    "normalize_config",
    "parse_patterns",
    "recompute_thresholds",
    "report_from_trace",
    "run_experiment",
]


def _dump(config):
    if config is None:
        return ""
    if isinstance(config, str):
        return config
    return json.dumps(config)


def normalize_config(config=None):
    """Validated config with every default filled in."""
    return json.loads(_nedet.normalize_config(_dump(config)))


class Network:
    """A PS/RS network driven one presentation at a time.

    Inputs are lists of (Address, level) pairs.
    """

    def __init__(self, config=None):
        self._net = _nedet.Network(_dump(config))

    def add_label(self, name):
        return self._net.add_label(name)

    def present(self, inputs, teacher=None):
        return json.loads(self._net.present(list(inputs), teacher))

    def recall(self, inputs):
        return self._net.recall(list(inputs))

    def recall_step(self, inputs):
        return json.loads(self._net.recall_step(list(inputs)))

    def state(self):
        return json.loads(self._net.state())


class Experiment:
    """Train on a pattern set for the configured epochs, then recall it."""

    def __init__(self, config, patterns, _inner=None):
        self._exp = _inner or _nedet.Experiment(_dump(config), patterns)
        self._patterns = patterns

    @classmethod
    def restore(cls, checkpoint, patterns):
        inner = _nedet.Experiment.restore(_dump(checkpoint), patterns)
        return cls(None, patterns, _inner=inner)

    @property
    def done(self):
        return self._exp.done()

    def step(self):
        return json.loads(self._exp.step())

    def run(self, max_steps=None):
        if max_steps is None:
            self._exp.run()
        else:
            self._exp.run(max_steps)
        return self

    def report(self):
        return json.loads(self._exp.report())

    def checkpoint(self):
        return json.loads(self._exp.checkpoint())

    def trace(self):
        """Trace as JSON-lines text."""
        return self._exp.trace()


def run_experiment(config, patterns):
    return Experiment(config, patterns).run().report()


def report_from_trace(text):
    return json.loads(_nedet.report_from_trace(text))
