"""Visible points of cut-and-project sets built from real quadratic fields."""

import json

from . import _quasivis
from ._quasivis import Error

__version__ = _quasivis.version


def _call(fn, config):
    return json.loads(fn(json.dumps(config)))


def field(d):
    """Ring of integers data, fundamental unit and Hammarhjelm verdict for Q(sqrt d)."""
    return json.loads(_quasivis.field(d))


def check_hc(dmin, dmax):
    return json.loads(_quasivis.check_hc(dmin, dmax))


def zeta(d, s=2, tol=1e-9):
    return json.loads(_quasivis.zeta(d, s, tol))


def generate(config):
    """Points of the set in T*D for each T of the config, with visibility flags."""
    return _call(_quasivis.generate, config)


def density(config):
    return _call(_quasivis.density, config)


def moebius(config):
    return _call(_quasivis.moebius, config)


def random_lattice(config):
    return _call(_quasivis.random_lattice, config)


def holes(config):
    return _call(_quasivis.holes, config)


def plot_set(config):
    return _quasivis.plot_set(json.dumps(config))


def plot_field(d, r=0.0):
    return _quasivis.plot_field(d, r)


__all__ = [
    "Error",
    "check_hc",
    "density",
    "field",
    "generate",
    "holes",
    "moebius",
    "plot_field",
    "plot_set",
    "random_lattice",
    "zeta",
]
