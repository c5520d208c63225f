"""Orbit and bundle stratification of small complex matrices."""

import json

from ._strata import (
    Error,
    InvalidArgument,
    NumericalAmbiguity,
    OutOfCatalog,
    ParseError,
    ReductionError,
    SpectraOverlap,
    closure_leq,
    codim_numeric,
    display,
    jordan_matrix,
    jordan_type_numeric,
    orbit_codim,
    orbit_dim,
    run,
)
from . import _strata


def _cli_json(*args):
    code, out, err = run([str(a) for a in args])
    if code != 0:
        raise Error(err.strip() or f"exit code {code}")
    return json.loads(out)


def arnold_template(jordan):
    return json.loads(_strata._template_json(jordan))


def classify_congruence(matrix, tol=1e-8):
    return json.loads(_strata._classify_json(matrix, tol))


def survey(jordan, eps, trials, seed, upper=False, tol=1e-8):
    return json.loads(_strata._survey_json(jordan, eps, trials, seed, upper, tol))


def witness(source, target, eps=1e-3, tol=1e-8):
    return json.loads(_strata._witness_json(source, target, eps, tol))


def graph(family, n=None, nilpotent=False, pattern=None, kind=None):
    args = ["graph", family]
    if n is not None:
        args += ["--n", n]
    if nilpotent:
        args.append("--nilpotent")
    if pattern is not None:
        args += ["--pattern", ",".join(str(p) for p in pattern)]
    if kind is not None:
        args += ["--kind", kind]
    return _cli_json(*args)


__all__ = [
    "Error", "InvalidArgument", "NumericalAmbiguity", "OutOfCatalog", "ParseError",
    "ReductionError", "SpectraOverlap", "arnold_template", "classify_congruence",
    "closure_leq", "codim_numeric", "display", "graph", "jordan_matrix",
    "jordan_type_numeric", "orbit_codim", "orbit_dim", "run", "survey", "witness",
]
