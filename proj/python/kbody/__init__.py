"""Python front end for the kbody C++ library."""

import json

from ._core import (
    ArgumentError,
    ContractViolation,
    DimensionError,
    ResourceError,
    entropy_floor_gamma,
    fannes_C,
    four_variable_objective,
    gap_F,
    gap_G,
    graph_stabilizer,
    graph_state_vector,
    info_projection,
    min_stabilizer_weight,
    overlap_ascent,
    overlap_bound,
    pauli_coefficients,
    relative_entropy_lower_bound,
    search_graph,
    state_from_spec,
    thermal_state,
)
from . import _core


def certify_ball(amplitudes, k, delta, label="state", scope="all"):
    return json.loads(_core.certify_ball_json(amplitudes, k, delta, label, scope))


def certify_maximally_mixed(amplitudes, k, label="state", scope="all"):
    return json.loads(_core.certify_maximally_mixed_json(amplitudes, k, label, scope))


def run_fractions(n, k, deltas, samples, seed=1, threads=1, scope="all"):
    """Rows of the detection-fraction table as dicts (CSV text is in ``_core.run_fractions_csv``)."""
    lines = _core.run_fractions_csv(n, k, list(deltas), samples, seed, threads, scope).strip().splitlines()
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        values = [float(v) for v in line.split(",")]
        row = dict(zip(header, values))
        row["samples"] = int(row["samples"])
        row["detected"] = int(row["detected"])
        rows.append(row)
    return rows


def solve_program(program):
    """Solve a marginal program given as a dict; see ``program_from_json`` in the C++ API."""
    return json.loads(_core.solve_program_json(json.dumps(program)))


def constants():
    return json.loads(_core.constants_json())
