"""JSON Schemas for every ``--json`` document the CLI emits."""

from __future__ import annotations

import jsonschema

SCHEMA_VERSION = 1

_names = {"type": "array", "items": {"type": "string"}}
_pair = {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}
_nullable_pair = {"oneOf": [{"type": "null"}, _pair]}


def _doc(kind: str, properties: dict, required: list[str]) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": {
            "schema_version": {"const": SCHEMA_VERSION},
            "kind": {"const": kind},
            **properties,
        },
        "required": ["schema_version", "kind", *required],
    }


GRAPH_DOCUMENT = {
    "type": "object",
    "properties": {
        "vertices": _names,
        "edges": {"type": "array", "items": _pair},
    },
    "required": ["vertices", "edges"],
}

JOIN_WITNESS = {
    "type": "object",
    "properties": {
        "side_a": _names,
        "side_b": _names,
        "nonadjacent_pair_a": _pair,
        "nonadjacent_pair_b": _pair,
    },
    "required": ["side_a", "side_b", "nonadjacent_pair_a", "nonadjacent_pair_b"],
}
_nullable_witness = {"oneOf": [{"type": "null"}, JOIN_WITNESS]}

CFS_REPORT = {
    "type": "object",
    "properties": {
        "holds": {"type": "boolean"},
        "mode": {"enum": ["share3", "diagonal"]},
        "clique_factor": _names,
        "witness_component": {"type": ["integer", "null"]},
        "failure_reason": {"enum": [None, "uncovered_vertex", "disconnected_support"]},
        "square_count": {"type": "integer", "minimum": 0},
        "uncovered": _names,
    },
    "required": ["holds", "mode", "clique_factor", "witness_component", "failure_reason"],
}

CERTIFICATE = _doc("witness_certificate", {
    "cycle": {**_names, "minItems": 5},
    "checked_pairs": {"type": "array", "items": {
        "type": "object",
        "properties": {"pair": _pair, "verdict": {"const": "no_common_join"}},
        "required": ["pair", "verdict"],
    }},
    "graph_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
}, ["cycle", "checked_pairs", "graph_hash"])

_flag = {
    "type": "object",
    "properties": {"value": {"type": "boolean"}, "citations": _names},
    "required": ["value", "citations"],
}

_fraction = {
    "type": "object",
    "properties": {
        "count": {"type": "integer", "minimum": 0},
        "total": {"type": "integer", "minimum": 1},
        "fraction": {"type": "number", "minimum": 0, "maximum": 1},
        "ci95": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1},
                 "minItems": 2, "maxItems": 2},
    },
    "required": ["count", "total", "fraction", "ci95"],
}

SCHEMAS: dict[str, dict] = {
    "build": _doc("build", {
        "graph": GRAPH_DOCUMENT,
        "vertex_count": {"type": "integer"},
        "edge_count": {"type": "integer"},
        "out": {"type": ["string", "null"]},
    }, ["graph", "vertex_count", "edge_count"]),
    "build_error": _doc("build_error", {
        "error": {"type": "string"},
        "pair": _nullable_pair,
        "witness": _nullable_witness,
    }, ["error", "pair", "witness"]),
    "presentation": _doc("presentation", {
        "generators": _names,
        "relators": _names,
    }, ["generators", "relators"]),
    "dot": _doc("dot", {"dot": {"type": "string"}}, ["dot"]),
    "cfs": _doc("cfs", {"report": CFS_REPORT}, ["report"]),
    "join_pair": _doc("join_pair", {
        "pair": _pair,
        "in_common_join": {"type": "boolean"},
        "witness": _nullable_witness,
        "oracle": {"type": ["boolean", "null"]},
    }, ["pair", "in_common_join", "witness"]),
    "witness_search": _doc("witness_search", {
        "found": {"type": "boolean"},
        "certificate": {"oneOf": [{"type": "null"}, CERTIFICATE]},
        "expansions": {"type": "integer"},
        "budget_exhausted": {"type": "boolean"},
    }, ["found", "certificate", "budget_exhausted"]),
    "verification": _doc("verification", {
        "passed": {"type": "boolean"},
        "reason": {"type": "string"},
        "failing_pair": _nullable_pair,
        "witness": _nullable_witness,
    }, ["passed", "reason"]),
    "divergence_report": _doc("divergence_report", {
        "classification": {"enum": ["finite", "multi_ended", "linear", "quadratic", "unclassified"]},
        "evidence": {"type": "object"},
        "citations": _names,
        "graph_hash": {"type": "string"},
        "flags": {
            "type": "object",
            "properties": {k: _flag for k in (
                "not_relatively_hyperbolic", "stable_one_ended_subgroup",
                "morse_boundary_circle", "not_qi_to_raag")},
            "required": ["not_relatively_hyperbolic", "stable_one_ended_subgroup",
                         "morse_boundary_circle", "not_qi_to_raag"],
        },
    }, ["classification", "evidence", "citations", "graph_hash", "flags"]),
    "experiment_stats": _doc("experiment_stats", {
        "config": {"type": "object"},
        "fractions": {"type": "object", "additionalProperties": _fraction,
                      "required": ["is_join", "is_cfs", "witness_found", "quadratic"]},
        "classifications": {"type": "object", "additionalProperties": {"type": "integer"}},
        "witness_length_histogram": {"type": "object", "additionalProperties": {"type": "integer"}},
        "witness_fraction_is_lower_bound": {"const": True},
        "runtime_s": {"type": "number"},
    }, ["config", "fractions", "classifications", "witness_length_histogram"]),
    "error": _doc("error", {"error": {"type": "string"}, "exit_code": {"type": "integer"}},
                  ["error", "exit_code"]),
}


def validate(doc: dict) -> None:
    """Validate a CLI document against the schema named by its ``kind``."""
    jsonschema.validate(doc, SCHEMAS[doc["kind"]])
